#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agentattack/scenario.hpp"

namespace agentattack {

struct Curve {
  PolicyKind policy;
  /// "exact" or "monte_carlo"
  std::string estimator;
  /// cumulative expected group reward at indices 0..T
  std::vector<double> values;
  /// Monte-Carlo only; empty for exact curves
  std::vector<double> standard_error;
};

struct PolicySummary {
  PolicyKind policy;
  double exact = 0.0;
  std::optional<MonteCarloEstimate> monte_carlo;
};

struct ResultBundle {
  ScenarioConfig config;
  RecipientSolution recipients;
  std::optional<AllTimeTables> alltime;
  std::optional<InstantTables> instant;
  /// optimal first, then the configured baselines
  std::vector<PolicySummary> policies;
  std::vector<Curve> curves;
  std::optional<double> ratio_optimal_random;
  std::optional<double> ratio_optimal_none;

  const PolicySummary* find(PolicyKind kind) const;
};

struct RunOptions {
  bool monte_carlo = true;
  std::optional<std::size_t> episodes;
  std::optional<std::uint64_t> seed;
};

/// Plans with the scenario's mode, evaluates the optimal attack and every
/// baseline exactly (forward pass) and by rollouts, and forms the ratios.
ResultBundle run_experiment(const ScenarioConfig& config, const RunOptions& options = {});

/// Header "time_index,policy,cumulative_expected_reward,estimator".
std::string curves_csv(const ResultBundle& bundle);

/// Value tables and attack policy; layout documented in the README.
std::string tables_json(const ResultBundle& bundle);

/// Human-readable summary including "optimal/random = 0.XX" lines.
std::string summary_text(const ResultBundle& bundle);

struct OutputPaths {
  std::filesystem::path curves;
  std::filesystem::path tables;
  std::filesystem::path summary;

  static OutputPaths in(const std::filesystem::path& dir);
};

/// Writes the three outputs; throws Error("io", ...) on failure.
void emit_results(const ResultBundle& bundle, const OutputPaths& paths);

/// Formats a real with fixed 12 significant digits (stable across runs).
std::string format_real(double v);

}  // namespace agentattack
