#include "agentattack/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "agentattack/errors.hpp"
#include "json.hpp"

namespace agentattack {

const PolicySummary* ResultBundle::find(PolicyKind kind) const {
  for (const auto& p : policies)
    if (p.policy == kind) return &p;
  return nullptr;
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::vector<PolicyKind> policy_order(const ScenarioConfig& cfg) {
  std::vector<PolicyKind> order{PolicyKind::optimal};
  for (auto b : cfg.baselines) {
    if (std::find(order.begin(), order.end(), b) == order.end()) order.push_back(b);
  }
  return order;
}

std::optional<double> ratio(const ResultBundle& b, PolicyKind denom) {
  const auto* num = b.find(PolicyKind::optimal);
  const auto* den = b.find(denom);
  if (num == nullptr || den == nullptr || b.config.mdp.horizon == 0 || den->exact == 0.0) {
    return std::nullopt;
  }
  return num->exact / den->exact;
}

}  // namespace

ResultBundle run_experiment(const ScenarioConfig& input, const RunOptions& options) {
  ResultBundle bundle;
  bundle.config = input;
  auto& cfg = bundle.config;
  if (options.episodes) cfg.episodes = *options.episodes;
  if (options.seed) cfg.seed = *options.seed;
  if (auto v = validate_scenario(cfg); !v.empty()) throw ValidationError("config", v);

  bundle.recipients = solve_recipient_policy(cfg.mdp);
  const auto& policy = bundle.recipients.policy;
  const auto& mdp = cfg.mdp;
  const auto& s0 = cfg.initial_states;

  auto record = [&](PolicyKind kind, std::vector<double> exact, std::optional<MonteCarloEstimate> mc) {
    PolicySummary summary{kind, exact.back(), mc};
    bundle.curves.push_back({kind, "exact", std::move(exact), {}});
    if (mc) {
      bundle.curves.push_back({kind, "monte_carlo", mc->cumulative_mean, mc->cumulative_standard_error});
    }
    bundle.policies.push_back(std::move(summary));
  };

  if (cfg.mode == AttackMode::all_time) {
    AllTimeOptions opts;
    opts.budget_step = cfg.budget_step;
    opts.enumeration = cfg.enumeration;
    bundle.alltime = plan_alltime(mdp, policy, *cfg.costs, cfg.budgets, opts);
    const auto& tables = *bundle.alltime;
    for (auto kind : policy_order(cfg)) {
      auto attacker = kind == PolicyKind::optimal ? AllTimeAttackPolicy::optimal(tables)
                      : kind == PolicyKind::random
                          ? AllTimeAttackPolicy::random(*cfg.costs, tables.grid(), mdp.num_states(), cfg.enumeration)
                          : AllTimeAttackPolicy::none(*cfg.costs, tables.grid());
      std::optional<MonteCarloEstimate> mc;
      if (options.monte_carlo) mc = monte_carlo_value(mdp, policy, attacker, s0, cfg.episodes, cfg.seed);
      record(kind, exact_curve(mdp, policy, attacker, s0), std::move(mc));
    }
  } else {
    const auto model = cfg.effort_model();
    bundle.instant = plan_instant(mdp, policy, cfg.budgets, model, cfg.solver);
    const auto& tables = *bundle.instant;
    for (auto kind : policy_order(cfg)) {
      auto attacker = kind == PolicyKind::optimal ? InstantAttackPolicy::optimal(tables, cfg.budgets)
                      : kind == PolicyKind::random ? InstantAttackPolicy::random(cfg.budgets)
                                                   : InstantAttackPolicy::none(cfg.budgets);
      std::optional<MonteCarloEstimate> mc;
      if (options.monte_carlo) mc = monte_carlo_value(mdp, policy, attacker, model, s0, cfg.episodes, cfg.seed);
      record(kind, exact_curve(mdp, policy, attacker, model, s0), std::move(mc));
    }
  }
  bundle.ratio_optimal_random = ratio(bundle, PolicyKind::random);
  bundle.ratio_optimal_none = ratio(bundle, PolicyKind::none);
  return bundle;
}

std::string curves_csv(const ResultBundle& bundle) {
  std::ostringstream out;
  out << "time_index,policy,cumulative_expected_reward,estimator\n";
  for (const auto& curve : bundle.curves) {
    for (std::size_t t = 0; t < curve.values.size(); ++t) {
      out << t << ',' << to_string(curve.policy) << ',' << format_real(curve.values[t]) << ','
          << curve.estimator << '\n';
    }
  }
  return out.str();
}

std::string tables_json(const ResultBundle& bundle) {
  using nlohmann::json;
  const auto& cfg = bundle.config;
  const int S = cfg.mdp.num_states();
  json doc;
  doc["scenario"] = cfg.name;
  doc["mode"] = to_string(cfg.mode);
  doc["horizon"] = cfg.mdp.horizon;
  doc["states"] = cfg.mdp.states.labels;
  doc["actions"] = cfg.mdp.actions.labels;
  doc["recipient_policy"] = bundle.recipients.policy.action_of;
  doc["recipient_values"] = bundle.recipients.values.v;

  if (bundle.alltime) {
    const auto& tables = *bundle.alltime;
    const auto& index = tables.index;
    const auto& grid = tables.grid();
    doc["budget_step"] = grid.step;
    auto amounts = [&](const std::vector<long>& units) {
      std::vector<double> out;
      for (long u : units) out.push_back(grid.amount_of(u));
      return out;
    };
    json values = json::array();
    json attacks = json::array();
    for (int t = 0; t <= tables.horizon(); ++t) {
      json rows = json::array();
      for (std::size_t a = 0; a < index.joint_count(); ++a) {
        for (std::size_t b = 0; b < index.budget_count(); ++b) {
          const std::size_t k = index.compose(a, a, b);
          const auto actual = decode_joint(a, S, cfg.mdp.n_recipients);
          const auto budget = amounts(index.budget_of(b));
          rows.push_back({{"actual", actual}, {"budget", budget}, {"value", tables.value[t][k]}});
          if (t < tables.horizon()) {
            const auto& act = tables.best_attack[t][k];
            std::vector<std::vector<int>> beta;
            for (std::size_t i = 0; i < act.participation.rows(); ++i) {
              const auto r = act.participation.row(i);
              beta.emplace_back(r.begin(), r.end());
            }
            attacks.push_back({{"time_index", t}, {"actual", actual}, {"budget", budget},
                               {"targets", act.targets}, {"participation", beta}});
          }
        }
      }
      values.push_back({{"time_index", t}, {"rows", std::move(rows)}});
    }
    doc["value_tables"] = std::move(values);
    doc["attack_policy"] = std::move(attacks);
  }

  if (bundle.instant) {
    const auto& tables = *bundle.instant;
    const auto& index = tables.index;
    json values = json::array();
    json halves = json::array();
    json allocs = json::array();
    for (int t = 0; t <= tables.horizon(); ++t) {
      json rows = json::array();
      for (std::size_t a = 0; a < index.joint_count(); ++a) {
        const auto actual = decode_joint(a, S, cfg.mdp.n_recipients);
        rows.push_back({{"actual", actual}, {"value", tables.value[t][index.compose(a, a, 0)]}});
        if (t < tables.horizon()) {
          const auto& x = tables.allocation[t][a];
          std::vector<std::vector<double>> rowsx;
          for (std::size_t i = 0; i < x.rows(); ++i) rowsx.emplace_back(x.row(i).begin(), x.row(i).end());
          allocs.push_back({{"time_index", t}, {"actual", actual}, {"allocation", rowsx},
                            {"value", tables.diagnostics[t][a].value}});
        }
      }
      values.push_back({{"time_index", t}, {"rows", std::move(rows)}});
    }
    for (int t = 1; t <= tables.horizon(); ++t) {
      json rows = json::array();
      for (std::size_t k = 0; k < index.size(); ++k) {
        const auto st = index.state_of(k);
        rows.push_back({{"actual", st.actual}, {"delusion", st.delusion}, {"value", tables.half_value[t - 1][k]}});
      }
      halves.push_back({{"time_index", t - 0.5}, {"rows", std::move(rows)}});
    }
    doc["value_tables"] = std::move(values);
    doc["half_value_tables"] = std::move(halves);
    doc["allocation_policy"] = std::move(allocs);
  }
  return doc.dump(1) + "\n";
}

std::string summary_text(const ResultBundle& bundle) {
  std::ostringstream out;
  out << "scenario = " << bundle.config.name << '\n';
  out << "mode = " << to_string(bundle.config.mode) << '\n';
  out << "horizon = " << bundle.config.mdp.horizon << '\n';
  for (const auto& p : bundle.policies) {
    out << "exact " << to_string(p.policy) << " = " << format_real(p.exact) << '\n';
    if (p.monte_carlo) {
      out << "monte_carlo " << to_string(p.policy) << " = " << format_real(p.monte_carlo->mean)
          << " +- " << format_real(p.monte_carlo->standard_error) << " (" << p.monte_carlo->episodes
          << " episodes, seed " << p.monte_carlo->seed << ")\n";
    }
  }
  auto ratio_line = [&](const char* label, const std::optional<double>& r) {
    out << label << " = ";
    if (r) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *r);
      out << buf;
    } else {
      out << "undefined";
    }
    out << '\n';
  };
  if (bundle.find(PolicyKind::random)) ratio_line("optimal/random", bundle.ratio_optimal_random);
  if (bundle.find(PolicyKind::none)) ratio_line("optimal/none", bundle.ratio_optimal_none);
  return out.str();
}

OutputPaths OutputPaths::in(const std::filesystem::path& dir) {
  return {dir / "curves.csv", dir / "tables.json", dir / "summary.txt"};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("io", "failed writing " + path.string());
}

}  // namespace

void emit_results(const ResultBundle& bundle, const OutputPaths& paths) {
  write_file(paths.curves, curves_csv(bundle));
  write_file(paths.tables, tables_json(bundle));
  write_file(paths.summary, summary_text(bundle));
}

}  // namespace agentattack
