// Command-line front end: validate, solve-policy, plan, simulate, compare.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "agentattack/errors.hpp"
#include "agentattack/experiment.hpp"
#include "agentattack/scenario.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace agentattack;

namespace {

struct CommonArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario, "Scenario YAML file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Override experiment.seed");
  cmd->add_option("--out", args.out, "Output directory")->capture_default_str();
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot open " + path.string() + " for writing");
  out << text;
}

int print_error(const std::string& kind, const std::string& message,
                const std::vector<std::string>& details = {}) {
  nlohmann::json line{{"error", kind}, {"message", message}};
  if (!details.empty()) line["violations"] = details;
  std::cerr << line.dump() << '\n';
  return kind == "config" || kind == "parse" ? 2 : 1;
}

int cmd_validate(const CommonArgs& args) {
  const auto cfg = load_scenario(args.scenario);
  std::cout << "ok: " << cfg.name << " (" << to_string(cfg.mode) << ", S=" << cfg.mdp.num_states()
            << ", n=" << cfg.mdp.n_recipients << ", m=" << cfg.attackers()
            << ", T=" << cfg.mdp.horizon << ")\n";
  return 0;
}

int cmd_solve_policy(const CommonArgs& args) {
  const auto cfg = load_scenario(args.scenario);
  const auto sol = solve_recipient_policy(cfg.mdp);
  const auto& mdp = cfg.mdp;
  for (int t = 0; t < mdp.horizon; ++t) {
    std::cout << "t=" << t << ":";
    for (int s = 0; s < mdp.num_states(); ++s) {
      std::cout << ' ' << mdp.states.labels[s] << "->" << mdp.actions.labels[sol.policy.action(t, s)]
                << " (" << format_real(sol.values.v[t][s]) << ")";
    }
    std::cout << '\n';
  }
  std::cout << "unattacked group value = "
            << format_real(unattacked_group_value(mdp, sol.policy, cfg.initial_states)) << '\n';
  nlohmann::json doc{{"scenario", cfg.name},
                     {"states", mdp.states.labels},
                     {"actions", mdp.actions.labels},
                     {"policy", sol.policy.action_of},
                     {"values", sol.values.v}};
  write_text(fs::path(args.out) / "policy.json", doc.dump(1) + "\n");
  return 0;
}

RunOptions run_options(const CommonArgs& args, bool monte_carlo) {
  RunOptions opts;
  opts.monte_carlo = monte_carlo;
  opts.seed = args.seed;
  opts.episodes = args.episodes;
  return opts;
}

int cmd_plan(const CommonArgs& args) {
  const auto cfg = load_scenario(args.scenario);
  auto bundle = run_experiment(cfg, run_options(args, false));
  write_text(fs::path(args.out) / "tables.json", tables_json(bundle));
  const auto* opt = bundle.find(PolicyKind::optimal);
  std::cout << "optimal value at initial state = " << format_real(opt->exact) << '\n';
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const auto cfg = load_scenario(args.scenario);
  auto bundle = run_experiment(cfg, run_options(args, true));
  std::erase_if(bundle.curves, [](const Curve& c) { return c.estimator != "monte_carlo"; });
  write_text(fs::path(args.out) / "curves.csv", curves_csv(bundle));
  for (const auto& p : bundle.policies) {
    std::cout << "monte_carlo " << to_string(p.policy) << " = " << format_real(p.monte_carlo->mean)
              << " +- " << format_real(p.monte_carlo->standard_error) << '\n';
  }
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  const auto cfg = load_scenario(args.scenario);
  const auto bundle = run_experiment(cfg, run_options(args, true));
  emit_results(bundle, OutputPaths::in(args.out));
  std::cout << summary_text(bundle);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal cost-constrained state-poisoning attacks on multi-agent MDPs"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  auto* solve = app.add_subcommand("solve-policy", "Solve the recipients' own MDP");
  auto* plan = app.add_subcommand("plan", "Compute optimal attack value tables");
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo rollouts of every policy");
  auto* compare = app.add_subcommand("compare", "Plan, evaluate and compare against baselines");
  for (auto* cmd : {validate, solve, plan, simulate, compare}) add_common(cmd, args);
  for (auto* cmd : {simulate, compare}) {
    cmd->add_option("--episodes", args.episodes, "Override experiment.episodes");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return print_error("usage", e.what());
  }

  try {
    if (*validate) return cmd_validate(args);
    if (*solve) return cmd_solve_policy(args);
    if (*plan) return cmd_plan(args);
    if (*simulate) return cmd_simulate(args);
    if (*compare) return cmd_compare(args);
  } catch (const ValidationError& e) {
    return print_error(e.kind(), "validation failed", e.violations());
  } catch (const Error& e) {
    return print_error(e.kind(), e.what());
  } catch (const std::exception& e) {
    return print_error("internal", e.what());
  }
  return 1;
}
