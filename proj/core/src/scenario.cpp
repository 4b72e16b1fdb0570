#include "agentattack/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "agentattack/errors.hpp"

namespace agentattack {

const char* to_string(AttackMode mode) {
  return mode == AttackMode::all_time ? "all-time" : "instant";
}

EffortCostModel ScenarioConfig::effort_model() const {
  EffortCostModel model;
  model.attacker_locations = attacker_locations;
  model.epsilon = epsilon.value_or(0.0);
  model.num_states = mdp.num_states();
  return model;
}

namespace {

/// Reads typed fields and records violations instead of throwing.
class Reader {
 public:
  std::vector<std::string> violations;

  template <typename T>
  std::optional<T> get(const YAML::Node& parent, const std::string& key, const std::string& path) {
    const YAML::Node node = parent[key];
    if (!node) return std::nullopt;
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      violations.push_back(path + ": wrong type");
      return std::nullopt;
    }
  }

  template <typename T>
  T require(const YAML::Node& parent, const std::string& key, const std::string& path, T fallback = T{}) {
    if (!parent[key]) {
      violations.push_back(path + " required");
      return fallback;
    }
    return get<T>(parent, key, path).value_or(fallback);
  }
};

PolicyKind policy_from(const std::string& s, Reader& r, const std::string& path) {
  if (s == "random") return PolicyKind::random;
  if (s == "none") return PolicyKind::none;
  if (s == "optimal") return PolicyKind::optimal;
  r.violations.push_back(path + ": unknown baseline '" + s + "'");
  return PolicyKind::none;
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& v : validate_mdp(cfg.mdp).violations) out.push_back("mdp." + v);
  const int S = cfg.mdp.num_states();
  const std::size_t n = static_cast<std::size_t>(std::max(cfg.mdp.n_recipients, 0));
  const std::size_t m = cfg.attackers();

  if (cfg.initial_states.size() != n) {
    out.push_back("mdp.initial_states: expected " + std::to_string(n) + " entries");
  }
  for (int s : cfg.initial_states) {
    if (s < 0 || s >= S) out.push_back("mdp.initial_states: state " + std::to_string(s) + " out of range");
  }
  if (m == 0) out.push_back("attackers.budgets: need at least one attacker");
  for (double b : cfg.budgets) {
    if (!(b >= 0.0)) out.push_back("attackers.budgets: entries must be >= 0");
  }

  if (cfg.mode == AttackMode::all_time) {
    if (!cfg.costs) {
      out.push_back("attackers.costs required");
    } else {
      if (cfg.costs->rows() != n || cfg.costs->cols() != m) {
        out.push_back("attackers.costs: expected " + std::to_string(n) + " x " + std::to_string(m));
      }
      for (double c : cfg.costs->data()) {
        if (!(c >= 0.0) || !std::isfinite(c)) out.push_back("attackers.costs: entries must be finite and >= 0");
      }
      if (out.empty()) {
        try {
          const double step = cfg.budget_step.value_or(BudgetGrid::default_step(cfg.budgets, *cfg.costs));
          (void)BudgetGrid::make(step, cfg.budgets, *cfg.costs);
        } catch (const GridError& e) {
          out.push_back(std::string("attackers.budget_step: ") + e.what());
        }
      }
    }
  } else {
    if (!cfg.epsilon) {
      out.push_back("attackers.epsilon required");
    } else if (!(*cfg.epsilon > 0.0)) {
      out.push_back("attackers.epsilon: must be positive");
    }
    if (cfg.attacker_locations.size() != m) {
      out.push_back("attackers.locations: expected " + std::to_string(m) + " entries");
    }
    for (int loc : cfg.attacker_locations) {
      if (loc < 0 || loc >= S) out.push_back("attackers.locations: state " + std::to_string(loc) + " out of range");
    }
    if (cfg.solver.grid_divisions < 1) out.push_back("attackers.allocation_divisions: must be >= 1");
    for (auto b : cfg.baselines) {
      if (b == PolicyKind::random && (n != 2 || m != 2)) {
        out.push_back("experiment.baselines: random instant baseline needs 2 recipients and 2 attackers");
      }
    }
  }
  if (cfg.episodes < 1) out.push_back("experiment.episodes: must be >= 1");
  return out;
}

ScenarioConfig parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError("parse", {std::string("yaml: ") + e.what()});
  }
  if (!root.IsMap()) throw ValidationError("parse", {"scenario: top level must be a mapping"});

  Reader r;
  ScenarioConfig cfg;
  cfg.name = r.get<std::string>(root, "name", "name").value_or("scenario");

  const YAML::Node mdp = root["mdp"];
  const YAML::Node att = root["attackers"];
  const YAML::Node exp = root["experiment"];
  if (!mdp) r.violations.push_back("mdp required");
  if (!att) r.violations.push_back("attackers required");
  if (!r.violations.empty()) throw ValidationError("config", r.violations);

  cfg.mdp.states.labels = r.require<std::vector<std::string>>(mdp, "states", "mdp.states");
  cfg.mdp.actions.labels = r.require<std::vector<std::string>>(mdp, "actions", "mdp.actions");
  cfg.mdp.horizon = r.require<int>(mdp, "horizon", "mdp.horizon");
  cfg.mdp.n_recipients = r.require<int>(mdp, "recipients", "mdp.recipients", 1);
  cfg.initial_states = r.get<std::vector<int>>(mdp, "initial_states", "mdp.initial_states")
                           .value_or(JointState(static_cast<std::size_t>(std::max(cfg.mdp.n_recipients, 0)), 0));

  const auto rows = r.require<std::vector<std::vector<std::vector<double>>>>(mdp, "transitions", "mdp.transitions");
  const int S = cfg.mdp.num_states();
  const int A = cfg.mdp.num_actions();
  bool shape_ok = static_cast<int>(rows.size()) == S;
  for (std::size_t s = 0; shape_ok && s < rows.size(); ++s) {
    shape_ok = static_cast<int>(rows[s].size()) == A;
    for (std::size_t a = 0; shape_ok && a < rows[s].size(); ++a) shape_ok = static_cast<int>(rows[s][a].size()) == S;
  }
  if (mdp["transitions"] && !shape_ok) {
    r.violations.push_back("mdp.transitions: expected shape [states][actions][states]");
  } else if (shape_ok) {
    cfg.mdp.transition = TransitionModel::from_rows(rows);
  }
  const auto rewards = r.require<std::vector<std::vector<double>>>(mdp, "rewards", "mdp.rewards");
  bool reward_ok = static_cast<int>(rewards.size()) == S;
  for (const auto& row : rewards) reward_ok = reward_ok && static_cast<int>(row.size()) == S;
  if (mdp["rewards"] && !reward_ok) {
    r.violations.push_back("mdp.rewards: expected shape [states][states]");
  } else if (reward_ok) {
    cfg.mdp.reward = RewardTable::from_rows(rewards);
  }

  const std::string mode = r.require<std::string>(att, "mode", "attackers.mode", "all-time");
  if (mode == "all-time") {
    cfg.mode = AttackMode::all_time;
  } else if (mode == "instant") {
    cfg.mode = AttackMode::instant;
  } else {
    r.violations.push_back("attackers.mode: expected 'all-time' or 'instant'");
  }
  cfg.budgets = r.require<std::vector<double>>(att, "budgets", "attackers.budgets");
  if (att["count"]) {
    const auto count = r.get<std::size_t>(att, "count", "attackers.count");
    if (count && *count != cfg.budgets.size()) r.violations.push_back("attackers.count: differs from budgets length");
  }
  if (auto costs = r.get<std::vector<std::vector<double>>>(att, "costs", "attackers.costs")) {
    try {
      cfg.costs = CostMatrix::from_rows(*costs);
    } catch (const std::invalid_argument&) {
      r.violations.push_back("attackers.costs: ragged rows");
    }
  }
  cfg.budget_step = r.get<double>(att, "budget_step", "attackers.budget_step");
  if (auto single = r.get<bool>(att, "single_attacker_per_recipient", "attackers.single_attacker_per_recipient")) {
    cfg.enumeration = *single ? AttackEnumeration::single_attacker : AttackEnumeration::all_subsets;
  }
  cfg.attacker_locations = r.get<std::vector<int>>(att, "locations", "attackers.locations").value_or(std::vector<int>{});
  cfg.epsilon = r.get<double>(att, "epsilon", "attackers.epsilon");
  cfg.solver.grid_divisions = r.get<int>(att, "allocation_divisions", "attackers.allocation_divisions").value_or(160);
  cfg.solver.refine_tolerance = r.get<double>(att, "refine_tolerance", "attackers.refine_tolerance").value_or(1e-6);

  if (exp) {
    if (auto names = r.get<std::vector<std::string>>(exp, "baselines", "experiment.baselines")) {
      cfg.baselines.clear();
      for (const auto& nm : *names) cfg.baselines.push_back(policy_from(nm, r, "experiment.baselines"));
    }
    cfg.episodes = r.get<std::size_t>(exp, "episodes", "experiment.episodes").value_or(cfg.episodes);
    cfg.seed = r.get<std::uint64_t>(exp, "seed", "experiment.seed").value_or(cfg.seed);
  }

  if (r.violations.empty()) {
    for (auto& v : validate_scenario(cfg)) r.violations.push_back(std::move(v));
  }
  if (!r.violations.empty()) throw ValidationError("config", r.violations);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("io", {"cannot open scenario file " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string emit_scenario(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << cfg.name;

  out << YAML::Key << "mdp" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "states" << YAML::Value << YAML::Flow << cfg.mdp.states.labels;
  out << YAML::Key << "actions" << YAML::Value << YAML::Flow << cfg.mdp.actions.labels;
  out << YAML::Key << "horizon" << YAML::Value << cfg.mdp.horizon;
  out << YAML::Key << "recipients" << YAML::Value << cfg.mdp.n_recipients;
  out << YAML::Key << "initial_states" << YAML::Value << YAML::Flow << cfg.initial_states;
  out << YAML::Key << "transitions" << YAML::Value << YAML::BeginSeq;
  for (int s = 0; s < cfg.mdp.num_states(); ++s) {
    out << YAML::Flow << YAML::BeginSeq;
    for (int a = 0; a < cfg.mdp.num_actions(); ++a) {
      const auto row = cfg.mdp.transition.row(s, a);
      out << YAML::Flow << std::vector<double>(row.begin(), row.end());
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "rewards" << YAML::Value << YAML::BeginSeq;
  for (std::size_t s = 0; s < cfg.mdp.reward.rows(); ++s) {
    const auto row = cfg.mdp.reward.row(s);
    out << YAML::Flow << std::vector<double>(row.begin(), row.end());
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "attackers" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(cfg.mode);
  out << YAML::Key << "budgets" << YAML::Value << YAML::Flow << cfg.budgets;
  if (cfg.costs) {
    out << YAML::Key << "costs" << YAML::Value << YAML::BeginSeq;
    for (std::size_t i = 0; i < cfg.costs->rows(); ++i) {
      const auto row = cfg.costs->row(i);
      out << YAML::Flow << std::vector<double>(row.begin(), row.end());
    }
    out << YAML::EndSeq;
  }
  if (cfg.budget_step) out << YAML::Key << "budget_step" << YAML::Value << *cfg.budget_step;
  out << YAML::Key << "single_attacker_per_recipient" << YAML::Value
      << (cfg.enumeration == AttackEnumeration::single_attacker);
  if (!cfg.attacker_locations.empty()) {
    out << YAML::Key << "locations" << YAML::Value << YAML::Flow << cfg.attacker_locations;
  }
  if (cfg.epsilon) out << YAML::Key << "epsilon" << YAML::Value << *cfg.epsilon;
  out << YAML::Key << "allocation_divisions" << YAML::Value << cfg.solver.grid_divisions;
  out << YAML::Key << "refine_tolerance" << YAML::Value << cfg.solver.refine_tolerance;
  out << YAML::EndMap;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  std::vector<std::string> names;
  for (auto b : cfg.baselines) names.emplace_back(to_string(b));
  out << YAML::Key << "baselines" << YAML::Value << YAML::Flow << names;
  out << YAML::Key << "episodes" << YAML::Value << cfg.episodes;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace agentattack
