#include "firstocc/experiments.hpp"

#include "experiments_internal.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace firstocc {

void DataTable::add_row(std::vector<std::string> row) {
  require(row.size() == columns.size(), "data table: row width mismatch in " + name);
  rows.push_back(std::move(row));
}

std::string fmt_num(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

const DataTable& ExperimentReport::table(const std::string& name) const {
  for (const DataTable& t : tables) {
    if (t.name == name) return t;
  }
  throw std::invalid_argument("report: no table named " + name);
}

// ---------------------------------------------------------------------------
// Override parsing
// ---------------------------------------------------------------------------

namespace {

class Overrides {
 public:
  Overrides(const std::map<std::string, std::string>& raw, std::string prefix)
      : raw_(raw), prefix_(std::move(prefix)) {}

  int get_int(const std::string& key, int fallback) {
    const auto v = lookup(key);
    return v ? std::stoi(*v) : fallback;
  }
  double get_double(const std::string& key, double fallback) {
    const auto v = lookup(key);
    return v ? std::stod(*v) : fallback;
  }
  bool get_bool(const std::string& key, bool fallback) {
    const auto v = lookup(key);
    if (!v) return fallback;
    return *v == "1" || *v == "true";
  }
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) {
    const auto v = lookup(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::istringstream in(*v);
    std::string tok;
    while (std::getline(in, tok, ';')) out.push_back(std::stod(tok));
    return out;
  }

  // Every override must belong to this experiment's prefix and be consumed.
  void finish() const {
    for (const auto& [key, value] : raw_) {
      if (!consumed_.count(key)) {
        throw std::invalid_argument("unknown override key '" + key + "'");
      }
    }
  }

 private:
  std::optional<std::string> lookup(const std::string& key) {
    const std::string full = prefix_ + "." + key;
    const auto it = raw_.find(full);
    if (it == raw_.end()) return std::nullopt;
    consumed_.insert(full);
    return it->second;
  }

  const std::map<std::string, std::string>& raw_;
  std::string prefix_;
  mutable std::set<std::string> consumed_;
};

std::string occupancy_artifact(const OccupancyMatrix& rep) {
  std::ostringstream out;
  char header[160];
  std::snprintf(header, sizeof(header),
                "# occupancy kind=%s gamma=%.17g states=%d actions=%d action_conditioned=%d\n",
                rep.kind == OccupancyKind::FR ? "FR" : "SR", rep.gamma, rep.num_states(),
                static_cast<int>(rep.values.size()), rep.action_conditioned ? 1 : 0);
  out << header;
  char buf[40];
  for (const Matrix& slab : rep.values) {
    for (int i = 0; i < slab.rows(); ++i) {
      for (int j = 0; j < slab.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", slab(i, j));
        out << buf << (j + 1 == slab.cols() ? '\n' : ',');
      }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Demo experiments: the two fixed rooms
// ---------------------------------------------------------------------------

ExperimentReport run_demo_two_policies(std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "fig1-demo";
  report.seed = seed;

  const DemoRoom room = two_policy_room();
  const TabularMdp& mdp = room.grid.mdp;
  Vector r = Vector::Zero(mdp.num_states);
  r[room.goal] = 1.0;

  DataTable values;
  values.name = "policy_values";
  values.columns = {"policy", "fr_start_to_goal", "sr_start_to_goal", "fr_value", "sr_value"};
  std::vector<OccupancyMatrix> fr_actions, sr_actions;
  for (std::size_t p = 0; p < room.policies.size(); ++p) {
    const OccupancyMatrix fr = fr_dp(mdp, room.policies[p]);
    const OccupancyMatrix sr = sr_dp(mdp, room.policies[p]);
    fr_actions.push_back(fr_dp_actions(mdp, room.policies[p]));
    sr_actions.push_back(sr_dp_actions(mdp, room.policies[p]));
    values.add_row({room.policy_names[p], fmt_num(fr.matrix()(room.start, room.goal)),
                    fmt_num(sr.matrix()(room.start, room.goal)),
                    fmt_num(evaluate_with_rep(fr, r)[room.start]),
                    fmt_num(evaluate_with_rep(sr, r)[room.start])});
  }
  report.tables.push_back(std::move(values));

  const GpiChoice fr_choice = gpi_select(fr_actions, r, room.start);
  const GpiChoice sr_choice = gpi_select(sr_actions, r, room.start);
  DataTable gpi;
  gpi.name = "gpi_choices";
  gpi.columns = {"representation", "selected_policy", "selected_action", "value"};
  gpi.add_row({"fr", room.policy_names[fr_choice.policy],
               action_name(room.grid.spec.action_set, fr_choice.action), fmt_num(fr_choice.value)});
  gpi.add_row({"sr", room.policy_names[sr_choice.policy],
               action_name(room.grid.spec.action_set, sr_choice.action), fmt_num(sr_choice.value)});
  report.tables.push_back(std::move(gpi));
  return report;
}

ExperimentReport run_demo_planning(std::uint64_t seed) {
  ExperimentReport report;
  report.experiment = "fig3-planning";
  report.seed = seed;

  const DemoRoom room = three_policy_room();
  const TabularMdp& mdp = room.grid.mdp;

  std::vector<OccupancyMatrix> frs;
  for (const Policy& pi : room.policies) frs.push_back(fr_dp(mdp, pi));

  const PlanTable greedy = frp(frs, room.goal, 0);
  const PlanTable converged = frp(frs, room.goal, mdp.num_states);

  DataTable table;
  table.name = "plan_table";
  table.columns = {"state", "row", "col", "gamma_greedy", "gamma_converged", "policy", "subgoal"};
  for (int s = 0; s < mdp.num_states; ++s) {
    const Cell c = room.grid.cell_of(s);
    table.add_row({std::to_string(s), std::to_string(c.row), std::to_string(c.col),
                   fmt_num(greedy.gamma_to_goal[s]), fmt_num(converged.gamma_to_goal[s]),
                   room.policy_names[converged.plan_policy[s]],
                   std::to_string(converged.plan_subgoal[s])});
  }
  report.tables.push_back(std::move(table));

  const Plan plan = construct_plan(converged, room.start);
  auto state_name = [&](int s) {
    const Cell c = room.grid.cell_of(s);
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
  };
  auto policy_name = [&](int p) { return room.policy_names[p]; };
  report.artifacts.emplace_back("plan.txt", plan_to_text(plan, converged, state_name, policy_name));

  const auto oracle = shortest_path_oracle(mdp, room.policies, room.start, room.goal);
  DataTable summary;
  summary.name = "plan_summary";
  summary.columns = {"quantity", "value"};
  summary.add_row({"greedy_policy_at_start", room.policy_names[greedy.plan_policy[room.start]]});
  summary.add_row({"plan_steps", std::to_string(plan.steps.size())});
  summary.add_row({"gamma_start_converged", fmt_num(converged.gamma_to_goal[room.start])});
  summary.add_row({"shortest_path_steps", std::to_string(oracle ? *oracle : -1)});
  report.tables.push_back(std::move(summary));
  return report;
}

}  // namespace

namespace detail {
std::string occupancy_artifact_text(const OccupancyMatrix& rep) { return occupancy_artifact(rep); }
}  // namespace detail

using detail::report_escape;
using detail::report_exploration;
using detail::report_four_rooms;
using detail::report_mountain_car;
using detail::report_mountain_car_dims;
using detail::report_noise_sweep;

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const std::string& name = config.name;
  if (name == "fig1-demo") {
    Overrides ov(config.overrides, "fig1");
    ov.finish();
    return run_demo_two_policies(config.seed);
  }
  if (name == "fig3-planning") {
    Overrides ov(config.overrides, "fig3");
    ov.finish();
    return run_demo_planning(config.seed);
  }
  if (name == "fourrooms") {
    Overrides ov(config.overrides, "fourrooms");
    FourRoomsParams p;
    p.gamma = ov.get_double("gamma", p.gamma);
    p.fr_alpha = ov.get_double("fr_alpha", p.fr_alpha);
    p.slip = ov.get_double("slip", p.slip);
    p.pretrain_passes = ov.get_int("pretrain_passes", p.pretrain_passes);
    p.pretrain_steps = ov.get_int("pretrain_steps", p.pretrain_steps);
    p.episodes = ov.get_int("episodes", p.episodes);
    p.steps_per_episode = ov.get_int("steps", p.steps_per_episode);
    const int kmax = ov.get_int("k_iters", -1);
    if (kmax >= 0) {
      p.frp_k.clear();
      for (int k = 0; k <= kmax; ++k) p.frp_k.push_back(k);
    }
    p.capture_trajectories = ov.get_bool("trajectories", p.capture_trajectories);
    ov.finish();
    return report_four_rooms(p, config.seed);
  }
  if (name == "fourrooms-noise") {
    Overrides ov(config.overrides, "noise");
    NoiseSweepParams p;
    p.slips = ov.get_doubles("slips", p.slips);
    p.base.episodes = ov.get_int("episodes", p.base.episodes);
    p.base.pretrain_passes = ov.get_int("pretrain_passes", p.base.pretrain_passes);
    ov.finish();
    return report_noise_sweep(p, config.seed);
  }
  if (name == "exploration") {
    Overrides ov(config.overrides, "exploration");
    ExplorationSuiteParams p;
    p.trials = ov.get_int("trials", p.trials);
    p.horizon = ov.get_int("horizon", p.horizon);
    p.alpha = ov.get_double("alpha", p.alpha);
    p.epsilon = ov.get_double("epsilon", p.epsilon);
    p.gamma = ov.get_double("gamma", p.gamma);
    p.rep_alpha = ov.get_double("rep_alpha", p.rep_alpha);
    p.betas = ov.get_doubles("betas", p.betas);
    ov.finish();
    return report_exploration(p, config.seed);
  }
  if (name == "mountaincar-ff") {
    Overrides ov(config.overrides, "mountaincar");
    MountainCarParams p;
    p.feature_dim = ov.get_int("features", p.feature_dim);
    p.threshold = ov.get_double("threshold", p.threshold);
    p.gamma = ov.get_double("gamma", p.gamma);
    p.alpha = ov.get_double("alpha", p.alpha);
    p.seeds = ov.get_int("seeds", p.seeds);
    p.goals_per_seed = ov.get_int("goals", p.goals_per_seed);
    p.pretrain_episodes = ov.get_int("pretrain_episodes", p.pretrain_episodes);
    p.cache_representations = ov.get_bool("cache", p.cache_representations);
    ov.finish();
    return report_mountain_car(p, config.seed);
  }
  if (name == "mountaincar-dims") {
    Overrides ov(config.overrides, "dims");
    DimsSweepParams p;
    const std::vector<double> dims_raw =
        ov.get_doubles("dims", std::vector<double>(p.dims.begin(), p.dims.end()));
    p.dims.assign(dims_raw.begin(), dims_raw.end());
    p.example_goal = ov.get_double("goal", p.example_goal);
    ov.finish();
    return report_mountain_car_dims(p, config.seed);
  }
  if (name == "escape") {
    Overrides ov(config.overrides, "escape");
    EscapeParams p;
    p.explore_episodes = ov.get_int("explore_episodes", p.explore_episodes);
    p.explore_steps = ov.get_int("explore_steps", p.explore_steps);
    p.trials = ov.get_int("trials", p.trials);
    p.trial_max_steps = ov.get_int("trial_steps", p.trial_max_steps);
    ov.finish();
    return report_escape(p, config.seed);
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& format,
                                     const std::string& out_dir) {
  require(format == "csv" || format == "plotdata", "emit_report: format must be csv or plotdata");
  require(!report.tables.empty() || !report.artifacts.empty(), "emit_report: empty report");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("emit_report: cannot create " + out_dir + ": " + ec.message());

  std::vector<std::string> written;
  auto open_out = [&](const std::string& file) {
    const std::string path = (fs::path(out_dir) / file).string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot open " + path);
    written.push_back(path);
    return out;
  };

  for (const DataTable& t : report.tables) {
    if (t.rows.empty()) {
      throw std::runtime_error("emit_report: table '" + t.name + "' has no rows");
    }
    if (format == "csv") {
      auto out = open_out(t.name + ".csv");
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out << t.columns[c] << (c + 1 == t.columns.size() ? '\n' : ',');
      }
      for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          out << row[c] << (c + 1 == row.size() ? '\n' : ',');
        }
      }
    } else if (t.series) {
      auto out = open_out(t.name + ".dat");
      out << "#";
      for (const std::string& c : t.columns) out << ' ' << c;
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          out << row[c] << (c + 1 == row.size() ? '\n' : ' ');
        }
      }
    }
  }
  if (format == "csv") {
    for (const auto& [file, content] : report.artifacts) {
      auto out = open_out(file);
      out << content;
    }
  }
  return written;
}

}  // namespace firstocc
