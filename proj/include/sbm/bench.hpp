// Copyright 2026 The sbm Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Benchmark harness: repeated solves of one instance, per-run records,
// success probability against a target and time-to-target.

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sbm/encoders.hpp"
#include "sbm/engine.hpp"
#include "sbm/instances.hpp"
#include "sbm/io.hpp"
#include "sbm/metrics.hpp"
#include "sbm/oracles.hpp"

namespace sbm {

/// A max-cut or knapsack instance, or a bare Ising model (objective -energy).
using BenchProblem = std::variant<MaxCutInstance, KnapsackInstance, IsingModel>;

enum class ProblemFormat { GSet, Knapsack, IsingJson };

inline BenchProblem load_problem(const std::string& path, ProblemFormat format,
                                 ParseMode mode = ParseMode::Strict) {
  const std::string text = read_file(path);
  switch (format) {
    case ProblemFormat::GSet:
      return parse_gset(text);
    case ProblemFormat::Knapsack:
      return parse_knapsack(text, mode);
    case ProblemFormat::IsingJson: {
      const Json j = detail::parse_json(text);
      return is_qubo_json(j) ? qubo_to_ising(qubo_from_json(j)) : ising_from_json(j);
    }
  }
  throw InvalidArgument("unknown problem format");
}

enum class TargetSource {
  None,    // no target: no success probability or TTT
  Auto,    // knapsack: DP; up to 20 spins: exhaustive; otherwise annealing
  Exact,   // exhaustive search (max-cut, Ising) or DP (knapsack)
  Anneal,  // best of several simulated annealing runs
  User,    // value supplied by the caller, e.g. a best-known cut
};

struct TargetPolicy {
  TargetSource source = TargetSource::Auto;
  std::optional<double> value;  // for User
  double fraction = 0.9;
  std::size_t anneal_sweeps = 2000;
  std::size_t anneal_restarts = 8;
  std::uint64_t anneal_seed = 1;
  std::optional<double> t_com;  // time per run for TTT; default: measured mean
};

struct BenchOptions {
  std::optional<double> penalty;  // knapsack lambda; default_penalty if unset
};

struct RunRecord {
  std::size_t run_index = 0;
  double final_energy = 0.0;  // on the unscaled model
  double objective = 0.0;
  bool feasible = true;
  double wall_time_s = 0.0;
  SaturationCounters saturation;
};

struct BenchReport {
  std::string problem;  // "maxcut", "knapsack" or "ising"
  std::size_t n_spins = 0;
  SolverConfig config;
  std::vector<RunRecord> runs;

  std::optional<double> target;
  std::string target_source;
  double fraction = 0.9;
  std::optional<double> threshold;

  double best_objective = 0.0;
  double mean_objective = 0.0;
  std::size_t best_run = 0;
  SpinVector best_spins;
  std::optional<double> success_probability;
  double t_com = 0.0;
  std::optional<double> ttt;
  std::string ttt_note;
  std::vector<CdfPoint> cdf;

  SaturationCounters saturation;
  double c0 = 0.0;
  double dt = 0.0;
  double coupling_scale = 1.0;  // Fixed back end: integer couplings = scale * J
  std::optional<FormatPlan> formats;
};

/// Threshold a run must reach: fraction * target for non-negative targets,
/// and the same relative distance below the target otherwise.
inline double success_threshold(double target, double fraction) {
  return target - (1.0 - fraction) * std::abs(target);
}

namespace detail {

inline const char* problem_name(const BenchProblem& p) {
  switch (p.index()) {
    case 0:
      return "maxcut";
    case 1:
      return "knapsack";
    default:
      return "ising";
  }
}

/// Gauge-fixes an annealed state of a field-free model so its ancilla is +1.
inline SpinVector pin_ancilla_gauge(SpinVector s, std::optional<std::size_t> ancilla) {
  if (ancilla && s[*ancilla] < 0) return s.negated();
  return s;
}

inline double anneal_target(const IsingModel& model, std::optional<std::size_t> ancilla,
                            const TargetPolicy& policy, auto&& objective) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, policy.anneal_restarts); ++r) {
    const auto schedule = default_schedule(model, policy.anneal_sweeps, policy.anneal_seed + r);
    const auto g = simulated_annealing(model, schedule);
    best = std::max(best, objective(pin_ancilla_gauge(g.spins, ancilla)));
  }
  return best;
}

}  // namespace detail

/// Target objective for `problem` under `policy` (nullopt for None).
inline std::optional<double> compute_target(const BenchProblem& problem,
                                            const TargetPolicy& policy,
                                            const BenchOptions& options = {}) {
  TargetSource src = policy.source;
  if (src == TargetSource::None) return std::nullopt;
  if (src == TargetSource::User) {
    if (!policy.value) throw InvalidArgument("user target selected but no value given");
    return *policy.value;
  }
  if (const auto* k = std::get_if<KnapsackInstance>(&problem)) {
    if (src == TargetSource::Auto || src == TargetSource::Exact) return knapsack_dp(*k).optimal_value;
    const Encoding enc = encode_knapsack(*k, options.penalty.value_or(default_penalty(*k)));
    return detail::anneal_target(enc.model, enc.ancilla(), policy,
                                 [&](const SpinVector& s) { return objective_value(enc, s); });
  }
  if (const auto* g = std::get_if<MaxCutInstance>(&problem)) {
    const Encoding enc = encode_maxcut(*g);
    if (src == TargetSource::Exact || (src == TargetSource::Auto && g->n <= 20)) {
      return cut_value(*g, brute_force_ground_state(enc.model).spins);
    }
    return detail::anneal_target(enc.model, std::nullopt, policy,
                                 [&](const SpinVector& s) { return cut_value(*g, s); });
  }
  const auto& m = std::get<IsingModel>(problem);
  if (src == TargetSource::Exact || (src == TargetSource::Auto && m.size() <= 20)) {
    return -brute_force_ground_state(m).energy;
  }
  if (m.has_field()) {
    const IsingModel e = embed_field(m);
    const std::size_t anc = m.size();
    return detail::anneal_target(e, anc, policy, [&](const SpinVector& s) {
      return -energy(e, s);
    });
  }
  return detail::anneal_target(m, std::nullopt, policy,
                               [&](const SpinVector& s) { return -energy(m, s); });
}

/// Runs config.n_runs restarts on `problem` and summarizes them. On the Fixed
/// back end couplings that are not already j_bits integers are rescaled by a
/// common factor first; energies are always reported on the original model.
inline BenchReport run_benchmark(const BenchProblem& problem, const SolverConfig& config,
                                 const TargetPolicy& policy = {},
                                 const BenchOptions& options = {}) {
  config.validate();
  if (!(policy.fraction > 0.0 && policy.fraction <= 1.0)) {
    throw InvalidArgument("target fraction must be in (0, 1]");
  }
  BenchReport rep;
  rep.problem = detail::problem_name(problem);
  rep.config = config;
  rep.fraction = policy.fraction;

  std::optional<Encoding> enc;
  IsingModel model = IsingModel::zero(1);
  if (const auto* g = std::get_if<MaxCutInstance>(&problem)) {
    enc = encode_maxcut(*g);
  } else if (const auto* k = std::get_if<KnapsackInstance>(&problem)) {
    enc = encode_knapsack(*k, options.penalty.value_or(default_penalty(*k)));
  }
  model = enc ? enc->model : std::get<IsingModel>(problem);
  rep.n_spins = model.size();

  IsingModel solve_model = model;
  if (config.backend == Backend::Fixed && !has_integer_couplings(model, config.fixed.j_bits)) {
    auto scaled = scale_to_integer_couplings(model, config.fixed.j_bits);
    solve_model = std::move(scaled.model);
    rep.coupling_scale = scaled.scale;
  }

  SolveResult res;
  if (enc) {
    Encoding solve_enc = *enc;
    solve_enc.model = solve_model;
    res = solve(solve_enc, config);
  } else {
    res = solve(solve_model, config);
  }
  rep.c0 = res.c0;
  rep.dt = res.dt;
  rep.formats = res.formats;
  rep.saturation = res.saturation;

  auto objective = [&](const SpinVector& s) {
    return enc ? objective_value(*enc, s) : -energy(model, s);
  };
  std::vector<double> objectives;
  double total_time = 0.0;
  for (const auto& r : res.runs) {
    RunRecord rec;
    rec.run_index = r.run_index;
    rec.final_energy = energy(model, r.best_spins);
    rec.objective = objective(r.best_spins);
    if (enc && std::holds_alternative<KnapsackInstance>(enc->problem)) {
      rec.feasible = decode_knapsack(*enc, r.best_spins).feasible;
    }
    rec.wall_time_s = r.wall_time_s;
    rec.saturation = r.saturation;
    total_time += r.wall_time_s;
    objectives.push_back(rec.objective);
    if (rep.runs.empty() || rec.objective > rep.best_objective) {
      rep.best_objective = rec.objective;
      rep.best_run = rep.runs.size();
      rep.best_spins = r.best_spins;
    }
    rep.runs.push_back(rec);
  }
  rep.mean_objective = mean(objectives);
  rep.cdf = empirical_cdf(objectives);
  rep.t_com = policy.t_com.value_or(total_time / static_cast<double>(res.runs.size()));

  rep.target = compute_target(problem, policy, options);
  switch (policy.source) {
    case TargetSource::None: rep.target_source = "none"; break;
    case TargetSource::Auto: rep.target_source = "auto"; break;
    case TargetSource::Exact: rep.target_source = "exact"; break;
    case TargetSource::Anneal: rep.target_source = "anneal"; break;
    case TargetSource::User: rep.target_source = "user"; break;
  }
  if (rep.target) {
    rep.threshold = success_threshold(*rep.target, policy.fraction);
    const double ps = success_probability(objectives, *rep.threshold);
    rep.success_probability = ps;
    if (ps >= 1.0) {
      rep.ttt_note = "target met in all runs";
    } else if (ps <= 0.0) {
      rep.ttt_note = "target never met";
    } else {
      rep.ttt = time_to_target(rep.t_com, ps);
    }
  }
  return rep;
}

/// JSON report. Timing fields are left out unless `timing` is set, so two
/// reports of the same seed and config compare equal as text.
inline Json to_json(const BenchReport& r, bool timing = true) {
  Json runs = Json::array();
  for (const auto& rec : r.runs) {
    Json j{{"run_index", rec.run_index},
           {"final_energy", rec.final_energy},
           {"objective", rec.objective},
           {"feasible", rec.feasible}};
    if (r.config.backend == Backend::Fixed) {
      j["saturations"] = rec.saturation.saturations;
      j["underflows"] = rec.saturation.underflows;
    }
    if (timing) j["wall_time_s"] = rec.wall_time_s;
    runs.push_back(std::move(j));
  }
  Json cdf = Json::array();
  for (const auto& p : r.cdf) cdf.push_back({p.value, p.probability});

  Json agg{{"best_objective", r.best_objective},
           {"mean_objective", r.mean_objective},
           {"best_run", r.best_run},
           {"best_spins", to_json(r.best_spins)},
           {"fraction", r.fraction},
           {"target_source", r.target_source}};
  agg["target"] = r.target ? Json(*r.target) : Json(nullptr);
  agg["threshold"] = r.threshold ? Json(*r.threshold) : Json(nullptr);
  agg["success_probability"] =
      r.success_probability ? Json(*r.success_probability) : Json(nullptr);
  if (timing) {
    agg["t_com_s"] = r.t_com;
    agg["ttt_s"] = r.ttt ? Json(*r.ttt) : Json(nullptr);
  }
  if (!r.ttt_note.empty()) agg["ttt_note"] = r.ttt_note;
  if (r.config.backend == Backend::Fixed) {
    agg["saturations"] = r.saturation.saturations;
    agg["underflows"] = r.saturation.underflows;
  }

  Json solver{{"c0", r.c0}, {"dt", r.dt}, {"coupling_scale", r.coupling_scale}};
  if (r.formats) {
    solver["x_format"] = to_json(r.formats->x_format);
    solver["y_format"] = to_json(r.formats->y_format);
    solver["j_bits"] = r.formats->j_bits;
    solver["acc_bits"] = r.formats->acc_bits;
  }
  return Json{{"problem", r.problem}, {"n_spins", r.n_spins}, {"config", to_json(r.config)},
              {"solver", solver},     {"aggregate", agg},      {"runs", runs},
              {"cdf", cdf}};
}

namespace detail {
inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}
}  // namespace detail

/// run_index,final_energy,objective,feasible,wall_time_s[,saturations,underflows]
inline std::string runs_to_csv(const BenchReport& r) {
  const bool fixed = r.config.backend == Backend::Fixed;
  std::string out = "run_index,final_energy,objective,feasible,wall_time_s";
  if (fixed) out += ",saturations,underflows";
  out += "\n";
  for (const auto& rec : r.runs) {
    out += std::to_string(rec.run_index) + "," + detail::csv_number(rec.final_energy) + "," +
           detail::csv_number(rec.objective) + "," + (rec.feasible ? "1" : "0") + "," +
           detail::csv_number(rec.wall_time_s);
    if (fixed) {
      out += "," + std::to_string(rec.saturation.saturations) + "," +
             std::to_string(rec.saturation.underflows);
    }
    out += "\n";
  }
  return out;
}

/// objective,cumulative_probability
inline std::string cdf_to_csv(const BenchReport& r) {
  std::string out = "objective,cumulative_probability\n";
  for (const auto& p : r.cdf) {
    out += detail::csv_number(p.value) + "," + detail::csv_number(p.probability) + "\n";
  }
  return out;
}

}  // namespace sbm
