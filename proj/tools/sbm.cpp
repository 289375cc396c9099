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

// sbm command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 parse error, 3 solver error.
// SBM_THREADS sets the default worker count.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sbm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;

std::size_t default_threads() {
  if (const char* env = std::getenv("SBM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SBM_THREADS='" << env << "'\n";
  }
  return 1;
}

struct ConfigFlags {
  sbm::SolverConfig config;
  std::string variant = "discrete";
  std::string backend = "float64";
  std::optional<double> dt;
  int x_total = 0;
  int y_total = 0;
  int frac = -1;

  void add(CLI::App* app) {
    app->add_option("--variant", variant, "discrete (dsb) or ballistic (bsb)")
        ->capture_default_str();
    app->add_flag("--heated", config.heated, "add the gamma * y heating term");
    app->add_option("--dt", dt, "time step (default 1.0 discrete, 0.5 ballistic)");
    app->add_option("--a0", config.a0, "final pump amplitude")->capture_default_str();
    app->add_option("--steps", config.n_steps, "steps per run")->capture_default_str();
    app->add_option("--gamma", config.gamma, "heating coefficient")->capture_default_str();
    app->add_option("--c0", config.c0, "coupling scale (default: from coupling spread)");
    app->add_option("--seed", config.seed, "random seed")->capture_default_str();
    app->add_option("--runs", config.n_runs, "independent restarts")->capture_default_str();
    app->add_option("--init-range", config.init_range, "initial |x|, |y| bound")
        ->capture_default_str();
    app->add_option("--backend", backend, "float64 or fixed")->capture_default_str();
    app->add_option("--j-bits", config.fixed.j_bits, "fixed: coupling word width")
        ->capture_default_str();
    app->add_option("--c0-bits", config.fixed.c0_significant_bits,
                    "fixed: significant bits kept for c0")
        ->capture_default_str();
    app->add_option("--x-bits", x_total, "fixed: x word width (with --y-bits, --frac-bits)");
    app->add_option("--y-bits", y_total, "fixed: y word width");
    app->add_option("--frac-bits", frac, "fixed: fractional bits of x and y");
    app->add_option("--pb", config.parallel.pb, "spin blocks updated concurrently per step")
        ->capture_default_str();
    config.threads = default_threads();
    app->add_option("--threads", config.threads, "workers across restarts (env SBM_THREADS)")
        ->capture_default_str();
  }

  sbm::SolverConfig resolve() {
    config.variant = sbm::parse_variant(variant);
    config.backend = sbm::parse_backend(backend);
    config.dt = dt.value_or(sbm::default_dt(config.variant));
    if (x_total > 0 || y_total > 0 || frac >= 0) {
      if (x_total <= 0 || y_total <= 0 || frac < 0) {
        throw sbm::InvalidArgument("--x-bits, --y-bits and --frac-bits go together");
      }
      config.fixed.x_format = sbm::FixedFormat{x_total, frac};
      config.fixed.y_format = sbm::FixedFormat{y_total, frac};
    }
    config.validate();
    return config;
  }
};

struct InstanceFlags {
  std::string model;
  std::string gset;
  std::string knapsack;
  bool lenient = false;
  std::optional<double> penalty;

  void add(CLI::App* app) {
    app->add_option("--model", model, "Ising or QUBO model (JSON)");
    app->add_option("--gset", gset, "max-cut instance in G-Set format");
    app->add_option("--knapsack", knapsack, "knapsack instance ('n W' then 'value weight')");
    app->add_flag("--lenient", lenient, "lenient knapsack parsing");
    app->add_option("--penalty", penalty, "knapsack penalty (default 2 * max value)");
  }

  bool given() const { return !model.empty() || !gset.empty() || !knapsack.empty(); }

  sbm::BenchProblem load() const {
    const int count = !model.empty() + !gset.empty() + !knapsack.empty();
    if (count != 1) throw sbm::InvalidArgument("give exactly one of --model, --gset, --knapsack");
    if (!gset.empty()) return sbm::load_problem(gset, sbm::ProblemFormat::GSet);
    if (!knapsack.empty()) {
      return sbm::load_problem(knapsack, sbm::ProblemFormat::Knapsack,
                               lenient ? sbm::ParseMode::Lenient : sbm::ParseMode::Strict);
    }
    return sbm::load_problem(model, sbm::ProblemFormat::IsingJson);
  }
};

struct GenFlags {
  sbm::RandomMaxCutSpec spec;

  void add(CLI::App* app, const std::string& prefix) {
    app->add_option("--" + prefix + "n", spec.n, "nodes")->capture_default_str();
    app->add_option("--" + prefix + "jmin", spec.j_min, "smallest coupling")
        ->capture_default_str();
    app->add_option("--" + prefix + "jmax", spec.j_max, "largest coupling")->capture_default_str();
    app->add_option("--" + prefix + "density", spec.density, "edge probability")
        ->capture_default_str();
    app->add_option("--" + prefix + "seed", spec.seed, "generator seed")->capture_default_str();
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw sbm::InvalidArgument("cannot write '" + path + "'");
  out << text;
}

sbm::TargetSource parse_target_source(const std::string& s) {
  if (s == "none") return sbm::TargetSource::None;
  if (s == "auto") return sbm::TargetSource::Auto;
  if (s == "exact") return sbm::TargetSource::Exact;
  if (s == "anneal") return sbm::TargetSource::Anneal;
  if (s == "user") return sbm::TargetSource::User;
  throw sbm::InvalidArgument("unknown target source '" + s + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated bifurcation Ising solver"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one model or instance");
  ConfigFlags solve_cfg;
  InstanceFlags solve_in;
  std::string solve_out;
  solve_cfg.add(solve_cmd);
  solve_in.add(solve_cmd);
  solve_cmd->add_option("-o,--output", solve_out, "output file (default stdout)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "result distribution, P_S and TTT");
  ConfigFlags bench_cfg;
  InstanceFlags bench_in;
  GenFlags bench_gen;
  bool bench_random = false;
  std::string target_source = "auto";
  sbm::TargetPolicy policy;
  std::string bench_json, bench_csv, bench_cdf;
  bool no_timing = false;
  bench_cfg.add(bench_cmd);
  bench_in.add(bench_cmd);
  bench_cmd->add_flag("--random", bench_random, "use a random max-cut instance (--gen-*)");
  bench_gen.add(bench_cmd, "gen-");
  bench_cmd->add_option("--target-source", target_source, "auto, exact, anneal, user or none")
      ->capture_default_str();
  bench_cmd->add_option("--target", policy.value, "target objective (implies user source)");
  bench_cmd->add_option("--fraction", policy.fraction, "success fraction of the target")
      ->capture_default_str();
  bench_cmd->add_option("--anneal-sweeps", policy.anneal_sweeps, "annealing target sweeps")
      ->capture_default_str();
  bench_cmd->add_option("--anneal-restarts", policy.anneal_restarts,
                        "annealing target restarts")
      ->capture_default_str();
  bench_cmd->add_option("--t-com", policy.t_com, "seconds per run for TTT (default: measured)");
  bench_cmd->add_option("--json", bench_json, "JSON report file (default stdout)");
  bench_cmd->add_option("--csv", bench_csv, "per-run CSV file");
  bench_cmd->add_option("--cdf-csv", bench_cdf, "cumulative distribution CSV file");
  bench_cmd->add_flag("--no-timing", no_timing, "omit wall-clock fields from the JSON");

  // cost
  auto* cost_cmd = app.add_subcommand("cost", "accelerator cycle model sweep");
  std::size_t cost_n = 256, cost_steps = 1, max_factor = 0;
  std::string cost_mode = "pipelined";
  double t_ck = 5e-9;
  std::optional<std::size_t> pr, pc, pb;
  bool ceil_mode = false, cost_csv = false;
  std::size_t top = 0;
  cost_cmd->add_option("--n", cost_n, "spins")->capture_default_str();
  cost_cmd->add_option("--mode", cost_mode,
                       "sequential, unrolled-cols, unrolled-rows, blocked, pipelined")
      ->capture_default_str();
  cost_cmd->add_option("--steps", cost_steps, "algorithm steps")->capture_default_str();
  cost_cmd->add_option("--tck", t_ck, "clock period in seconds")->capture_default_str();
  cost_cmd->add_option("--pr", pr, "row factor (with --pc, --pb: single point)");
  cost_cmd->add_option("--pc", pc, "column factor");
  cost_cmd->add_option("--pb", pb, "block factor");
  cost_cmd->add_option("--max-factor", max_factor, "largest factor in the sweep (default n)");
  cost_cmd->add_option("--top", top, "print only the first rows of the sweep");
  cost_cmd->add_flag("--ceil", ceil_mode, "round partial tiles up instead of rejecting them");
  cost_cmd->add_flag("--csv", cost_csv, "CSV output");

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "QUBO <-> Ising conversion");
  std::string conv_in, conv_out, conv_to = "ising";
  bool conv_embed = false;
  convert_cmd->add_option("--in", conv_in, "input model (JSON)")->required();
  convert_cmd->add_option("--to", conv_to, "ising or qubo")->capture_default_str();
  convert_cmd->add_flag("--embed-field", conv_embed, "fold h into an ancilla spin");
  convert_cmd->add_option("-o,--output", conv_out, "output file (default stdout)");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "random instance generator");
  GenFlags gen;
  std::string gen_out, gen_kind = "maxcut";
  sbm::RandomKnapsackSpec kspec;
  gen.add(gen_cmd, "");
  gen_cmd->add_option("--kind", gen_kind, "maxcut or knapsack")->capture_default_str();
  gen_cmd->add_option("--range", kspec.range, "knapsack: values and weights in [1, range]")
      ->capture_default_str();
  gen_cmd->add_option("--capacity-fraction", kspec.capacity_fraction,
                      "knapsack: capacity as a fraction of the total weight")
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) {
      const auto config = solve_cfg.resolve();
      const auto problem = solve_in.load();
      sbm::TargetPolicy none;
      none.source = sbm::TargetSource::None;
      const auto rep = sbm::run_benchmark(problem, config, none, {solve_in.penalty});
      const auto& best = rep.runs[rep.best_run];
      sbm::Json out{{"problem", rep.problem},
                    {"n_spins", rep.n_spins},
                    {"best_run", best.run_index},
                    {"energy", best.final_energy},
                    {"objective", best.objective},
                    {"feasible", best.feasible},
                    {"spins", sbm::to_json(rep.best_spins)},
                    {"c0", rep.c0},
                    {"dt", rep.dt}};
      if (const auto* k = std::get_if<sbm::KnapsackInstance>(&problem)) {
        const auto enc = sbm::encode_knapsack(*k, solve_in.penalty.value_or(sbm::default_penalty(*k)));
        out["selected"] = sbm::decode_knapsack(enc, rep.best_spins).selected;
      }
      if (config.backend == sbm::Backend::Fixed) {
        out["saturations"] = rep.saturation.saturations;
        out["underflows"] = rep.saturation.underflows;
      }
      write_output(solve_out, out.dump(2) + "\n");
    } else if (*bench_cmd) {
      const auto config = bench_cfg.resolve();
      policy.source = parse_target_source(target_source);
      if (policy.value && target_source == "auto") policy.source = sbm::TargetSource::User;
      if (bench_random == bench_in.given()) {
        throw sbm::InvalidArgument("give either an instance or --random");
      }
      const sbm::BenchProblem problem =
          bench_random ? sbm::BenchProblem(sbm::generate_maxcut(bench_gen.spec)) : bench_in.load();
      const auto rep = sbm::run_benchmark(problem, config, policy, {bench_in.penalty});
      write_output(bench_json, sbm::to_json(rep, !no_timing).dump(2) + "\n");
      if (!bench_csv.empty()) write_output(bench_csv, sbm::runs_to_csv(rep));
      if (!bench_cdf.empty()) write_output(bench_cdf, sbm::cdf_to_csv(rep));
    } else if (*cost_cmd) {
      const auto mode = sbm::parse_cost_mode(cost_mode);
      const auto div = ceil_mode ? sbm::Divisibility::Ceil : sbm::Divisibility::Strict;
      std::vector<sbm::CostRow> rows;
      if (pr || pc || pb) {
        sbm::ParallelParams p{pr.value_or(1), pc.value_or(1), pb.value_or(1)};
        sbm::CostRow row{p, sbm::cycles_per_step(cost_n, p, mode, div),
                         sbm::overlap_feasible(cost_n, p.pc, p.pr), 0.0};
        row.seconds = sbm::exec_time(cost_n, p, mode, cost_steps, t_ck, div);
        rows.push_back(row);
      } else {
        rows = sbm::cost_sweep(cost_n, mode, cost_steps, t_ck, max_factor);
      }
      if (top > 0 && rows.size() > top) rows.resize(top);
      std::ostringstream os;
      if (cost_csv) {
        os << "pr,pc,pb,cycles_per_step,overlap,exec_time_s\n";
        for (const auto& r : rows) {
          os << r.params.pr << ',' << r.params.pc << ',' << r.params.pb << ',' << r.cycles << ','
             << (r.overlap ? 1 : 0) << ',' << std::setprecision(9) << r.seconds << '\n';
        }
      } else {
        os << "n=" << cost_n << " mode=" << sbm::to_string(mode) << " steps=" << cost_steps
           << " t_ck=" << t_ck << "s\n";
        os << std::setw(6) << "pr" << std::setw(6) << "pc" << std::setw(6) << "pb"
           << std::setw(14) << "cycles/step" << std::setw(9) << "overlap" << std::setw(14)
           << "time [s]" << '\n';
        for (const auto& r : rows) {
          std::ostringstream c;
          c << r.cycles;
          os << std::setw(6) << r.params.pr << std::setw(6) << r.params.pc << std::setw(6)
             << r.params.pb << std::setw(14) << c.str() << std::setw(9)
             << (r.overlap ? "yes" : "no") << std::setw(14) << std::setprecision(6) << r.seconds
             << '\n';
        }
      }
      std::cout << os.str();
    } else if (*convert_cmd) {
      const sbm::Json in = sbm::detail::parse_json(sbm::read_file(conv_in));
      sbm::IsingModel ising =
          sbm::is_qubo_json(in) ? sbm::qubo_to_ising(sbm::qubo_from_json(in)) : sbm::ising_from_json(in);
      if (conv_embed) ising = sbm::embed_field(ising);
      sbm::Json out;
      if (conv_to == "ising") {
        out = sbm::to_json(ising);
      } else if (conv_to == "qubo") {
        out = sbm::to_json(sbm::ising_to_qubo(ising));
      } else {
        throw sbm::InvalidArgument("--to must be ising or qubo");
      }
      write_output(conv_out, out.dump(2) + "\n");
    } else if (*gen_cmd) {
      if (gen_kind == "maxcut") {
        write_output(gen_out, sbm::serialize_gset(sbm::generate_maxcut(gen.spec)));
      } else if (gen_kind == "knapsack") {
        kspec.n = gen.spec.n;
        kspec.seed = gen.spec.seed;
        auto inst = sbm::generate_knapsack(kspec);
        if (inst.size() * static_cast<std::size_t>(inst.capacity) <= 100'000'000) {
          inst.known_optimum = sbm::knapsack_dp(inst).optimal_value;
        }
        write_output(gen_out, sbm::serialize_knapsack(inst));
      } else {
        throw sbm::InvalidArgument("--kind must be maxcut or knapsack");
      }
    }
  } catch (const sbm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const sbm::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const sbm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}
