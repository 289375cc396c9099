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

// Simulated bifurcation engine (ballistic and discrete, optionally heated).
//
// One step updates every oscillator synchronously:
//
//   a      <- a + a0 / n_steps
//   f_i     = sum_j J_ij g(x_j)        g = id (ballistic) or sgn (discrete),
//                                      read from the previous step's snapshot
//   y~_i    = y_i + (-(a0 - a) x_i + c0 f_i) dt
//   x~_i    = x_i + a0 y~_i dt
//   |x~_i| <= 1:  x_i <- x~_i,      y_i <- y~_i (+ gamma y_i dt if heated)
//   otherwise:    x_i <- sgn(x~_i), y_i <- 0    (+ gamma y_i dt if heated)
//
// Positions and signs are double buffered, so the result does not depend on
// the order rows are visited or on how they are split across threads.

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include "sbm/encoders.hpp"
#include "sbm/error.hpp"
#include "sbm/ising_model.hpp"
#include "sbm/numerics.hpp"
#include "sbm/rng.hpp"
#include "sbm/solver_config.hpp"

namespace sbm {

/// Oscillator network state in real units. On the fixed back end every value
/// lies on the format grid.
struct OscillatorState {
  std::vector<double> x;
  std::vector<double> y;
  double a = 0.0;
  std::size_t step = 0;
  std::vector<std::int8_t> sgn_prev;  // sgn(x) at the last step boundary

  SpinVector spins() const { return SpinVector(sgn_prev); }
};

struct RunResult {
  SpinVector best_spins;
  double best_energy = 0.0;
  std::size_t best_step = 0;
  std::size_t run_index = 0;
  std::vector<double> trajectory;  // energy of sgn(x) after each step, if recorded
  SaturationCounters saturation;
  std::size_t saturated_steps = 0;  // steps with at least one saturation
  double wall_time_s = 0.0;
};

struct SolveResult {
  RunResult best;
  std::vector<RunResult> runs;
  double c0 = 0.0;  // as used (quantized on the fixed back end)
  double dt = 0.0;  // as used
  std::optional<FormatPlan> formats;
  SaturationCounters saturation;
  bool field_embedded = false;  // an ancilla was added for a nonzero h
};

namespace detail {

inline std::int8_t sign_of(double v) { return v >= 0.0 ? 1 : -1; }

/// Draws a value uniformly from [-r, r] \ {0}.
inline double draw_nonzero(CounterRng& rng, double r) {
  for (;;) {
    const double v = (2.0 * rng.uniform() - 1.0) * r;
    if (v != 0.0) return v;
  }
}

inline void check_ancilla(std::optional<std::size_t> ancilla, std::size_t n) {
  if (ancilla && *ancilla >= n) throw InvalidArgument("ancilla index out of range");
}

}  // namespace detail

/// Prepared update kernel for one model, configuration and arithmetic.
template <class Arith>
class Integrator {
 public:
  using value_type = typename Arith::value_type;
  using coupling_type = typename Arith::coupling_type;
  using sign_type = typename Arith::sign_type;

  struct Buffers {
    std::vector<value_type> x[2];
    std::vector<value_type> y;
    std::vector<sign_type> sgn[2];
    int cur = 0;
    value_type a{};
    std::size_t step = 0;
  };

  Integrator(const IsingModel& model, const SolverConfig& config, Arith arith, double c0,
             std::optional<std::size_t> ancilla)
      : arith_(std::move(arith)),
        n_(model.size()),
        n_steps_(config.n_steps),
        discrete_(config.variant == Variant::Discrete),
        heated_(config.heated),
        ancilla_(ancilla) {
    detail::check_ancilla(ancilla, n_);
    j_.resize(n_ * n_);
    const auto src = model.couplings();
    for (std::size_t k = 0; k < n_ * n_; ++k) j_[k] = Arith::coupling(src[k]);
    c0_ = arith_.quantize(c0, nullptr);
    dt_ = arith_.quantize(config.dt, nullptr);
    a0_ = arith_.quantize(config.a0, nullptr);
    gamma_ = arith_.quantize(config.gamma, nullptr);
    a0_real_ = config.a0;
  }

  std::size_t size() const { return n_; }
  std::size_t n_steps() const { return n_steps_; }
  const Arith& arithmetic() const { return arith_; }
  double c0() const { return arith_.to_real(c0_); }
  double dt() const { return arith_.to_real(dt_); }

  Buffers load(const OscillatorState& s) const {
    detail::require_size(s.x.size(), n_, "state x");
    detail::require_size(s.y.size(), n_, "state y");
    detail::require_size(s.sgn_prev.size(), n_, "state sgn_prev");
    Buffers b;
    b.x[0].resize(n_);
    b.x[1].resize(n_);
    b.y.resize(n_);
    b.sgn[0].resize(n_);
    b.sgn[1].resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      b.x[0][i] = arith_.quantize(s.x[i], nullptr);
      b.y[i] = arith_.quantize(s.y[i], nullptr);
      if (s.sgn_prev[i] != 1 && s.sgn_prev[i] != -1) {
        throw InvalidArgument("sgn_prev entries must be -1 or +1");
      }
      b.sgn[0][i] = static_cast<sign_type>(s.sgn_prev[i]);
    }
    b.a = arith_.quantize(s.a, nullptr);
    b.step = s.step;
    return b;
  }

  OscillatorState store(const Buffers& b) const {
    OscillatorState s;
    s.x.resize(n_);
    s.y.resize(n_);
    s.sgn_prev.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      s.x[i] = arith_.to_real(b.x[b.cur][i]);
      s.y[i] = arith_.to_real(b.y[i]);
      s.sgn_prev[i] = b.sgn[b.cur][i] > 0 ? 1 : -1;
    }
    s.a = arith_.to_real(b.a);
    s.step = b.step;
    return s;
  }

  /// Advances the pump to its value for the step about to run.
  void begin_step(Buffers& b) const {
    if (b.step >= n_steps_) {
      throw SolverError("step called after the schedule finished (" +
                        std::to_string(n_steps_) + " steps)");
    }
    const std::size_t k = b.step + 1;
    if constexpr (std::is_same_v<Arith, FloatArithmetic>) {
      b.a = a0_real_ * static_cast<double>(k) / static_cast<double>(n_steps_);
    } else {
      b.a = arith_.quantize(a0_real_ * static_cast<double>(k) / static_cast<double>(n_steps_),
                            nullptr);
    }
  }

  /// Updates rows [lo, hi): reads the current snapshot, writes the next one.
  void update_rows(Buffers& b, std::size_t lo, std::size_t hi, SaturationCounters* c) const {
    const auto& x_read = b.x[b.cur];
    const auto& s_read = b.sgn[b.cur];
    auto& x_write = b.x[1 - b.cur];
    auto& s_write = b.sgn[1 - b.cur];
    const value_type one = arith_.one();
    const value_type detune = arith_.sub(a0_, b.a, c);

    for (std::size_t i = lo; i < hi; ++i) {
      if (ancilla_ && i == *ancilla_) {
        x_write[i] = discrete_ ? one : ancilla_ramp(b.a);
        b.y[i] = value_type{};
        s_write[i] = 1;
        continue;
      }
      const std::span<const coupling_type> row(j_.data() + i * n_, n_);
      const value_type f = discrete_ ? arith_.scaled_sign_field(row, s_read, c0_, c)
                                     : arith_.scaled_position_field(row, x_read, c0_, c);
      const value_type xi = x_read[i];
      const value_type yi = b.y[i];
      const value_type force = arith_.sub(f, arith_.mul(detune, xi, c), c);
      const value_type y_t = arith_.add(yi, arith_.mul(force, dt_, c), c);
      const value_type x_t = arith_.add(xi, arith_.mul(arith_.mul(a0_, y_t, c), dt_, c), c);
      const value_type heat =
          heated_ ? arith_.mul(arith_.mul(gamma_, yi, c), dt_, c) : value_type{};
      if (x_t <= one && x_t >= -one) {
        x_write[i] = x_t;
        b.y[i] = heated_ ? arith_.add(y_t, heat, c) : y_t;
      } else {
        x_write[i] = x_t > value_type{} ? one : -one;
        b.y[i] = heat;
      }
      s_write[i] = Arith::sign_of(x_write[i]);
    }
  }

  void end_step(Buffers& b) const {
    b.cur = 1 - b.cur;
    ++b.step;
  }

  SpinVector spins(const Buffers& b) const {
    std::vector<std::int8_t> s(n_);
    for (std::size_t i = 0; i < n_; ++i) s[i] = b.sgn[b.cur][i] > 0 ? 1 : -1;
    return SpinVector(std::move(s));
  }

 private:
  value_type ancilla_ramp(value_type a) const {
    const double r = std::min(1.0, arith_.to_real(a) / a0_real_);
    return arith_.quantize(r, nullptr);
  }

  Arith arith_;
  std::size_t n_;
  std::size_t n_steps_;
  bool discrete_;
  bool heated_;
  std::optional<std::size_t> ancilla_;
  std::vector<coupling_type> j_;
  value_type c0_{}, dt_{}, a0_{}, gamma_{};
  double a0_real_ = 1.0;
};

namespace detail {

/// Quantizes a freshly drawn state onto the fixed grid without creating
/// zeros: a value that rounds to 0 becomes one LSB with its original sign.
inline void snap_to_grid(OscillatorState& s, const FixedFormat& fmt) {
  const double lsb = fmt.resolution();
  for (auto* v : {&s.x, &s.y}) {
    for (double& e : *v) {
      const double q = to_real(quantize(e, fmt), fmt);
      e = q != 0.0 ? q : (e > 0.0 ? lsb : -lsb);
    }
  }
  for (std::size_t i = 0; i < s.x.size(); ++i) s.sgn_prev[i] = sign_of(s.x[i]);
}

inline void pin_ancilla(OscillatorState& s, const SolverConfig& config,
                        std::optional<std::size_t> ancilla) {
  if (!ancilla) return;
  s.x[*ancilla] = config.variant == Variant::Discrete ? 1.0 : 0.0;
  s.y[*ancilla] = 0.0;
  s.sgn_prev[*ancilla] = 1;
}

inline OscillatorState draw_state(std::size_t n, const SolverConfig& config,
                                  std::size_t run_index) {
  CounterRng rng(config.seed, run_index);
  OscillatorState s;
  s.x.resize(n);
  s.y.resize(n);
  s.sgn_prev.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.x[i] = draw_nonzero(rng, config.init_range);
  for (std::size_t i = 0; i < n; ++i) s.y[i] = draw_nonzero(rng, config.init_range);
  for (std::size_t i = 0; i < n; ++i) s.sgn_prev[i] = sign_of(s.x[i]);
  return s;
}

}  // namespace detail

/// Random initial state for restart `run_index`, a pure function of
/// (seed, run_index). Positions and momenta are uniform on
/// [-init_range, init_range] excluding 0; the pump starts at 0.
inline OscillatorState init_state(const IsingModel& model, const SolverConfig& config,
                                  std::size_t run_index,
                                  std::optional<std::size_t> ancilla = std::nullopt) {
  config.validate();
  detail::check_ancilla(ancilla, model.size());
  OscillatorState s = detail::draw_state(model.size(), config, run_index);
  if (config.backend == Backend::Fixed) {
    detail::snap_to_grid(s, derive_format(model, config).y_format);
  }
  detail::pin_ancilla(s, config, ancilla);
  return s;
}

/// One synchronous step of the whole network.
inline OscillatorState step(const OscillatorState& state, const IsingModel& model,
                            const SolverConfig& config,
                            std::optional<std::size_t> ancilla = std::nullopt) {
  config.validate();
  if (model.has_field()) {
    throw InvalidArgument("step() needs a field-free model; fold h in with embed_field");
  }
  auto run = [&](auto integrator) {
    auto b = integrator.load(state);
    integrator.begin_step(b);
    integrator.update_rows(b, 0, integrator.size(), nullptr);
    integrator.end_step(b);
    return integrator.store(b);
  };
  const double c0 = resolve_c0(model, config);
  if (config.backend == Backend::Fixed) {
    const FormatPlan plan = derive_format(model, config);
    return run(Integrator<FixedArithmetic>(model, config, FixedArithmetic(plan), c0, ancilla));
  }
  return run(Integrator<FloatArithmetic>(model, config, FloatArithmetic{}, c0, ancilla));
}

namespace detail {

template <class Arith>
RunResult run_restart(const Integrator<Arith>& integ, const IsingModel& model,
                      const SolverConfig& config, std::size_t run_index,
                      std::optional<std::size_t> ancilla, const FixedFormat* grid) {
  const auto t0 = std::chrono::steady_clock::now();
  OscillatorState init = draw_state(model.size(), config, run_index);
  if (grid) snap_to_grid(init, *grid);
  pin_ancilla(init, config, ancilla);

  auto b = integ.load(init);
  const std::size_t n = integ.size();
  const std::size_t blocks = std::clamp<std::size_t>(config.parallel.pb, 1, n);

  RunResult r;
  r.run_index = run_index;
  r.best_step = config.n_steps;
  if (config.record_trajectory) r.trajectory.reserve(config.n_steps);

  std::vector<SaturationCounters> block_counters(blocks);
  std::uint64_t seen_saturations = 0;
  auto after_step = [&] {
    std::uint64_t total = 0;
    for (const auto& bc : block_counters) total += bc.saturations;
    if (total != seen_saturations) ++r.saturated_steps;
    seen_saturations = total;
    if (config.record_trajectory) {
      SpinVector s = integ.spins(b);
      const double e = energy(model, s);
      r.trajectory.push_back(e);
      if (r.trajectory.size() == 1 || e < r.best_energy) {
        r.best_energy = e;
        r.best_step = b.step;
        r.best_spins = std::move(s);
      }
    }
  };

  if (blocks == 1) {
    for (std::size_t k = 0; k < config.n_steps; ++k) {
      integ.begin_step(b);
      integ.update_rows(b, 0, n, &block_counters[0]);
      integ.end_step(b);
      after_step();
    }
  } else {
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::atomic<bool> failed{false};
    auto on_phase = [&]() noexcept {
      integ.end_step(b);
      after_step();
      if (b.step < config.n_steps) integ.begin_step(b);
    };
    std::barrier sync(static_cast<std::ptrdiff_t>(blocks), on_phase);
    auto worker = [&](std::size_t blk) {
      const std::size_t lo = n * blk / blocks;
      const std::size_t hi = n * (blk + 1) / blocks;
      for (std::size_t k = 0; k < config.n_steps; ++k) {
        if (!failed.load(std::memory_order_relaxed)) {
          try {
            integ.update_rows(b, lo, hi, &block_counters[blk]);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            failed = true;
          }
        }
        sync.arrive_and_wait();
      }
    };
    integ.begin_step(b);
    {
      std::vector<std::jthread> pool;
      pool.reserve(blocks - 1);
      for (std::size_t blk = 1; blk < blocks; ++blk) pool.emplace_back(worker, blk);
      worker(0);
    }
    if (failure) std::rethrow_exception(failure);
  }

  for (const auto& bc : block_counters) r.saturation += bc;
  if (!config.record_trajectory) {
    r.best_spins = integ.spins(b);
    r.best_energy = energy(model, r.best_spins);
  }
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

template <class Arith>
std::vector<RunResult> run_all(const Integrator<Arith>& integ, const IsingModel& model,
                               const SolverConfig& config, std::optional<std::size_t> ancilla,
                               const FixedFormat* grid) {
  std::vector<RunResult> runs(config.n_runs);
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, config.n_runs);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t r = w; r < config.n_runs; r += workers) {
        runs[r] = run_restart(integ, model, config, r, ancilla, grid);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return runs;
}

inline SolveResult solve_impl(const IsingModel& input, const SolverConfig& config,
                              std::optional<std::size_t> ancilla) {
  config.validate();
  SolveResult out;
  const bool embed = !ancilla && input.has_field();
  const IsingModel model = embed ? embed_field(input) : input;
  if (embed) ancilla = input.size();
  check_ancilla(ancilla, model.size());
  out.field_embedded = embed;

  const double c0 = resolve_c0(model, config);
  if (config.backend == Backend::Fixed) {
    const FormatPlan plan = derive_format(model, config);
    const Integrator<FixedArithmetic> integ(model, config, FixedArithmetic(plan), c0, ancilla);
    out.runs = run_all(integ, model, config, ancilla, &plan.y_format);
    out.c0 = integ.c0();
    out.dt = integ.dt();
    out.formats = plan;
  } else {
    const Integrator<FloatArithmetic> integ(model, config, FloatArithmetic{}, c0, ancilla);
    out.runs = run_all(integ, model, config, ancilla, nullptr);
    out.c0 = integ.c0();
    out.dt = integ.dt();
  }

  if (embed) {
    for (auto& r : out.runs) {
      std::vector<std::int8_t> s(r.best_spins.begin(), r.best_spins.end() - 1);
      r.best_spins = SpinVector(std::move(s));
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < out.runs.size(); ++k) {
    out.saturation += out.runs[k].saturation;
    if (out.runs[k].best_energy < out.runs[best].best_energy) best = k;
  }
  out.best = out.runs[best];
  return out;
}

}  // namespace detail

/// Runs config.n_runs independent restarts and returns all of them plus the
/// lowest-energy one (earliest run index on ties). A nonzero field is folded
/// into an ancilla spin internally; reported spins exclude it.
inline SolveResult solve(const IsingModel& model, const SolverConfig& config) {
  return detail::solve_impl(model, config, std::nullopt);
}

/// Solves an encoding, pinning its ancilla spin if it has one. Reported spins
/// cover every spin of enc.model, ancilla included.
inline SolveResult solve(const Encoding& enc, const SolverConfig& config) {
  return detail::solve_impl(enc.model, config, enc.ancilla());
}

}  // namespace sbm
