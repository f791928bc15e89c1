#include "evtlab/evt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evtlab/errors.hpp"
#include "parallel.hpp"

namespace evtlab {

namespace {

constexpr std::size_t kMinSamples = 100;
// Stream index of the oracle's master seed; far away from trajectory indices.
constexpr std::uint64_t kOracleStream = 0x6f7261636c650000ULL;

void require_samples(const EnsembleSpec& spec) {
  if (spec.samples < kMinSamples) {
    throw InvalidArgument("ensemble: samples must be >= 100");
  }
  if (spec.k < 1 || spec.k > spec.schedule.size()) {
    throw IndexOutOfRange("ensemble: k must lie in [1, N]");
  }
}

template <class E>
[[noreturn]] void rethrow_annotated(const E& e, std::size_t index) {
  throw E("trajectory " + std::to_string(index) + ": " + e.what());
}

// Wraps f(i) so numeric errors name the trajectory that raised them.
template <class F>
auto annotated(F f) {
  return [f](std::size_t i) {
    try {
      f(i);
    } catch (const InfiniteValue& e) {
      rethrow_annotated(e, i);
    } catch (const DegenerateBasis& e) {
      rethrow_annotated(e, i);
    } catch (const NumericError& e) {
      rethrow_annotated(e, i);
    }
  };
}

}  // namespace

SparseSchedule SparseSchedule::make(double m0, double q, int alpha, int beta) {
  if (!(m0 > 0.0) || !std::isfinite(m0)) {
    throw InvalidSchedule("schedule: m0 must be positive");
  }
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw InvalidSchedule("schedule: q must be > 1");
  }
  if (alpha < 1 || beta <= alpha) {
    throw InvalidSchedule("schedule: need 1 <= alpha < beta");
  }
  return SparseSchedule{m0, q, alpha, beta};
}

double SparseSchedule::time(int j) const { return m0 * std::pow(q, j); }

std::vector<double> SparseSchedule::times() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int j = alpha; j <= beta; ++j) {
    out.push_back(time(j));
  }
  return out;
}

SparseSchedule build_schedule(double m0, double q, int n) {
  if (n < 1) {
    throw InvalidSchedule("schedule: n must be >= 1");
  }
  return SparseSchedule::make(m0, q, n, 2 * n);
}

ConditionReport check_growth_conditions(const SparseSchedule& s, double gamma, int k, double delta, int d) {
  ConditionReport r;
  r.ratio = 1.0 / s.q;
  r.C = std::min(1.0, delta / (k * gamma));
  r.rho = s.q;
  r.sigma = (-s.m0 / (k * (1.5 + 2.0 / d) + 0.5)) * (k * gamma / r.rho - delta);
  r.admissible_sparsity = r.ratio < r.C;
  const double log_n = std::log(static_cast<double>(s.size()));
  // Compared in the log domain: ln N < sigma rho^alpha.
  r.growth_margin = r.sigma * std::pow(r.rho, s.alpha) - log_n;
  r.admissible_growth = r.sigma > 0.0 && r.growth_margin > 0.0;
  return r;
}

double normalizing_level(double r, double N, double v) { return r + std::log(N) / v; }

TrajectoryRecord run_trajectory(const LatticeFrame& start, const FlowSpec& flow, const SparseSchedule& schedule,
                                const ObservableKind& observable, Seed seed) {
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.values.reserve(static_cast<std::size_t>(schedule.size()));
  FlowPropagator prop(start, flow);
  for (int j = schedule.alpha; j <= schedule.beta; ++j) {
    prop.advance(schedule.time(j) - prop.time());
    const double value = evaluate(observable, prop.frame());
    if (!std::isfinite(value)) {
      throw InfiniteValue("run_trajectory: non-finite observable value");
    }
    rec.values.push_back(value);
  }
  return rec;
}

double kth_max(std::span<const double> values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
    throw IndexOutOfRange("kth_max: k must lie in [1, " + std::to_string(values.size()) + "]");
  }
  std::vector<double> tmp(values.begin(), values.end());
  const auto nth = tmp.begin() + (k - 1);
  std::nth_element(tmp.begin(), nth, tmp.end(), std::greater<>());
  return *nth;
}

Seed oracle_seed(Seed master) noexcept { return derive_subseed(master, kOracleStream); }

std::vector<TrajectoryRecord> simulate_ensemble(const EnsembleSpec& spec) {
  require_samples(spec);
  std::vector<TrajectoryRecord> out(spec.samples);
  detail::parallel_for(spec.samples, spec.threads, annotated([&](std::size_t i) {
                         const Seed s = derive_subseed(spec.seed, i);
                         Rng rng(s);
                         const LatticeFrame start = sample_haar_sl2(rng);
                         out[i] = run_trajectory(start, spec.flow, spec.schedule, spec.observable, s);
                       }));
  return out;
}

std::vector<TrajectoryRecord> simulate_iid_oracle(const EnsembleSpec& spec) {
  require_samples(spec);
  const Seed master = oracle_seed(spec.seed);
  const auto n = static_cast<std::size_t>(spec.schedule.size());
  std::vector<TrajectoryRecord> out(spec.samples);
  detail::parallel_for(spec.samples, spec.threads, annotated([&](std::size_t i) {
                         const Seed s = derive_subseed(master, i);
                         Rng rng(s);
                         TrajectoryRecord rec;
                         rec.seed = s;
                         rec.values.reserve(n);
                         for (std::size_t j = 0; j < n; ++j) {
                           rec.values.push_back(evaluate(spec.observable, sample_haar_sl2(rng)));
                         }
                         out[i] = std::move(rec);
                       }));
  return out;
}

std::vector<double> rescaled_kth_maxima(const std::vector<TrajectoryRecord>& records, int k, double v) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    out.push_back(kth_max(rec.values, k) - std::log(static_cast<double>(rec.values.size())) / v);
  }
  return out;
}

EmpiricalCDF ensemble_run(const EnsembleSpec& spec) {
  return EmpiricalCDF(rescaled_kth_maxima(simulate_ensemble(spec), spec.k, spec.v));
}

EmpiricalCDF iid_oracle_run(const EnsembleSpec& spec) {
  return EmpiricalCDF(rescaled_kth_maxima(simulate_iid_oracle(spec), spec.k, spec.v));
}

}  // namespace evtlab
