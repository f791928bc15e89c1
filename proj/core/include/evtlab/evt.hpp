#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evtlab/dynamics.hpp"
#include "evtlab/haar.hpp"
#include "evtlab/observables.hpp"
#include "evtlab/stats.hpp"

namespace evtlab {

/// Observation times m_j = m0 q^j for j = alpha..beta.
struct SparseSchedule {
  double m0 = 1.0;
  double q = 1.3;
  int alpha = 14;
  int beta = 28;

  /// Throws InvalidSchedule unless m0 > 0, q > 1, 1 <= alpha < beta.
  static SparseSchedule make(double m0, double q, int alpha, int beta);

  int size() const noexcept { return beta - alpha + 1; }
  double time(int j) const;
  /// m_alpha, ..., m_beta.
  std::vector<double> times() const;

  friend bool operator==(const SparseSchedule&, const SparseSchedule&) = default;
};

/// alpha = n, beta = 2n, so N = n + 1.
SparseSchedule build_schedule(double m0, double q, int n);

struct ConditionReport {
  double ratio = 0.0;
  double C = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  /// sigma rho^alpha - ln N; positive when N stays below e^{sigma rho^alpha}.
  double growth_margin = 0.0;
  bool admissible_sparsity = false;
  bool admissible_growth = false;
};

/// Advisory check of the sparsity and growth hypotheses for given mixing
/// constants (delta, k) and group dimension d (d = 3 for SL(2,R)).
ConditionReport check_growth_conditions(const SparseSchedule& schedule, double gamma, int k, double delta, int d);

/// u(r) = r + ln(N) / v.
double normalizing_level(double r, double N, double v);

struct TrajectoryRecord {
  std::vector<double> values;
  Seed seed;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

/// Observable along the orbit at the schedule times; values[j - alpha] is
/// taken at time m_j.
TrajectoryRecord run_trajectory(const LatticeFrame& start, const FlowSpec& flow, const SparseSchedule& schedule,
                                const ObservableKind& observable, Seed seed = {});

/// k-th largest entry (k = 1 is the maximum). Throws IndexOutOfRange unless
/// 1 <= k <= values.size().
double kth_max(std::span<const double> values, int k);

/// What an ensemble needs to know.
struct EnsembleSpec {
  FlowSpec flow = FlowSpec::geodesic();
  SparseSchedule schedule;
  ObservableKind observable = ObservableKind::shortest_vector();
  int k = 1;
  double v = 2.0;
  std::size_t samples = 100000;
  Seed seed{42};
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Trajectories from Haar-random starts; trajectory i uses
/// derive_subseed(seed, i). Throws InvalidArgument if samples < 100.
std::vector<TrajectoryRecord> simulate_ensemble(const EnsembleSpec& spec);

/// Blocks of N independent Haar draws evaluated without any flow, from a
/// stream disjoint from the dynamical one.
std::vector<TrajectoryRecord> simulate_iid_oracle(const EnsembleSpec& spec);

/// kth_max of each record minus ln(N) / v.
std::vector<double> rescaled_kth_maxima(const std::vector<TrajectoryRecord>& records, int k, double v);

EmpiricalCDF ensemble_run(const EnsembleSpec& spec);
EmpiricalCDF iid_oracle_run(const EnsembleSpec& spec);

/// Seed of the oracle stream for a given master seed.
Seed oracle_seed(Seed master) noexcept;

}  // namespace evtlab
