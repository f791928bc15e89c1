#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "evtlab/errors.hpp"
#include "evtlab/evt.hpp"
#include "evtlab/haar.hpp"
#include "evtlab/limit_laws.hpp"
#include "evtlab/observables.hpp"
#include "evtlab/stats.hpp"

using namespace evtlab;

namespace {

EnsembleSpec small_spec(std::size_t samples, int k) {
  EnsembleSpec s;
  s.schedule = build_schedule(1.0, 1.3, 14);
  s.k = k;
  s.samples = samples;
  s.seed = Seed{1234};
  return s;
}

// Independent marginal draws of Delta on a stream no engine code touches.
EmpiricalCDF marginal(std::size_t n, std::uint64_t seed) {
  Rng rng(Seed{seed});
  std::vector<double> v(n);
  for (auto& x : v) {
    x = delta_observable(sample_haar_sl2(rng));
  }
  return EmpiricalCDF(std::move(v));
}

}  // namespace

TEST(Schedule, DefaultWindow) {
  const auto s = build_schedule(1.0, 1.3, 14);
  EXPECT_EQ(s.alpha, 14);
  EXPECT_EQ(s.beta, 28);
  EXPECT_EQ(s.size(), 15);
  EXPECT_NEAR(s.time(14), 39.3738, 1e-3);
  EXPECT_NEAR(s.time(28), 1550.29, 1e-2);
  const auto t = s.times();
  ASSERT_EQ(t.size(), 15u);
  EXPECT_DOUBLE_EQ(t.front(), s.time(14));
  EXPECT_DOUBLE_EQ(t.back(), s.time(28));
  for (int n = 1; n < 40; ++n) {
    EXPECT_EQ(build_schedule(2.0, 1.1, n).size(), n + 1);
  }
}

TEST(Schedule, Errors) {
  EXPECT_THROW(build_schedule(1.0, 1.0, 14), InvalidSchedule);
  EXPECT_THROW(build_schedule(0.0, 1.3, 14), InvalidSchedule);
  EXPECT_THROW(build_schedule(1.0, 1.3, 0), InvalidSchedule);
  EXPECT_THROW(SparseSchedule::make(1.0, 1.3, 5, 4), InvalidSchedule);
  EXPECT_THROW(SparseSchedule::make(1.0, std::nan(""), 1, 2), InvalidSchedule);
}

TEST(Conditions, SparsityFails) {
  const auto r = check_growth_conditions(SparseSchedule::make(1.0, 2.0, 1, 2), 1.0, 2, 0.5, 2);
  EXPECT_DOUBLE_EQ(r.C, 0.25);
  EXPECT_DOUBLE_EQ(r.ratio, 0.5);
  EXPECT_FALSE(r.admissible_sparsity);
}

TEST(Conditions, SigmaExample) {
  const auto r = check_growth_conditions(SparseSchedule::make(1.0, 2.0, 1, 2), 1.0, 2, 3.0, 3);
  EXPECT_DOUBLE_EQ(r.C, 1.0);
  EXPECT_TRUE(r.admissible_sparsity);
  EXPECT_NEAR(r.sigma, 12.0 / 29.0, 1e-14);
}

TEST(Conditions, SmallGammaGivesUnitC) {
  const auto r = check_growth_conditions(build_schedule(1.0, 1.3, 14), 1e-12, 2, 1.0, 2);
  EXPECT_DOUBLE_EQ(r.C, 1.0);
  EXPECT_TRUE(r.admissible_sparsity);
}

TEST(NormalizingLevel, Examples) {
  EXPECT_NEAR(normalizing_level(0.0, 15.0, 2.0), std::log(15.0) / 2.0, 1e-15);
  EXPECT_NEAR(normalizing_level(0.0, 15.0, 2.0), 1.3540, 1e-4);
  EXPECT_DOUBLE_EQ(normalizing_level(-0.7, 1.0, 3.0), -0.7);
  EXPECT_NEAR(normalizing_level(1.0, std::exp(2.0), 1.0), 3.0, 1e-14);
}

TEST(Trajectory, RectangularLatticeGrowsLinearly) {
  const auto s = build_schedule(1.0, 1.3, 14);
  const auto rec = run_trajectory(LatticeFrame::identity(2), FlowSpec::geodesic(), s, ObservableKind::shortest_vector());
  ASSERT_EQ(rec.values.size(), 15u);
  for (int i = 0; i < 15; ++i) {
    EXPECT_NEAR(rec.values[i], s.time(s.alpha + i) / 2.0, 1e-9 * s.time(s.alpha + i));
  }
  EXPECT_EQ(rec, run_trajectory(LatticeFrame::identity(2), FlowSpec::geodesic(), s, ObservableKind::shortest_vector()));
}

TEST(KthMax, Examples) {
  const std::vector<double> v{5, 3, 9};
  EXPECT_EQ(kth_max(v, 1), 9);
  EXPECT_EQ(kth_max(v, 2), 5);
  EXPECT_EQ(kth_max(v, 3), 3);
  EXPECT_THROW(kth_max(v, 0), IndexOutOfRange);
  EXPECT_THROW(kth_max(v, 4), IndexOutOfRange);
}

TEST(KthMax, ExceedanceCharacterizationAndPermutation) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> value(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + trial % 9);
    for (auto& x : v) {
      x = value(rng);
    }
    double prev = INFINITY;
    for (int k = 1; k <= static_cast<int>(v.size()); ++k) {
      const double m = kth_max(v, k);
      EXPECT_LE(m, prev);
      prev = m;
      for (double u = -0.5; u <= 6.5; u += 0.5) {
        const auto above = std::count_if(v.begin(), v.end(), [u](double x) { return x > u; });
        EXPECT_EQ(m <= u, above <= k - 1);
      }
      auto shuffled = v;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      EXPECT_EQ(kth_max(shuffled, k), m);
    }
    EXPECT_EQ(kth_max(v, static_cast<int>(v.size())), *std::min_element(v.begin(), v.end()));
  }
}

TEST(Ensemble, ValidatesSpec) {
  auto s = small_spec(99, 1);
  EXPECT_THROW(simulate_ensemble(s), InvalidArgument);
  s = small_spec(200, 16);
  EXPECT_THROW(simulate_ensemble(s), IndexOutOfRange);
}

TEST(Ensemble, IndependentOfThreadCount) {
  auto s = small_spec(3000, 2);
  s.threads = 1;
  const auto a = ensemble_run(s);
  const auto oa = iid_oracle_run(s);
  s.threads = 3;
  EXPECT_EQ(ensemble_run(s), a);
  EXPECT_EQ(iid_oracle_run(s), oa);
  EXPECT_EQ(a(-1e9), 0.0);
  EXPECT_EQ(a(1e9), 1.0);
}

TEST(Ensemble, RescalingIsAShift) {
  auto s = small_spec(1000, 2);
  const auto records = simulate_ensemble(s);
  std::vector<double> raw;
  for (const auto& r : records) {
    raw.push_back(kth_max(r.values, 2));
  }
  const EmpiricalCDF raw_cdf(raw);
  const EmpiricalCDF rescaled(rescaled_kth_maxima(records, 2, s.v));
  EXPECT_EQ(rescaled, ensemble_run(s));
  const double shift = std::log(15.0) / s.v;
  for (double r = -2.0; r <= 3.0; r += 0.01) {
    EXPECT_DOUBLE_EQ(rescaled(r), raw_cdf(r + shift));
  }
}

TEST(Oracle, MaximumIsProductLaw) {
  auto s = small_spec(40000, 1);
  const auto oracle = iid_oracle_run(s);
  const auto f = marginal(2000000, 777);
  const double shift = std::log(15.0) / 2.0;
  const double band = dkw_epsilon(s.samples, 0.01) + 15 * dkw_epsilon(f.size(), 0.01);
  for (double r = -2.0; r <= 3.0; r += 0.05) {
    EXPECT_NEAR(oracle(r), std::pow(f(r + shift), 15), band) << r;
  }
}

TEST(Oracle, KthIsBinomialLaw) {
  const auto f = marginal(2000000, 778);
  const double shift = std::log(15.0) / 2.0;
  for (int k : {2, 3}) {
    auto s = small_spec(40000, k);
    const auto oracle = iid_oracle_run(s);
    const double band = dkw_epsilon(s.samples, 0.01) + 15 * dkw_epsilon(f.size(), 0.01);
    for (double r = -2.0; r <= 3.0; r += 0.05) {
      EXPECT_NEAR(oracle(r), iid_exact_kth_cdf(1.0 - f(r + shift), 15, k), band) << k << " " << r;
    }
  }
}

TEST(Ensemble, AgreesWithOracleAtSmallScale) {
  auto s = small_spec(20000, 1);
  const double ks = ks_distance(ensemble_run(s), iid_oracle_run(s));
  EXPECT_LE(ks, 2 * dkw_epsilon(s.samples, 0.01));
}
