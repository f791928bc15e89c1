#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "evtlab/haar.hpp"
#include "evtlab/stats.hpp"
#include "oracles.hpp"

using evtlab::Rng;
using evtlab::Seed;

TEST(DeriveSubseed, MatchesDocumentedMixer) {
  for (std::uint64_t master : {0ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    for (std::uint64_t i : {0ULL, 1ULL, 12345ULL}) {
      EXPECT_EQ(evtlab::derive_subseed(Seed{master}, i).master, oracle::splitmix64(master, i));
    }
  }
  EXPECT_NE(evtlab::derive_subseed(Seed{42}, 0), evtlab::derive_subseed(Seed{42}, 1));
  EXPECT_EQ(evtlab::derive_subseed(Seed{42}, 7), evtlab::derive_subseed(Seed{42}, 7));
  // Published first output of SplitMix64 seeded with 0.
  EXPECT_EQ(evtlab::derive_subseed(Seed{0}, 0).master, 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformsAreHalfOpenAndDeterministic) {
  Rng a(Seed{9});
  Rng b(Seed{9});
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, b.uniform01());
  }
}

TEST(FundamentalDomain, SamplesLieInDomain) {
  Rng rng(Seed{1});
  for (int i = 0; i < 100000; ++i) {
    const auto p = evtlab::sample_fundamental_domain(rng);
    ASSERT_LE(std::fabs(p.x), 0.5);
    ASSERT_GE(p.x * p.x + p.y * p.y, 1.0);
    ASSERT_GE(p.theta, 0.0);
    ASSERT_LT(p.theta, 2.0 * std::numbers::pi);
  }
}

TEST(FundamentalDomain, AcceptanceRate) {
  Rng rng(Seed{2});
  std::uint64_t proposals = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    evtlab::sample_fundamental_domain(rng, &proposals);
  }
  const double p = std::numbers::pi * std::sqrt(3.0) / 6.0;
  const double rate = n / static_cast<double>(proposals);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(proposals));
  EXPECT_NEAR(rate, p, 3 * se);
}

TEST(FundamentalDomain, CuspMass) {
  Rng rng(Seed{3});
  const int n = 200000;
  int high = 0;
  for (int i = 0; i < n; ++i) {
    high += evtlab::sample_fundamental_domain(rng).y >= 2.0;
  }
  EXPECT_NEAR(high / static_cast<double>(n), 3.0 / (2.0 * std::numbers::pi), evtlab::dkw_epsilon(n, 0.01));
}

TEST(HaarSample, FramesAreUnimodularAndDeltaMatchesChart) {
  Rng rng(Seed{4});
  for (int i = 0; i < 20000; ++i) {
    const auto p = evtlab::sample_fundamental_domain(rng);
    const auto f = evtlab::frame_from_chart(p);
    ASSERT_LE(std::fabs(f.log_abs_det()), 1e-9);
    ASSERT_NEAR(evtlab::delta_observable(f), 0.5 * std::log(p.y), 1e-12);
  }
}

TEST(HaarSample, DeltaTailBelowSiegelBound) {
  Rng rng(Seed{5});
  const int n = 200000;
  std::vector<double> delta;
  delta.reserve(n);
  for (int i = 0; i < n; ++i) {
    delta.push_back(evtlab::delta_observable(evtlab::sample_haar_sl2(rng)));
  }
  const evtlab::EmpiricalCDF ecdf(delta);
  for (double z = 0.5; z <= 2.5 + 1e-12; z += 0.25) {
    const double p = 3.0 / std::numbers::pi * std::exp(-2.0 * z);
    const double rel_se = std::sqrt((1 - p) / (n * p));
    EXPECT_LE(ecdf.tail(z), p * (1 + 3 * rel_se)) << z;
  }
}

TEST(HaarSample, DeltaIgnoresRotationFiber) {
  Rng a(Seed{6});
  Rng theta_rng(Seed{7});
  const int n = 50000;
  std::vector<double> original, rotated;
  for (int i = 0; i < n; ++i) {
    auto p = evtlab::sample_fundamental_domain(a);
    original.push_back(evtlab::delta_observable(evtlab::frame_from_chart(p)));
    p.theta = 2 * std::numbers::pi * theta_rng.uniform01();
    rotated.push_back(evtlab::delta_observable(evtlab::frame_from_chart(p)));
  }
  EXPECT_LE(evtlab::ks_distance(evtlab::EmpiricalCDF(original), evtlab::EmpiricalCDF(rotated)),
            2 * evtlab::dkw_epsilon(n, 0.01));
}

TEST(HaarSample, IndependentRunsAgree) {
  const int n = 100000;
  auto run = [n](std::uint64_t seed) {
    Rng rng(Seed{seed});
    std::vector<double> v;
    for (int i = 0; i < n; ++i) {
      v.push_back(evtlab::delta_observable(evtlab::sample_haar_sl2(rng)));
    }
    return evtlab::EmpiricalCDF(v);
  };
  EXPECT_LE(evtlab::ks_distance(run(10), run(11)), 2 * evtlab::dkw_epsilon(n, 0.01));
}
