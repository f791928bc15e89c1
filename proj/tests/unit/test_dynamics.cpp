#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "evtlab/dynamics.hpp"
#include "evtlab/errors.hpp"
#include "oracles.hpp"

using evtlab::FlowSpec;
using evtlab::LatticeFrame;

TEST(FlowSpec, Validation) {
  EXPECT_THROW(FlowSpec({1.0}), evtlab::InvalidFlow);
  EXPECT_THROW(FlowSpec({1.0, 0.0}), evtlab::InvalidFlow);
  EXPECT_THROW(FlowSpec({INFINITY, -INFINITY}), evtlab::InvalidFlow);
  EXPECT_NO_THROW(FlowSpec({1.0, 0.0, -1.0}));
  EXPECT_EQ(FlowSpec::geodesic().exponents(), (std::vector<double>{0.5, -0.5}));
}

TEST(FlowSpec, TextAndJson) {
  const FlowSpec f({0.25, 0.5, -0.75});
  EXPECT_EQ(evtlab::parse_flow(evtlab::format_flow(f)), f);
  EXPECT_EQ(evtlab::parse_flow(" 0.5 , -0.5 "), FlowSpec::geodesic());
  EXPECT_EQ(evtlab::flow_from_json(evtlab::flow_to_json(f)), f);
  EXPECT_EQ(evtlab::flow_to_json(FlowSpec::geodesic()), R"({"exponents":[0.5,-0.5]})");
  EXPECT_THROW(evtlab::parse_flow("0.5,x"), evtlab::InvalidFlow);
  EXPECT_THROW(evtlab::parse_flow("0.5,,-0.5"), evtlab::InvalidFlow);
  EXPECT_THROW(evtlab::flow_from_json("{}"), evtlab::InvalidFlow);
}

TEST(AdjointSpectrum, Geodesic) {
  const auto s = evtlab::adjoint_spectrum(FlowSpec::geodesic());
  EXPECT_EQ(s.eigen_exponents, (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(s.gamma, 1.0);
  EXPECT_TRUE(s.partially_hyperbolic);
}

TEST(AdjointSpectrum, TrivialFlow) {
  const auto s = evtlab::adjoint_spectrum(FlowSpec({0.0, 0.0}));
  EXPECT_EQ(s.eigen_exponents, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_FALSE(s.partially_hyperbolic);
}

TEST(AdjointSpectrum, ThreeDimensional) {
  const auto s = evtlab::adjoint_spectrum(FlowSpec({1.0, 0.0, -1.0}));
  EXPECT_EQ(s.eigen_exponents, (std::vector<double>{-2, -1, -1, 0, 0, 1, 1, 2}));
  EXPECT_EQ(s.gamma, 2.0);
}

TEST(AdjointSpectrum, SymmetricWithRightCardinality) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int d = 2; d <= 5; ++d) {
    std::vector<double> w(static_cast<std::size_t>(d));
    double sum = 0.0;
    for (int i = 0; i + 1 < d; ++i) {
      w[i] = u(rng);
      sum += w[i];
    }
    w[d - 1] = -sum;
    const auto s = evtlab::adjoint_spectrum(FlowSpec(w));
    ASSERT_EQ(s.eigen_exponents.size(), static_cast<std::size_t>(d * d - 1));
    auto neg = s.eigen_exponents;
    for (double& x : neg) {
      x = -x;
    }
    std::sort(neg.begin(), neg.end());
    for (std::size_t i = 0; i < neg.size(); ++i) {
      EXPECT_NEAR(neg[i], s.eigen_exponents[i], 1e-12);
    }
    EXPECT_EQ(s.gamma, *std::max_element(s.eigen_exponents.begin(), s.eigen_exponents.end()));
  }
}

TEST(ApplyFlow, TimeZeroIsIdentity) {
  std::mt19937_64 rng(4);
  const auto b = LatticeFrame::from_doubles(2, oracle::random_unimodular_frame(rng, 2));
  const auto out = evtlab::apply_flow(b, FlowSpec::geodesic(), 0.0);
  const auto x = b.to_doubles();
  const auto y = out.to_doubles();
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(x[i], y[i], 1e-14);
  }
}

TEST(ApplyFlow, IntegerLatticeDelta) {
  for (double t : {0.0, 1.0, 10.0, 100.0, 800.0, 1550.3}) {
    const auto f = evtlab::apply_flow(LatticeFrame::identity(2), FlowSpec::geodesic(), t);
    EXPECT_NEAR(evtlab::delta_observable(f), t / 2, 1e-9 * std::max(1.0, t));
    EXPECT_LE(std::fabs(f.log_abs_det()), 1e-9);
  }
}

TEST(ApplyFlow, DimensionMismatch) {
  EXPECT_THROW(evtlab::apply_flow(LatticeFrame::identity(3), FlowSpec::geodesic(), 1.0), evtlab::DimensionMismatch);
}

TEST(ApplyFlow, SemigroupAtDeltaLevel) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> time(-100.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const auto x = LatticeFrame::from_doubles(2, oracle::random_unimodular_frame(rng, 2));
    const double t = time(rng);
    const double s = time(rng);
    const auto two_step = evtlab::apply_flow(evtlab::apply_flow(x, FlowSpec::geodesic(), t), FlowSpec::geodesic(), s);
    const auto one_step = evtlab::apply_flow(x, FlowSpec::geodesic(), t + s);
    EXPECT_LE(std::fabs(two_step.log_abs_det()), 1e-9);
    ASSERT_NEAR(evtlab::delta_observable(two_step), evtlab::delta_observable(one_step), 1e-8) << t << " " << s;
  }
}

TEST(ApplyFlow, SemigroupInThreeDimensions) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> time(-20.0, 20.0);
  const FlowSpec flow({1.0, 0.0, -1.0});
  for (int i = 0; i < 100; ++i) {
    const auto x = LatticeFrame::from_doubles(3, oracle::random_unimodular_frame(rng, 3));
    const double t = time(rng);
    const double s = time(rng);
    EXPECT_NEAR(evtlab::delta_observable(evtlab::apply_flow(evtlab::apply_flow(x, flow, t), flow, s)),
                evtlab::delta_observable(evtlab::apply_flow(x, flow, t + s)), 1e-8);
  }
}

TEST(FlowPropagator, AgreesWithDirectFlowAtModerateTimes) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> step(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const auto x = LatticeFrame::from_doubles(2, oracle::random_unimodular_frame(rng, 2));
    evtlab::FlowPropagator p(x, FlowSpec::geodesic());
    while (p.time() < 20.0) {
      p.advance(step(rng));
      const double direct = evtlab::delta_observable(evtlab::apply_flow(x, FlowSpec::geodesic(), p.time()));
      // Rounding in the reduced double basis grows like e^{gamma t}.
      ASSERT_NEAR(evtlab::delta_observable(p.frame()), direct, 1e-12 + 1e-13 * std::exp(p.time()));
    }
  }
}

TEST(FlowPropagator, StaysUnimodularAndReduced) {
  std::mt19937_64 rng(8);
  const auto x = LatticeFrame::from_doubles(2, oracle::random_unimodular_frame(rng, 2));
  evtlab::FlowPropagator p(x, FlowSpec::geodesic());
  for (int j = 0; j < 30; ++j) {
    p.advance(std::pow(1.3, j));
    const auto f = p.frame();
    EXPECT_LE(std::fabs(f.log_abs_det()), 1e-9);
    const auto b = f.to_doubles();
    EXPECT_LE(oracle::column_norm(b, 2, 0), oracle::column_norm(b, 2, 1) * (1 + 1e-12));
  }
}

TEST(FlowPropagator, IntegerLatticeLongTimes) {
  evtlab::FlowPropagator p(LatticeFrame::identity(2), FlowSpec::geodesic());
  for (double t : {10.0, 500.0, 1000.0, 1550.3}) {
    p.advance(t - p.time());
    EXPECT_NEAR(evtlab::delta_observable(p.frame()), t / 2, 1e-9 * t);
  }
}

TEST(FlowPropagator, ThreeDimensional) {
  std::mt19937_64 rng(9);
  const FlowSpec flow({1.0, 0.0, -1.0});
  const auto x = LatticeFrame::from_doubles(3, oracle::random_unimodular_frame(rng, 3));
  evtlab::FlowPropagator p(x, flow);
  p.advance(8.0);
  EXPECT_NEAR(evtlab::delta_observable(p.frame()), evtlab::delta_observable(evtlab::apply_flow(x, flow, 8.0)), 1e-6);
}

TEST(FlowPropagator, RejectsNegativeSteps) {
  evtlab::FlowPropagator p(LatticeFrame::identity(2), FlowSpec::geodesic());
  EXPECT_THROW(p.advance(-1.0), evtlab::DomainError);
  EXPECT_THROW(evtlab::FlowPropagator(LatticeFrame::identity(3), FlowSpec::geodesic()), evtlab::DimensionMismatch);
}
