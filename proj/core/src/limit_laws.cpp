#include "evtlab/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "evtlab/errors.hpp"

namespace evtlab {

namespace {

constexpr long kZetaTerms = 1'000'000;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

GumbelLaw::GumbelLaw(double w_, double v_) : w(w_), v(v_) {
  if (!(w > 0.0) || !(v > 0.0) || !std::isfinite(w) || !std::isfinite(v)) {
    throw DomainError("GumbelLaw: w and v must be positive and finite");
  }
}

double riemann_zeta(int s) {
  if (s < 2) {
    throw InvalidDimension("riemann_zeta: s must be >= 2 (got " + std::to_string(s) + ")");
  }
  // Kahan summation from the small end.
  double sum = 0.0;
  double comp = 0.0;
  for (long n = kZetaTerms; n >= 1; --n) {
    const double term = std::pow(static_cast<double>(n), -s) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  const double m = static_cast<double>(kZetaTerms);
  const double ds = static_cast<double>(s);
  const double tail = std::pow(m, 1.0 - ds) / (ds - 1.0) - 0.5 * std::pow(m, -ds) + ds * std::pow(m, -ds - 1.0) / 12.0;
  return sum + tail;
}

double unit_ball_volume(int d) {
  if (d < 1) {
    throw InvalidDimension("unit_ball_volume: d must be >= 1");
  }
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double siegel_constant(int d) {
  if (d < 2) {
    throw InvalidDimension("siegel_constant: d must be >= 2 (zeta(1) diverges)");
  }
  return unit_ball_volume(d) / (2.0 * riemann_zeta(d));
}

double gumbel_cdf(double r, const GumbelLaw& law) {
  const double log_rate = std::log(law.w) - law.v * r;
  if (log_rate > 700.0) {
    return 0.0;
  }
  if (log_rate < -745.0) {
    return 1.0;
  }
  return clamp01(std::exp(-std::exp(log_rate)));
}

double kth_target_cdf(double r, const GumbelLaw& law, int k) {
  if (k < 1) {
    throw DomainError("kth_target_cdf: k must be >= 1");
  }
  const double log_rate = std::log(law.w) - law.v * r;
  if (log_rate > 700.0) {
    return 0.0;
  }
  if (log_rate < -745.0) {
    return 1.0;
  }
  const double rate = std::exp(log_rate);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    sum += std::exp(-rate + i * log_rate - std::lgamma(i + 1.0));
  }
  return clamp01(sum);
}

double iid_exact_kth_cdf(double p, long N, int k) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("iid_exact_kth_cdf: p must lie in [0, 1]");
  }
  if (k < 1 || static_cast<long>(k) > N) {
    throw DomainError("iid_exact_kth_cdf: need 1 <= k <= N");
  }
  if (p == 0.0) {
    return 1.0;
  }
  if (p == 1.0) {
    return 0.0;
  }
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(N + 1.0);
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double log_choose = lgn - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(N - i) + 1.0);
    sum += std::exp(log_choose + i * lp + static_cast<double>(N - i) * lq);
  }
  return clamp01(sum);
}

}  // namespace evtlab
