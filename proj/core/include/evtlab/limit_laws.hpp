#pragma once

namespace evtlab {

/// The Gumbel-type law r -> exp(-w e^{-v r}).
struct GumbelLaw {
  double w;
  double v;

  /// Throws DomainError unless w > 0 and v > 0.
  GumbelLaw(double w_, double v_);
};

/// zeta(s) for integer s >= 2: the first 10^6 terms summed smallest first
/// plus an Euler-Maclaurin tail; absolute error well below 1e-12.
double riemann_zeta(int s);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// V_d / (2 zeta(d)), the leading tail constant of Delta on unimodular
/// lattices. Throws InvalidDimension for d < 2.
double siegel_constant(int d);

double gumbel_cdf(double r, const GumbelLaw& law);

/// exp(-L) * sum_{i<k} L^i / i! with L = w e^{-v r}: the limit law of the
/// k-th largest value. Throws DomainError for k < 1.
double kth_target_cdf(double r, const GumbelLaw& law, int k);

/// P(at most k-1 of N independent indices exceed), each with probability p:
/// sum_{i<k} C(N,i) p^i (1-p)^{N-i}, summed in the log domain.
/// Throws DomainError unless 0 <= p <= 1 and 1 <= k <= N.
double iid_exact_kth_cdf(double p, long N, int k);

}  // namespace evtlab
