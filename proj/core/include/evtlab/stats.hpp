#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evtlab {

/// Right-continuous step function u -> #{x_i <= u} / n.
class EmpiricalCDF {
 public:
  /// Throws EmptyInput for no samples and DomainError for non-finite ones.
  explicit EmpiricalCDF(std::vector<double> samples);

  double operator()(double u) const;
  /// #{x_i < u} / n.
  double left_limit(double u) const;
  /// #{x_i >= z} / n, the empirical tail Phi(z).
  double tail(double z) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }

  friend bool operator==(const EmpiricalCDF&, const EmpiricalCDF&) = default;

 private:
  std::vector<double> sorted_;
};

/// Exact sup |F_a - F_b| over the pooled jump points.
double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b);

/// sup |F_a - F| for a continuous (or step) CDF F, checked on both sides of
/// every jump of F_a.
double ks_distance(const EmpiricalCDF& a, const std::function<double(double)>& cdf);

/// sqrt(ln(2/alpha) / (2n)). Throws DomainError unless n >= 1, 0 < alpha < 1.
double dkw_epsilon(std::size_t n, double alpha);

/// Least-squares fit of log Phi(z) = log w - v z.
struct TailFit {
  double log_w_hat = 0.0;
  double v_hat = 0.0;
  /// Grid points actually used.
  std::vector<double> z_grid;
  double residual_rms = 0.0;
  std::size_t n = 0;

  double w_hat() const;
  /// Fitted tail w_hat e^{-v_hat z}.
  double tail(double z) const;
};

inline constexpr std::size_t kMinTailExceedances = 50;

/// Fits over grid points whose exceedance count c satisfies
/// kMinTailExceedances <= c < n. Throws InsufficientTail when fewer than three
/// grid points qualify.
TailFit tail_fit(std::span<const double> samples, std::span<const double> z_grid);

/// lo, lo + step, ... up to hi (inclusive within 1e-9 step).
std::vector<double> arithmetic_grid(double lo, double hi, double step);

}  // namespace evtlab
