#include "evtlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "evtlab/errors.hpp"

namespace evtlab {

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) {
    throw EmptyInput("EmpiricalCDF: no samples");
  }
  for (double x : sorted_) {
    if (!std::isfinite(x)) {
      throw DomainError("EmpiricalCDF: non-finite sample");
    }
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::operator()(double u) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), u);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::left_limit(double u) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), u);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCDF::tail(double z) const { return 1.0 - left_limit(z); }

double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto& xa = a.sorted_samples();
  const auto& xb = b.sorted_samples();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xa.size() || j < xb.size()) {
    double v;
    if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j])) {
      v = xa[i];
    } else {
      v = xb[j];
    }
    while (i < xa.size() && xa[i] == v) {
      ++i;
    }
    while (j < xb.size() && xb[j] == v) {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_distance(const EmpiricalCDF& a, const std::function<double(double)>& cdf) {
  const auto& x = a.sorted_samples();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    const double v = x[i];
    const std::size_t start = i;
    while (i < x.size() && x[i] == v) {
      ++i;
    }
    const double f = cdf(v);
    d = std::max({d, std::fabs(static_cast<double>(i) / n - f), std::fabs(static_cast<double>(start) / n - f)});
  }
  return d;
}

double dkw_epsilon(std::size_t n, double alpha) {
  if (n < 1 || !(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("dkw_epsilon: need n >= 1 and 0 < alpha < 1");
  }
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double TailFit::w_hat() const { return std::exp(log_w_hat); }

double TailFit::tail(double z) const { return std::exp(log_w_hat - v_hat * z); }

TailFit tail_fit(std::span<const double> samples, std::span<const double> z_grid) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  TailFit fit;
  fit.n = n;
  std::vector<double> logs;
  for (double z : z_grid) {
    const auto count = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), z));
    if (count >= kMinTailExceedances && count < n) {
      fit.z_grid.push_back(z);
      logs.push_back(std::log(static_cast<double>(count) / static_cast<double>(n)));
    }
  }
  const std::size_t m = fit.z_grid.size();
  if (m < 3) {
    throw InsufficientTail("tail_fit: fewer than 3 grid points with >= 50 exceedances");
  }
  double mz = 0.0;
  double ml = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mz += fit.z_grid[i];
    ml += logs[i];
  }
  mz /= static_cast<double>(m);
  ml /= static_cast<double>(m);
  double szz = 0.0;
  double szl = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    szz += (fit.z_grid[i] - mz) * (fit.z_grid[i] - mz);
    szl += (fit.z_grid[i] - mz) * (logs[i] - ml);
  }
  const double slope = szl / szz;
  fit.v_hat = -slope;
  fit.log_w_hat = ml - slope * mz;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = logs[i] - (fit.log_w_hat - fit.v_hat * fit.z_grid[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(m));
  return fit;
}

std::vector<double> arithmetic_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw DomainError("arithmetic_grid: need step > 0 and hi >= lo");
  }
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double z = lo + static_cast<double>(i) * step;
    if (z > hi + 1e-9 * step) {
      break;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace evtlab
