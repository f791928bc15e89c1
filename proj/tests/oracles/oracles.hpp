// Reference computations for the test suites. Everything here is written
// from first principles in plain doubles and never calls into the library
// code it is used to check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<double>;  // row-major d x d, columns are vectors

inline double at(const Matrix& m, int d, int r, int c) { return m[static_cast<std::size_t>(r * d + c)]; }

inline Matrix multiply(const Matrix& a, const Matrix& b, int d) {
  Matrix out(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        s += at(a, d, i, k) * at(b, d, k, j);
      }
      out[static_cast<std::size_t>(i * d + j)] = s;
    }
  }
  return out;
}

inline double determinant(Matrix m, int d) {
  double det = 1.0;
  for (int c = 0; c < d; ++c) {
    int p = c;
    for (int r = c + 1; r < d; ++r) {
      if (std::fabs(m[r * d + c]) > std::fabs(m[p * d + c])) {
        p = r;
      }
    }
    if (m[p * d + c] == 0.0) {
      return 0.0;
    }
    if (p != c) {
      for (int k = 0; k < d; ++k) {
        std::swap(m[p * d + k], m[c * d + k]);
      }
      det = -det;
    }
    det *= m[c * d + c];
    for (int r = c + 1; r < d; ++r) {
      const double f = m[r * d + c] / m[c * d + c];
      for (int k = c; k < d; ++k) {
        m[r * d + k] -= f * m[c * d + k];
      }
    }
  }
  return det;
}

/// Gauss-Jordan inverse.
inline Matrix inverse(Matrix m, int d) {
  Matrix inv(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) {
    inv[i * d + i] = 1.0;
  }
  for (int c = 0; c < d; ++c) {
    int p = c;
    for (int r = c + 1; r < d; ++r) {
      if (std::fabs(m[r * d + c]) > std::fabs(m[p * d + c])) {
        p = r;
      }
    }
    for (int k = 0; k < d; ++k) {
      std::swap(m[p * d + k], m[c * d + k]);
      std::swap(inv[p * d + k], inv[c * d + k]);
    }
    const double piv = m[c * d + c];
    for (int k = 0; k < d; ++k) {
      m[c * d + k] /= piv;
      inv[c * d + k] /= piv;
    }
    for (int r = 0; r < d; ++r) {
      if (r == c) {
        continue;
      }
      const double f = m[r * d + c];
      for (int k = 0; k < d; ++k) {
        m[r * d + k] -= f * m[c * d + k];
        inv[r * d + k] -= f * inv[c * d + k];
      }
    }
  }
  return inv;
}

inline double column_norm(const Matrix& m, int d, int c) {
  double s = 0.0;
  for (int r = 0; r < d; ++r) {
    s += at(m, d, r, c) * at(m, d, r, c);
  }
  return std::sqrt(s);
}

/// If v = B c is a shortest vector then |c_i| <= ||row_i(B^-1)|| ||v|| and
/// ||v|| <= min_j ||b_j||. Returns the resulting bound on max |c_i|.
inline double coefficient_bound(const Matrix& b, int d) {
  const Matrix inv = inverse(b, d);
  double shortest_column = std::numeric_limits<double>::infinity();
  for (int c = 0; c < d; ++c) {
    shortest_column = std::min(shortest_column, column_norm(b, d, c));
  }
  double worst_row = 0.0;
  for (int r = 0; r < d; ++r) {
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      s += at(inv, d, r, c) * at(inv, d, r, c);
    }
    worst_row = std::max(worst_row, std::sqrt(s));
  }
  return worst_row * shortest_column;
}

/// min ||B c|| over nonzero integer c with |c_i| <= box.
inline double brute_force_lambda1(const Matrix& b, int d, int box) {
  std::vector<int> c(static_cast<std::size_t>(d), -box);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    bool nonzero = false;
    double s = 0.0;
    for (int r = 0; r < d; ++r) {
      double x = 0.0;
      for (int j = 0; j < d; ++j) {
        x += at(b, d, r, j) * c[static_cast<std::size_t>(j)];
        nonzero = nonzero || c[static_cast<std::size_t>(j)] != 0;
      }
      s += x * x;
    }
    if (nonzero) {
      best = std::min(best, std::sqrt(s));
    }
    int i = 0;
    while (i < d && c[static_cast<std::size_t>(i)] == box) {
      c[static_cast<std::size_t>(i)] = -box;
      ++i;
    }
    if (i == d) {
      break;
    }
    ++c[static_cast<std::size_t>(i)];
  }
  return best;
}

/// Gaussian matrix rescaled to determinant +1.
inline Matrix random_unimodular_frame(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  while (true) {
    Matrix m(static_cast<std::size_t>(d * d));
    for (double& x : m) {
      x = normal(rng);
    }
    double det = determinant(m, d);
    if (std::fabs(det) < 1e-3) {
      continue;
    }
    if (det < 0.0) {
      for (int r = 0; r < d; ++r) {
        m[r * d] = -m[r * d];
      }
      det = -det;
    }
    const double s = std::pow(det, -1.0 / d);
    for (double& x : m) {
      x *= s;
    }
    return m;
  }
}

/// Random element of SL(d,Z) with entries in [-bound, bound], built from
/// elementary row operations and rejected if any entry grows too large.
inline Matrix random_sl_z(std::mt19937_64& rng, int d, int bound) {
  std::uniform_int_distribution<int> pick(0, d - 1);
  std::uniform_int_distribution<int> mult(-2, 2);
  std::uniform_int_distribution<int> steps(1, 8);
  while (true) {
    Matrix u(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) {
      u[i * d + i] = 1.0;
    }
    const int n = steps(rng);
    bool ok = true;
    for (int s = 0; s < n && ok; ++s) {
      const int i = pick(rng);
      int j = pick(rng);
      if (i == j) {
        j = (j + 1) % d;
      }
      const int q = mult(rng);
      for (int c = 0; c < d; ++c) {
        u[i * d + c] += q * u[j * d + c];
        ok = ok && std::fabs(u[i * d + c]) <= bound;
      }
    }
    if (ok) {
      return u;
    }
  }
}

inline Matrix rotation(double theta) { return {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)}; }

/// SplitMix64 output function at state master + (index + 1) * golden gamma.
inline std::uint64_t splitmix64(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Number of k-element subsets of {0..n-1}; small n only.
inline double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

/// P(at most k-1 of N Bernoulli(p) succeed) by summing over all 2^N outcome
/// patterns.
inline double enumerate_binomial_cdf(double p, int n, int k) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int hits = __builtin_popcount(mask);
    if (hits <= k - 1) {
      total += std::pow(p, hits) * std::pow(1.0 - p, n - hits);
    }
  }
  return total;
}

/// Kolmogorov distance between two samples computed by brute force on the
/// pooled points (quadratic; for small inputs).
inline double brute_force_ks(const std::vector<double>& a, const std::vector<double>& b) {
  auto cdf = [](const std::vector<double>& s, double u) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [u](double x) { return x <= u; })) /
           static_cast<double>(s.size());
  };
  double d = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double u : *s) {
      d = std::max(d, std::fabs(cdf(a, u) - cdf(b, u)));
    }
  }
  return d;
}

}  // namespace oracle
