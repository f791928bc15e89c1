// Precision-generic lattice reduction kernels shared by lattice.cpp and the
// flow propagator. Not installed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "evtlab/errors.hpp"
#include "evtlab/lattice.hpp"

namespace evtlab::detail {

template <unsigned Bits>
using BinFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Bits, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

using Float256 = BinFloat<256>;
using Float1024 = BinFloat<1024>;
using Float4096 = BinFloat<4096>;
using Float16384 = BinFloat<16384>;

enum class Precision { Double, Bits256, Bits1024, Bits4096, Bits16384 };

/// Working precision for reducing `frame`: double while the defect stays
/// below 2^20 and every entry squares without overflow; otherwise enough
/// binary digits to absorb twice the defect plus 128 guard bits.
Precision plan_precision(const LatticeFrame& frame);

template <class F>
decltype(auto) with_precision(Precision p, F&& f) {
  switch (p) {
    case Precision::Double:
      return f(double{});
    case Precision::Bits256:
      return f(Float256{});
    case Precision::Bits1024:
      return f(Float1024{});
    case Precision::Bits4096:
      return f(Float4096{});
    case Precision::Bits16384:
      break;
  }
  return f(Float16384{});
}

/// Row-major square matrix whose columns are lattice vectors.
template <class T>
struct DenseBasis {
  int dim = 0;
  std::vector<T> a;

  DenseBasis() = default;
  explicit DenseBasis(int d) : dim(d), a(static_cast<std::size_t>(d * d), T(0)) {}

  T& operator()(int r, int c) { return a[static_cast<std::size_t>(r * dim + c)]; }
  const T& operator()(int r, int c) const { return a[static_cast<std::size_t>(r * dim + c)]; }

  static DenseBasis identity(int d) {
    DenseBasis out(d);
    for (int i = 0; i < d; ++i) {
      out(i, i) = T(1);
    }
    return out;
  }
};

template <class T>
T round_half_even(const T& x) {
  using std::floor;
  const T f = floor(x);
  const T diff = x - f;
  if (diff > T(0.5)) {
    return f + T(1);
  }
  if (diff < T(0.5)) {
    return f;
  }
  const T half = f / T(2);
  return floor(half) == half ? f : f + T(1);
}

template <class T>
T column_dot(const DenseBasis<T>& b, int i, int j) {
  T s(0);
  for (int r = 0; r < b.dim; ++r) {
    s += b(r, i) * b(r, j);
  }
  return s;
}

/// b_j <- b_j - q * b_i on the basis and, when present, on the transform.
template <class T>
void column_axpy(DenseBasis<T>& b, DenseBasis<T>* u, int j, int i, const T& q) {
  for (int r = 0; r < b.dim; ++r) {
    b(r, j) -= q * b(r, i);
  }
  if (u != nullptr) {
    for (int r = 0; r < u->dim; ++r) {
      (*u)(r, j) -= q * (*u)(r, i);
    }
  }
}

template <class T>
void column_swap(DenseBasis<T>& b, DenseBasis<T>* u, int i, int j) {
  for (int r = 0; r < b.dim; ++r) {
    std::swap(b(r, i), b(r, j));
  }
  if (u != nullptr) {
    for (int r = 0; r < u->dim; ++r) {
      std::swap((*u)(r, i), (*u)(r, j));
    }
  }
}

inline constexpr int kMaxReductionSteps = 1 << 20;

/// Lagrange-Gauss reduction of the two columns of `b`.
template <class T>
void gauss_reduce_inplace(DenseBasis<T>& b, DenseBasis<T>* u) {
  T n1 = column_dot(b, 0, 0);
  T n2 = column_dot(b, 1, 1);
  if (n1 == T(0) || n2 == T(0)) {
    throw DegenerateBasis("gauss_reduce: zero basis vector");
  }
  if (n2 < n1) {
    column_swap(b, u, 0, 1);
    std::swap(n1, n2);
  }
  for (int step = 0; step < kMaxReductionSteps; ++step) {
    const T q = round_half_even(column_dot(b, 0, 1) / n1);
    if (q != T(0)) {
      column_axpy(b, u, 1, 0, q);
      n2 = column_dot(b, 1, 1);
    }
    if (n2 == T(0)) {
      throw DegenerateBasis("gauss_reduce: basis vectors are dependent");
    }
    if (!(n2 < n1)) {
      return;
    }
    column_swap(b, u, 0, 1);
    std::swap(n1, n2);
  }
  throw DegenerateBasis("gauss_reduce: no convergence");
}

/// Gram-Schmidt data of the columns: mu(i, j) for j < i and squared norms of
/// the orthogonalized vectors.
template <class T>
struct GramSchmidt {
  DenseBasis<T> mu;
  std::vector<T> norms;
};

template <class T>
GramSchmidt<T> gram_schmidt(const DenseBasis<T>& b) {
  const int d = b.dim;
  GramSchmidt<T> gs{DenseBasis<T>(d), std::vector<T>(static_cast<std::size_t>(d), T(0))};
  DenseBasis<T> star = b;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      T num(0);
      for (int r = 0; r < d; ++r) {
        num += b(r, i) * star(r, j);
      }
      const T m = num / gs.norms[static_cast<std::size_t>(j)];
      gs.mu(i, j) = m;
      for (int r = 0; r < d; ++r) {
        star(r, i) -= m * star(r, j);
      }
    }
    gs.norms[static_cast<std::size_t>(i)] = column_dot(star, i, i);
    if (!(gs.norms[static_cast<std::size_t>(i)] > T(0))) {
      throw DegenerateBasis("gram_schmidt: basis vectors are dependent");
    }
  }
  return gs;
}

/// Textbook LLL with Gram-Schmidt recomputed after every basis change. Meant
/// for the small dimensions this library works in.
template <class T>
void lll_reduce_inplace(DenseBasis<T>& b, double delta, DenseBasis<T>* u) {
  const int d = b.dim;
  const T lovasz(delta);
  int k = 1;
  for (int step = 0; step < kMaxReductionSteps && k < d; ++step) {
    auto gs = gram_schmidt(b);
    // Size reduction; repeated because very large multipliers may need more
    // than one rounding pass at finite precision.
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (int j = k - 1; j >= 0; --j) {
        const T q = round_half_even(gs.mu(k, j));
        if (q != T(0)) {
          column_axpy(b, u, k, j, q);
          for (int i = 0; i < j; ++i) {
            gs.mu(k, i) -= q * gs.mu(j, i);
          }
          gs.mu(k, j) -= q;
          changed = true;
        }
      }
      if (!changed) {
        break;
      }
      gs = gram_schmidt(b);
    }
    const T mu = gs.mu(k, k - 1);
    const auto nk = gs.norms[static_cast<std::size_t>(k)];
    const auto nk1 = gs.norms[static_cast<std::size_t>(k - 1)];
    if (nk >= (lovasz - mu * mu) * nk1) {
      ++k;
    } else {
      column_swap(b, u, k, k - 1);
      k = std::max(k - 1, 1);
    }
  }
  if (k < d) {
    throw DegenerateBasis("lll_reduce: no convergence");
  }
}

template <class T>
struct ShortestInBasis {
  std::vector<std::int64_t> coeffs;
  T norm2;
};

/// Exhaustive Fincke-Pohst / Schnorr-Euchner style search for the shortest
/// nonzero vector of an (LLL-)reduced basis. The search radius starts at the
/// first basis vector and shrinks with every improvement.
template <class T>
ShortestInBasis<T> enumerate_shortest(const DenseBasis<T>& b) {
  using std::ceil;
  using std::floor;
  using std::sqrt;
  const int d = b.dim;
  const auto gs = gram_schmidt(b);

  ShortestInBasis<T> best{std::vector<std::int64_t>(static_cast<std::size_t>(d), 0), column_dot(b, 0, 0)};
  best.coeffs[0] = 1;
  T radius2 = best.norm2;

  std::vector<std::int64_t> x(static_cast<std::size_t>(d), 0);
  std::vector<T> partial(static_cast<std::size_t>(d + 1), T(0));

  auto exact_norm2 = [&](const std::vector<std::int64_t>& c) {
    T s(0);
    for (int r = 0; r < d; ++r) {
      T row(0);
      for (int j = 0; j < d; ++j) {
        row += b(r, j) * T(c[static_cast<std::size_t>(j)]);
      }
      s += row * row;
    }
    return s;
  };

  auto recurse = [&](auto&& self, int level) -> void {
    T center(0);
    for (int j = level + 1; j < d; ++j) {
      center -= gs.mu(j, level) * T(x[static_cast<std::size_t>(j)]);
    }
    const T& bstar = gs.norms[static_cast<std::size_t>(level)];
    const T room = (radius2 - partial[static_cast<std::size_t>(level + 1)]) / bstar;
    if (room < T(0)) {
      return;
    }
    const T width = sqrt(room);
    const auto lo = static_cast<std::int64_t>(static_cast<double>(ceil(center - width)));
    const auto hi = static_cast<std::int64_t>(static_cast<double>(floor(center + width)));
    for (std::int64_t xi = lo; xi <= hi; ++xi) {
      const T off = T(xi) - center;
      const T rho = partial[static_cast<std::size_t>(level + 1)] + bstar * off * off;
      if (!(rho < radius2)) {
        continue;
      }
      x[static_cast<std::size_t>(level)] = xi;
      if (level > 0) {
        partial[static_cast<std::size_t>(level)] = rho;
        self(self, level - 1);
        continue;
      }
      const bool nonzero = std::any_of(x.begin(), x.end(), [](std::int64_t v) { return v != 0; });
      if (!nonzero) {
        continue;
      }
      const T n2 = exact_norm2(x);
      if (n2 < best.norm2) {
        best.norm2 = n2;
        best.coeffs = x;
        radius2 = n2;
      }
    }
    x[static_cast<std::size_t>(level)] = 0;
  };
  recurse(recurse, d - 1);
  return best;
}

template <class T>
T to_working(const ExtendedScalar& v) {
  using std::exp;
  if (v.is_zero()) {
    return T(0);
  }
  const T mag = exp(T(v.log_mag()));
  return v.sign() < 0 ? T(-mag) : mag;
}

template <class T>
ExtendedScalar from_working(const T& v) {
  using std::abs;
  using std::log;
  if (v == T(0)) {
    return ExtendedScalar();
  }
  return ExtendedScalar::from_log(v < T(0) ? -1 : 1, static_cast<double>(log(abs(v))));
}

template <class T>
DenseBasis<T> to_dense(const LatticeFrame& frame) {
  using std::exp;
  DenseBasis<T> out(frame.dim());
  for (int r = 0; r < frame.dim(); ++r) {
    // One factor per row, so rounding stays row-uniform.
    const T scale = exp(T(frame.row_log_scale(r)));
    for (int c = 0; c < frame.dim(); ++c) {
      out(r, c) = to_working<T>(frame.local(r, c)) * scale;
    }
  }
  return out;
}

template <class T>
std::vector<ExtendedScalar> from_dense(const DenseBasis<T>& b) {
  std::vector<ExtendedScalar> out;
  out.reserve(b.a.size());
  for (const auto& v : b.a) {
    out.push_back(from_working(v));
  }
  return out;
}

template <class T>
BigInt to_bigint(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    if (std::fabs(v) < 9.0e18) {
      return BigInt(static_cast<long long>(v));
    }
    // Exact integer beyond int64 range: go through a binary float.
    return BinFloat<64>(v).template convert_to<BigInt>();
  } else {
    return v.template convert_to<BigInt>();
  }
}

template <class T>
IntMatrix to_int_matrix(const DenseBasis<T>& u) {
  IntMatrix out{u.dim, {}};
  out.entries.reserve(u.a.size());
  for (const auto& v : u.a) {
    out.entries.push_back(to_bigint(round_half_even(v)));
  }
  return out;
}

}  // namespace evtlab::detail
