#include "evtlab/lattice.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "evtlab/errors.hpp"
#include "reduction.hpp"

namespace evtlab {

namespace {

constexpr double kDegenerateLogGram = -60.0;
// |log| of any nonzero entry above which plain doubles could overflow when
// forming inner products.
constexpr double kDoubleSafeLog = 300.0;
constexpr double kDoubleMaxDefectBits = 20.0;
constexpr double kGuardBits = 128.0;

double log_column_norm(const LatticeFrame& frame, int col) {
  double hi = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < frame.dim(); ++r) {
    const auto e = frame.at(r, col);
    if (!e.is_zero()) {
      hi = std::max(hi, e.log_mag());
    }
  }
  if (std::isinf(hi)) {
    return hi;
  }
  double s = 0.0;
  for (int r = 0; r < frame.dim(); ++r) {
    const auto e = frame.at(r, col);
    if (!e.is_zero()) {
      s += std::exp(2.0 * (e.log_mag() - hi));
    }
  }
  return hi + 0.5 * std::log(s);
}

template <class T>
ReducedBasis finish_reduction(const detail::DenseBasis<T>& b, const detail::DenseBasis<T>& u) {
  return ReducedBasis{LatticeFrame(b.dim, detail::from_dense(b)), detail::to_int_matrix(u)};
}

void require_dim2(const LatticeFrame& frame, const char* who) {
  if (frame.dim() != 2) {
    throw DimensionMismatch(std::string(who) + ": requires dim = 2");
  }
}

void require_lovasz(double delta) {
  if (!(delta > 0.25 && delta < 1.0)) {
    throw DomainError("lll_reduce: delta must lie in (1/4, 1)");
  }
}

}  // namespace

double log_abs_det(int dim, std::span<const ExtendedScalar> row_major) {
  std::vector<ExtendedScalar> m(row_major.begin(), row_major.end());
  auto at = [&](int r, int c) -> ExtendedScalar& { return m[static_cast<std::size_t>(r * dim + c)]; };
  double log_det = 0.0;
  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < dim; ++r) {
      if (abs(at(r, col)) > abs(at(pivot, col))) {
        pivot = r;
      }
    }
    if (at(pivot, col).is_zero()) {
      return -std::numeric_limits<double>::infinity();
    }
    if (pivot != col) {
      for (int c = 0; c < dim; ++c) {
        std::swap(at(pivot, c), at(col, c));
      }
    }
    const ExtendedScalar p = at(col, col);
    log_det += p.log_mag();
    for (int r = col + 1; r < dim; ++r) {
      if (at(r, col).is_zero()) {
        continue;
      }
      const ExtendedScalar factor = at(r, col) / p;
      for (int c = col + 1; c < dim; ++c) {
        at(r, c) -= factor * at(col, c);
      }
    }
  }
  return log_det;
}

LatticeFrame::LatticeFrame(int dim, std::vector<ExtendedScalar> row_major, std::vector<double> row_log_scale)
    : dim_(dim), local_(std::move(row_major)), row_log_scale_(std::move(row_log_scale)) {
  if (dim_ < 2) {
    throw InvalidFrame("LatticeFrame: dim must be >= 2");
  }
  if (local_.size() != static_cast<std::size_t>(dim_ * dim_)) {
    throw InvalidFrame("LatticeFrame: expected dim*dim entries");
  }
  if (row_log_scale_.empty()) {
    row_log_scale_.assign(static_cast<std::size_t>(dim_), 0.0);
  }
  if (row_log_scale_.size() != static_cast<std::size_t>(dim_)) {
    throw InvalidFrame("LatticeFrame: expected one log scale per row");
  }
  double shift = 0.0;
  for (double r : row_log_scale_) {
    if (!std::isfinite(r)) {
      throw InvalidFrame("LatticeFrame: non-finite row scale");
    }
    shift += r;
  }
  log_abs_det_ = evtlab::log_abs_det(dim_, local_) + shift;
  if (2.0 * log_abs_det_ < kDegenerateLogGram) {
    throw DegenerateBasis("LatticeFrame: Gram determinant below tolerance");
  }
  if (!(std::fabs(log_abs_det_) <= kUnimodularTolerance)) {
    throw InvalidFrame("LatticeFrame: basis is not unimodular (log|det| = " + std::to_string(log_abs_det_) + ")");
  }
}

ExtendedScalar LatticeFrame::at(int row, int col) const { return local(row, col).scaled_by_exp(row_log_scale(row)); }

std::vector<ExtendedScalar> LatticeFrame::entries() const {
  std::vector<ExtendedScalar> out;
  out.reserve(local_.size());
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      out.push_back(at(r, c));
    }
  }
  return out;
}

LatticeFrame LatticeFrame::identity(int dim) {
  if (dim < 2) {
    throw InvalidFrame("LatticeFrame: dim must be >= 2");
  }
  std::vector<ExtendedScalar> e(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i) {
    e[static_cast<std::size_t>(i * dim + i)] = ExtendedScalar(1.0);
  }
  return LatticeFrame(dim, std::move(e));
}

LatticeFrame LatticeFrame::from_doubles(int dim, std::span<const double> row_major) {
  std::vector<ExtendedScalar> e;
  e.reserve(row_major.size());
  for (double v : row_major) {
    if (!std::isfinite(v)) {
      throw InvalidFrame("LatticeFrame: non-finite entry");
    }
    e.emplace_back(v);
  }
  return LatticeFrame(dim, std::move(e));
}

std::vector<double> LatticeFrame::to_doubles() const {
  std::vector<double> out;
  out.reserve(local_.size());
  for (const auto& e : entries()) {
    out.push_back(e.to_double());
  }
  return out;
}

BigInt IntMatrix::determinant() const {
  // Bareiss fraction-free elimination keeps every intermediate integral.
  std::vector<BigInt> m = entries;
  auto at = [&](int r, int c) -> BigInt& { return m[static_cast<std::size_t>(r * dim + c)]; };
  BigInt sign = 1;
  BigInt prev = 1;
  for (int k = 0; k < dim - 1; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < dim; ++r) {
        if (at(r, k) != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) {
        return 0;
      }
      for (int c = 0; c < dim; ++c) {
        std::swap(at(k, c), at(swap_row, c));
      }
      sign = -sign;
    }
    for (int i = k + 1; i < dim; ++i) {
      for (int j = k + 1; j < dim; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(dim - 1, dim - 1);
}

double log2_orthogonality_defect(const LatticeFrame& frame) {
  double log_prod = 0.0;
  for (int c = 0; c < frame.dim(); ++c) {
    log_prod += log_column_norm(frame, c);
  }
  return (log_prod - frame.log_abs_det()) / std::numbers::ln2;
}

namespace detail {

Precision plan_precision(const LatticeFrame& frame) {
  const double defect_bits = std::max(0.0, log2_orthogonality_defect(frame));
  bool in_range = true;
  for (const auto& e : frame.entries()) {
    if (!e.is_zero() && std::fabs(e.log_mag()) > kDoubleSafeLog) {
      in_range = false;
      break;
    }
  }
  if (in_range && defect_bits <= kDoubleMaxDefectBits) {
    return Precision::Double;
  }
  const double bits = 2.0 * defect_bits + kGuardBits;
  if (bits <= 256) {
    return Precision::Bits256;
  }
  if (bits <= 1024) {
    return Precision::Bits1024;
  }
  if (bits <= 4096) {
    return Precision::Bits4096;
  }
  if (bits <= 16384) {
    return Precision::Bits16384;
  }
  throw NumericError("lattice basis too skewed for the supported working precision");
}

}  // namespace detail

ReducedBasis gauss_reduce_with_transform(const LatticeFrame& frame) {
  require_dim2(frame, "gauss_reduce");
  return detail::with_precision(detail::plan_precision(frame), [&]<class T>(T) {
    auto b = detail::to_dense<T>(frame);
    auto u = detail::DenseBasis<T>::identity(2);
    detail::gauss_reduce_inplace(b, &u);
    return finish_reduction(b, u);
  });
}

LatticeFrame gauss_reduce(const LatticeFrame& frame) {
  require_dim2(frame, "gauss_reduce");
  return detail::with_precision(detail::plan_precision(frame), [&]<class T>(T) {
    auto b = detail::to_dense<T>(frame);
    detail::gauss_reduce_inplace<T>(b, nullptr);
    return LatticeFrame(2, detail::from_dense(b));
  });
}

ReducedBasis lll_reduce_with_transform(const LatticeFrame& frame, double delta) {
  require_lovasz(delta);
  return detail::with_precision(detail::plan_precision(frame), [&]<class T>(T) {
    auto b = detail::to_dense<T>(frame);
    auto u = detail::DenseBasis<T>::identity(frame.dim());
    detail::lll_reduce_inplace(b, delta, &u);
    return finish_reduction(b, u);
  });
}

LatticeFrame lll_reduce(const LatticeFrame& frame, double delta) {
  return lll_reduce_with_transform(frame, delta).frame;
}

ShortestVectorResult shortest_vector(const LatticeFrame& frame) {
  return detail::with_precision(detail::plan_precision(frame), [&]<class T>(T) {
    using std::log;
    const int d = frame.dim();
    auto b = detail::to_dense<T>(frame);
    auto u = detail::DenseBasis<T>::identity(d);
    if (d == 2) {
      detail::gauss_reduce_inplace(b, &u);
    } else {
      detail::lll_reduce_inplace(b, 0.99, &u);
    }
    auto best = detail::enumerate_shortest(b);
    ShortestVectorResult out;
    out.log_norm = static_cast<double>(log(best.norm2)) / 2.0;
    out.coeffs.reserve(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) {
      T s(0);
      for (int j = 0; j < d; ++j) {
        s += u(r, j) * T(best.coeffs[static_cast<std::size_t>(j)]);
      }
      out.coeffs.push_back(detail::to_bigint(detail::round_half_even(s)));
    }
    return out;
  });
}

double delta_observable(const LatticeFrame& frame) {
  return detail::with_precision(detail::plan_precision(frame), [&]<class T>(T) {
    using std::log;
    auto b = detail::to_dense<T>(frame);
    T norm2;
    if (frame.dim() == 2) {
      detail::gauss_reduce_inplace<T>(b, nullptr);
      norm2 = detail::column_dot(b, 0, 0);
    } else {
      detail::lll_reduce_inplace<T>(b, 0.99, nullptr);
      norm2 = detail::enumerate_shortest(b).norm2;
    }
    return -static_cast<double>(log(norm2)) / 2.0;
  });
}

std::string frame_to_json(const LatticeFrame& frame) {
  nlohmann::ordered_json j;
  j["dim"] = frame.dim();
  auto basis = nlohmann::ordered_json::array();
  for (const auto& e : frame.entries()) {
    basis.push_back({e.sign(), e.is_zero() ? 0.0 : e.log_mag()});
  }
  j["basis"] = std::move(basis);
  return j.dump();
}

LatticeFrame frame_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFrame(std::string("frame JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("basis")) {
    throw InvalidFrame("frame JSON: expected keys \"dim\" and \"basis\"");
  }
  const int dim = j.at("dim").get<int>();
  const auto& basis = j.at("basis");
  if (!basis.is_array()) {
    throw InvalidFrame("frame JSON: \"basis\" must be an array");
  }
  std::vector<ExtendedScalar> entries;
  for (const auto& item : basis) {
    if (item.is_number()) {
      entries.emplace_back(item.get<double>());
    } else if (item.is_array() && item.size() == 2 && item[0].is_number_integer() && item[1].is_number()) {
      entries.push_back(ExtendedScalar::from_log(item[0].get<int>(), item[1].get<double>()));
    } else {
      throw InvalidFrame("frame JSON: basis entries must be numbers or [sign, log_mag] pairs");
    }
  }
  return LatticeFrame(dim, std::move(entries));
}

}  // namespace evtlab
