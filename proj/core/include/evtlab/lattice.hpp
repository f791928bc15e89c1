#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "evtlab/extended_scalar.hpp"

namespace evtlab {

using BigInt = boost::multiprecision::cpp_int;

/// Tolerance on |log|det|| for a frame to count as unimodular.
inline constexpr double kUnimodularTolerance = 1e-9;

/// A d x d basis of a unimodular lattice in R^d, i.e. a point of
/// SL(d,R)/SL(d,Z). Columns are the basis vectors. Entry (r, c) is
/// local(r, c) * e^{row_log_scale(r)}: a diagonal flow only moves the row
/// scales, so composing flows never perturbs individual entries and the
/// reducers see exactly the lattice that was asked for.
class LatticeFrame {
 public:
  /// Throws InvalidFrame on a shape error or |log|det|| > 1e-9, and
  /// DegenerateBasis when the Gram determinant's log is below -60. An empty
  /// `row_log_scale` means all zeros.
  LatticeFrame(int dim, std::vector<ExtendedScalar> row_major, std::vector<double> row_log_scale = {});

  static LatticeFrame identity(int dim);
  static LatticeFrame from_doubles(int dim, std::span<const double> row_major);

  int dim() const noexcept { return dim_; }
  /// Entry with its row scale folded in (one rounding).
  ExtendedScalar at(int row, int col) const;
  /// All entries, row-major, row scales folded in.
  std::vector<ExtendedScalar> entries() const;

  const ExtendedScalar& local(int row, int col) const { return local_[static_cast<std::size_t>(row * dim_ + col)]; }
  double row_log_scale(int row) const { return row_log_scale_[static_cast<std::size_t>(row)]; }
  const std::vector<double>& row_log_scales() const noexcept { return row_log_scale_; }
  std::span<const ExtendedScalar> local_entries() const noexcept { return local_; }

  /// Row-major doubles; entries outside double range saturate to inf / 0.
  std::vector<double> to_doubles() const;

  double log_abs_det() const { return log_abs_det_; }

  friend bool operator==(const LatticeFrame&, const LatticeFrame&) = default;

 private:
  int dim_;
  std::vector<ExtendedScalar> local_;
  std::vector<double> row_log_scale_;
  double log_abs_det_ = 0.0;
};

/// log|det| of a row-major square ExtendedScalar matrix (partial-pivot LU).
double log_abs_det(int dim, std::span<const ExtendedScalar> row_major);

/// Row-major d x d integer matrix.
struct IntMatrix {
  int dim = 0;
  std::vector<BigInt> entries;

  const BigInt& at(int row, int col) const { return entries[static_cast<std::size_t>(row * dim + col)]; }
  BigInt determinant() const;
};

struct ReducedBasis {
  LatticeFrame frame;
  /// Integer matrix U with reduced = input * U; det U = +-1.
  IntMatrix transform;
};

struct ShortestVectorResult {
  /// log of the first successive minimum.
  double log_norm = 0.0;
  /// Coordinates of a shortest vector with respect to the input basis.
  std::vector<BigInt> coeffs;
};

/// Lagrange-Gauss reduction of a 2-d frame: ||b1|| <= ||b2|| and
/// |<b1,b2>| <= ||b1||^2 / 2, so b1 attains lambda_1.
LatticeFrame gauss_reduce(const LatticeFrame& frame);
ReducedBasis gauss_reduce_with_transform(const LatticeFrame& frame);

/// LLL reduction with Lovasz parameter delta in (1/4, 1).
LatticeFrame lll_reduce(const LatticeFrame& frame, double delta = 0.99);
ReducedBasis lll_reduce_with_transform(const LatticeFrame& frame, double delta = 0.99);

/// Exact first minimum: reduce, then enumerate the Fincke-Pohst box of the
/// reduced basis. Working precision is chosen from the orthogonality defect
/// of the input, so heavily sheared frames are handled exactly.
ShortestVectorResult shortest_vector(const LatticeFrame& frame);

/// Delta(L) = max over nonzero v in L of log(1/||v||) = -log lambda_1.
double delta_observable(const LatticeFrame& frame);

/// log2 of the orthogonality defect prod ||b_i|| / |det B|; always >= 0 up to
/// rounding. Drives the precision choice of the reducers.
double log2_orthogonality_defect(const LatticeFrame& frame);

/// {"dim": d, "basis": [[sign, log_mag], ...]} row-major. On input each basis
/// entry may also be a plain number.
std::string frame_to_json(const LatticeFrame& frame);
LatticeFrame frame_from_json(std::string_view text);

}  // namespace evtlab
