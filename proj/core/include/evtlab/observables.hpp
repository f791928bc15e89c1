#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evtlab/lattice.hpp"

namespace evtlab {

/// Reference point x0 for the distance observables together with the radius
/// B of the SL(2,Z) search set {gamma : |gamma_ij| <= B}.
class BasePoint {
 public:
  /// Throws DimensionMismatch unless frame0 is 2-d, InvalidArgument if B < 1.
  explicit BasePoint(LatticeFrame frame0 = LatticeFrame::identity(2), int search_bound = 3);

  const LatticeFrame& frame0() const noexcept { return frame0_; }
  int search_bound() const noexcept { return search_bound_; }

  /// Row-major doubles of frame0 and of its inverse.
  const std::array<double, 4>& frame0_doubles() const noexcept { return m0_; }
  const std::array<double, 4>& frame0_inverse() const noexcept { return m0_inv_; }
  /// Every integer matrix with entries in [-B, B] and determinant one.
  const std::vector<std::array<double, 4>>& candidates() const noexcept { return *candidates_; }

  friend bool operator==(const BasePoint& a, const BasePoint& b) {
    return a.frame0_ == b.frame0_ && a.search_bound_ == b.search_bound_;
  }

 private:
  LatticeFrame frame0_;
  int search_bound_;
  std::array<double, 4> m0_{};
  std::array<double, 4> m0_inv_{};
  std::shared_ptr<const std::vector<std::array<double, 4>>> candidates_;
};

/// SL(2,Z) matrices with entries bounded by `bound`, row-major.
std::vector<std::array<double, 4>> bounded_sl2z(int bound);

enum class Observable { ShortestVector, ExcursionDistance, NegLogReturn };

/// "delta", "excursion", "neglog".
std::string to_string(Observable tag);
Observable parse_observable(const std::string& name);

class ObservableKind {
 public:
  /// A base point is required exactly when tag != ShortestVector.
  ObservableKind(Observable tag, std::optional<BasePoint> base);

  static ObservableKind shortest_vector() { return ObservableKind(Observable::ShortestVector, std::nullopt); }
  static ObservableKind excursion(BasePoint base = BasePoint()) {
    return ObservableKind(Observable::ExcursionDistance, std::move(base));
  }
  static ObservableKind neg_log_return(BasePoint base = BasePoint()) {
    return ObservableKind(Observable::NegLogReturn, std::move(base));
  }

  Observable tag() const noexcept { return tag_; }
  const std::optional<BasePoint>& base() const noexcept { return base_; }

 private:
  Observable tag_;
  std::optional<BasePoint> base_;
};

/// Gauss-reduced basis of the lattice with a deterministic choice among
/// equally short vectors: b1 has its first nonzero entry positive and, among
/// shortest vectors, the largest first (then second) coordinate; b2 makes
/// det(b1, b2) > 0 with Gram coefficient in (-1/2, 1/2]. Depends only on the
/// lattice, not on the basis given.
LatticeFrame canonical_representative(const LatticeFrame& frame);

/// d_S(x, x0) = min over gamma of ||(log s1, log s2)||_2, s_i the singular
/// values of frame0^{-1} g gamma with g the canonical representative.
double excursion_distance(const LatticeFrame& frame, const BasePoint& base);

/// -log d_A(x, x0), d_A = min over gamma of ||g gamma - frame0||_F.
/// Throws InfiniteValue when d_A < 1e-14.
double neg_log_return(const LatticeFrame& frame, const BasePoint& base);

/// The quotient distance d_A itself.
double ambient_return_distance(const LatticeFrame& frame, const BasePoint& base);

double evaluate(const ObservableKind& kind, const LatticeFrame& frame);

}  // namespace evtlab
