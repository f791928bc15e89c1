#include "evtlab/observables.hpp"

#include <cmath>
#include <limits>

#include "evtlab/errors.hpp"

namespace evtlab {

namespace {

using Mat2 = std::array<double, 4>;

constexpr double kReturnFloor = 1e-14;
constexpr double kTieTolerance = 1e-9;

Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Mat2 canonical_doubles(const LatticeFrame& frame) {
  if (frame.dim() != 2) {
    throw DimensionMismatch("canonical_representative: requires dim = 2");
  }
  const auto r = gauss_reduce(frame).to_doubles();
  for (double v : r) {
    if (!std::isfinite(v)) {
      throw NumericError("canonical_representative: reduced basis outside double range");
    }
  }
  struct Vec {
    double x, y;
  };
  auto dot = [](Vec a, Vec b) { return a.x * b.x + a.y * b.y; };
  const Vec r1{r[0], r[2]};
  const Vec r2{r[1], r[3]};
  const double n1 = dot(r1, r1);
  const double tie = n1 * (1.0 + kTieTolerance);

  struct Candidate {
    Vec b1, partner;
  };
  std::vector<Candidate> cands{{r1, r2}};
  if (dot(r2, r2) <= tie) {
    cands.push_back({r2, r1});
  }
  for (double s : {1.0, -1.0}) {
    const Vec v{r2.x + s * r1.x, r2.y + s * r1.y};
    if (dot(v, v) <= tie) {
      cands.push_back({v, r1});
    }
  }
  for (auto& c : cands) {
    if (c.b1.x < 0.0 || (c.b1.x == 0.0 && c.b1.y < 0.0)) {
      c.b1 = {-c.b1.x, -c.b1.y};
    }
  }
  const double scale = std::sqrt(n1);
  const Candidate* best = &cands.front();
  for (const auto& c : cands) {
    const double dx = c.b1.x - best->b1.x;
    if (dx > kTieTolerance * scale || (std::fabs(dx) <= kTieTolerance * scale && c.b1.y > best->b1.y)) {
      best = &c;
    }
  }
  const Vec b1 = best->b1;
  Vec b2 = best->partner;
  if (b1.x * b2.y - b1.y * b2.x < 0.0) {
    b2 = {-b2.x, -b2.y};
  }
  // Shear into (-1/2, 1/2]; near-half values snap to +1/2 so rounding noise cannot flip the choice.
  const double m = std::ceil(dot(b1, b2) / dot(b1, b1) - 0.5 - kTieTolerance);
  if (m != 0.0) {
    b2 = {b2.x - m * b1.x, b2.y - m * b1.y};
  }
  return {b1.x, b2.x, b1.y, b2.y};
}

}  // namespace

std::vector<std::array<double, 4>> bounded_sl2z(int bound) {
  std::vector<std::array<double, 4>> out;
  for (int a = -bound; a <= bound; ++a) {
    for (int b = -bound; b <= bound; ++b) {
      for (int c = -bound; c <= bound; ++c) {
        for (int d = -bound; d <= bound; ++d) {
          if (a * d - b * c == 1) {
            out.push_back({double(a), double(b), double(c), double(d)});
          }
        }
      }
    }
  }
  return out;
}

BasePoint::BasePoint(LatticeFrame frame0, int search_bound)
    : frame0_(std::move(frame0)), search_bound_(search_bound) {
  if (frame0_.dim() != 2) {
    throw DimensionMismatch("BasePoint: frame0 must be 2-d");
  }
  if (search_bound_ < 1) {
    throw InvalidArgument("BasePoint: search bound must be >= 1");
  }
  const auto v = frame0_.to_doubles();
  m0_ = {v[0], v[1], v[2], v[3]};
  const double det = v[0] * v[3] - v[1] * v[2];
  m0_inv_ = {v[3] / det, -v[1] / det, -v[2] / det, v[0] / det};
  candidates_ = std::make_shared<const std::vector<std::array<double, 4>>>(bounded_sl2z(search_bound_));
}

std::string to_string(Observable tag) {
  switch (tag) {
    case Observable::ShortestVector:
      return "delta";
    case Observable::ExcursionDistance:
      return "excursion";
    case Observable::NegLogReturn:
      return "neglog";
  }
  return "delta";
}

Observable parse_observable(const std::string& name) {
  if (name == "delta") {
    return Observable::ShortestVector;
  }
  if (name == "excursion") {
    return Observable::ExcursionDistance;
  }
  if (name == "neglog") {
    return Observable::NegLogReturn;
  }
  throw InvalidArgument("unknown observable \"" + name + "\" (expected delta, excursion or neglog)");
}

ObservableKind::ObservableKind(Observable tag, std::optional<BasePoint> base) : tag_(tag), base_(std::move(base)) {
  if ((tag_ == Observable::ShortestVector) == base_.has_value()) {
    throw InvalidArgument("ObservableKind: a base point is required exactly for the distance observables");
  }
}

LatticeFrame canonical_representative(const LatticeFrame& frame) {
  const Mat2 g = canonical_doubles(frame);
  return LatticeFrame::from_doubles(2, g);
}

double excursion_distance(const LatticeFrame& frame, const BasePoint& base) {
  const Mat2 h = mul(base.frame0_inverse(), canonical_doubles(frame));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& gamma : base.candidates()) {
    const Mat2 m = mul(h, gamma);
    const double s = m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3];
    best = std::min(best, s);
  }
  // Singular values satisfy s1^2 + s2^2 = s and s1 s2 = |det|.
  const double det = std::fabs(h[0] * h[3] - h[1] * h[2]);
  const double disc = std::sqrt(std::max(0.0, best * best - 4.0 * det * det));
  const double s1_sq = 0.5 * (best + disc);
  const double s2_sq = det * det / s1_sq;
  return std::hypot(0.5 * std::log(s1_sq), 0.5 * std::log(s2_sq));
}

double ambient_return_distance(const LatticeFrame& frame, const BasePoint& base) {
  const Mat2 g = canonical_doubles(frame);
  const Mat2& x0 = base.frame0_doubles();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& gamma : base.candidates()) {
    const Mat2 m = mul(g, gamma);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double diff = m[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)];
      s += diff * diff;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

double neg_log_return(const LatticeFrame& frame, const BasePoint& base) {
  const double d = ambient_return_distance(frame, base);
  if (d < kReturnFloor) {
    throw InfiniteValue("neg_log_return: frame coincides with the base point");
  }
  return -std::log(d);
}

double evaluate(const ObservableKind& kind, const LatticeFrame& frame) {
  switch (kind.tag()) {
    case Observable::ShortestVector:
      return delta_observable(frame);
    case Observable::ExcursionDistance:
      return excursion_distance(frame, *kind.base());
    case Observable::NegLogReturn:
      return neg_log_return(frame, *kind.base());
  }
  return delta_observable(frame);
}

}  // namespace evtlab
