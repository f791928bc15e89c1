#include "evtlab/haar.hpp"

#include <cmath>
#include <numbers>

namespace evtlab {

Seed derive_subseed(Seed seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed.master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return Seed{z ^ (z >> 31)};
}

FundamentalDomainPoint sample_fundamental_domain(Rng& rng, std::uint64_t* proposals) {
  constexpr double y_min = std::numbers::sqrt3 / 2.0;
  FundamentalDomainPoint p;
  for (;;) {
    const double x = rng.uniform01() - 0.5;
    // Inverse CDF of the density proportional to y^-2 on [sqrt(3)/2, inf).
    const double y = y_min / (1.0 - rng.uniform01());
    if (proposals != nullptr) {
      ++*proposals;
    }
    if (x * x + y * y >= 1.0) {
      p.x = x;
      p.y = y;
      break;
    }
  }
  p.theta = 2.0 * std::numbers::pi * rng.uniform01();
  return p;
}

LatticeFrame frame_from_chart(const FundamentalDomainPoint& p) {
  const double s = 1.0 / std::sqrt(p.y);
  const double c = std::cos(p.theta);
  const double n = std::sin(p.theta);
  // R(theta) * s * [[1, x], [0, y]]
  const double m[4] = {c * s, (c * p.x - n * p.y) * s, n * s, (n * p.x + c * p.y) * s};
  return LatticeFrame::from_doubles(2, m);
}

LatticeFrame sample_haar_sl2(Rng& rng) { return frame_from_chart(sample_fundamental_domain(rng)); }

}  // namespace evtlab
