#pragma once

#include <cstdint>
#include <random>

#include "evtlab/lattice.hpp"

namespace evtlab {

/// Master seed of a reproducible computation.
struct Seed {
  std::uint64_t master = 0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Child seed for stream `index`.
///
/// This is the SplitMix64 output function evaluated at state
/// master + (index + 1) * 0x9E3779B97F4A7C15:
///
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
///
/// The map is a bijection of the state, so distinct indices under one master
/// never collide. All arithmetic is modulo 2^64; results are identical on
/// every platform.
Seed derive_subseed(Seed seed, std::uint64_t index) noexcept;

/// Random stream used by all samplers: std::mt19937_64 (fully specified by
/// the standard) with uniforms formed as (bits >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.master) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// A point of the standard fundamental domain {|x| <= 1/2, x^2 + y^2 >= 1}
/// of SL(2,Z) in the upper half plane, plus a rotation angle.
struct FundamentalDomainPoint {
  double x = 0.0;
  double y = 1.0;
  double theta = 0.0;
};

/// Rejection sampler for dx dy / y^2 on the fundamental domain and theta
/// uniform on [0, 2 pi). `proposals`, when given, is incremented by the
/// number of (x, y) proposals consumed.
FundamentalDomainPoint sample_fundamental_domain(Rng& rng, std::uint64_t* proposals = nullptr);

/// The frame R(theta) * y^{-1/2} [[1, x], [0, y]]; it is Gauss reduced by
/// construction and Delta(frame) = log(y) / 2.
LatticeFrame frame_from_chart(const FundamentalDomainPoint& p);

/// A Haar-distributed point of SL(2,R)/SL(2,Z).
LatticeFrame sample_haar_sl2(Rng& rng);

}  // namespace evtlab
