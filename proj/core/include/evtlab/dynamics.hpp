#pragma once

#include <string>
#include <vector>

#include "evtlab/lattice.hpp"

namespace evtlab {

/// Exponents (w_1..w_d) of the diagonal one-parameter subgroup
/// a_t = diag(e^{t w_1}, ..., e^{t w_d}); they must sum to zero.
class FlowSpec {
 public:
  /// Throws InvalidFlow if fewer than two exponents, a non-finite exponent,
  /// or |sum| > 1e-12.
  explicit FlowSpec(std::vector<double> exponents);

  /// (1/2, -1/2): the geodesic flow normalization on SL(2,R).
  static FlowSpec geodesic();

  int dim() const noexcept { return static_cast<int>(exponents_.size()); }
  const std::vector<double>& exponents() const noexcept { return exponents_; }

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;

 private:
  std::vector<double> exponents_;
};

/// Comma separated exponents, e.g. "0.5,-0.5".
FlowSpec parse_flow(const std::string& text);
std::string format_flow(const FlowSpec& flow);
std::string flow_to_json(const FlowSpec& flow);
FlowSpec flow_from_json(const std::string& text);

/// Exponents r with Ad(a_t) zeta_r = e^{r t} zeta_r on sl(d,R).
struct AdjointSpectrum {
  /// w_i - w_j for i != j, plus dim-1 zeros; sorted ascending.
  std::vector<double> eigen_exponents;
  double gamma = 0.0;
  bool partially_hyperbolic = false;
};

AdjointSpectrum adjoint_spectrum(const FlowSpec& flow);

/// a_t applied to the lattice: row i scaled by e^{t w_i}, then the basis
/// rescaled by |det|^{-1/d}. Only the frame's row scales change, so
/// apply_flow(apply_flow(x, t), s) and apply_flow(x, t + s) differ by a
/// diagonal factor within rounding of the identity. No reduction happens;
/// the returned basis may be extremely sheared.
LatticeFrame apply_flow(const LatticeFrame& frame, const FlowSpec& flow, double t);

/// Pushes a lattice along the flow while keeping a reduced basis.
///
/// The flow is applied in chunks short enough that the basis never shears by
/// more than e^4 between reductions; after each chunk the basis is Gauss
/// (d = 2) or LLL reduced and its determinant renormalized. Because the
/// flow expands round-off by e^{gamma t}, the result for large t is a
/// pseudo-orbit: a faithful sample path of the dynamics, but not the exact
/// image of the starting basis's floating-point digits.
class FlowPropagator {
 public:
  FlowPropagator(const LatticeFrame& start, const FlowSpec& flow);

  /// Advances by dt >= 0.
  void advance(double dt);
  double time() const noexcept { return time_; }

  /// The current (reduced) basis.
  LatticeFrame frame() const;

 private:
  void advance_chunk(double dt);
  void reduce_double();
  bool double_state_in_range() const;

  FlowSpec flow_;
  int dim_;
  double max_chunk_;
  double time_ = 0.0;
  bool use_double_ = true;
  std::vector<double> basis_;        // row-major, valid while use_double_
  std::vector<ExtendedScalar> wide_;  // used once the basis leaves double range
};

}  // namespace evtlab
