#include "evtlab/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "evtlab/errors.hpp"
#include "reduction.hpp"

namespace evtlab {

namespace {

constexpr double kSumTolerance = 1e-12;
// Largest shear e^{gamma h} allowed between two reductions of a propagated basis.
constexpr double kMaxChunkShear = 4.0;
constexpr double kDoubleStateLog = 300.0;

void renormalize_double(std::vector<double>& m, int dim) {
  double scale;
  if (dim == 2) {
    scale = std::sqrt(std::fabs(m[0] * m[3] - m[1] * m[2]));
  } else {
    std::vector<ExtendedScalar> e(m.begin(), m.end());
    scale = std::exp(log_abs_det(dim, e) / dim);
  }
  for (double& v : m) {
    v /= scale;
  }
}

}  // namespace

FlowSpec::FlowSpec(std::vector<double> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.size() < 2) {
    throw InvalidFlow("flow needs at least two exponents");
  }
  double sum = 0.0;
  for (double w : exponents_) {
    if (!std::isfinite(w)) {
      throw InvalidFlow("flow exponents must be finite");
    }
    sum += w;
  }
  if (std::fabs(sum) > kSumTolerance) {
    throw InvalidFlow("flow exponents must sum to zero (sum = " + std::to_string(sum) + ")");
  }
}

FlowSpec FlowSpec::geodesic() { return FlowSpec({0.5, -0.5}); }

FlowSpec parse_flow(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw InvalidFlow("empty exponent in flow list \"" + text + "\"");
    }
    const std::string token = item.substr(first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw InvalidFlow("cannot parse flow exponent \"" + token + "\"");
    }
    w.push_back(v);
  }
  return FlowSpec(std::move(w));
}

std::string format_flow(const FlowSpec& flow) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < flow.exponents().size(); ++i) {
    const auto res = std::to_chars(buf, buf + sizeof buf, flow.exponents()[i]);
    if (i > 0) {
      out += ',';
    }
    out.append(buf, res.ptr);
  }
  return out;
}

std::string flow_to_json(const FlowSpec& flow) {
  nlohmann::ordered_json j;
  j["exponents"] = flow.exponents();
  return j.dump();
}

FlowSpec flow_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return FlowSpec(j.at("exponents").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidFlow(std::string("flow JSON: ") + e.what());
  }
}

AdjointSpectrum adjoint_spectrum(const FlowSpec& flow) {
  const auto& w = flow.exponents();
  const int d = flow.dim();
  AdjointSpectrum out;
  out.eigen_exponents.reserve(static_cast<std::size_t>(d * d - 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j) {
        out.eigen_exponents.push_back(w[static_cast<std::size_t>(i)] - w[static_cast<std::size_t>(j)]);
      }
    }
  }
  // Cartan directions: trace-zero diagonal matrices commute with a_t.
  for (int i = 0; i + 1 < d; ++i) {
    out.eigen_exponents.push_back(0.0);
  }
  std::sort(out.eigen_exponents.begin(), out.eigen_exponents.end());
  out.gamma = out.eigen_exponents.back();
  out.partially_hyperbolic =
      std::any_of(out.eigen_exponents.begin(), out.eigen_exponents.end(), [](double r) { return r != 0.0; });
  return out;
}

LatticeFrame apply_flow(const LatticeFrame& frame, const FlowSpec& flow, double t) {
  const int d = frame.dim();
  if (flow.dim() != d) {
    throw DimensionMismatch("apply_flow: flow dim " + std::to_string(flow.dim()) + " vs frame dim " +
                            std::to_string(d));
  }
  std::vector<double> scale = frame.row_log_scales();
  for (int r = 0; r < d; ++r) {
    scale[static_cast<std::size_t>(r)] += t * flow.exponents()[static_cast<std::size_t>(r)];
  }
  // Only the determinant drift from rounding the shifts is left to remove.
  double drift = frame.log_abs_det();
  for (int r = 0; r < d; ++r) {
    drift += scale[static_cast<std::size_t>(r)] - frame.row_log_scale(r);
  }
  for (double& v : scale) {
    v -= drift / d;
  }
  const auto local = frame.local_entries();
  return LatticeFrame(d, std::vector<ExtendedScalar>(local.begin(), local.end()), std::move(scale));
}

FlowPropagator::FlowPropagator(const LatticeFrame& start, const FlowSpec& flow)
    : flow_(flow), dim_(start.dim()) {
  if (flow.dim() != dim_) {
    throw DimensionMismatch("FlowPropagator: flow and frame dimensions differ");
  }
  const double gamma = adjoint_spectrum(flow).gamma;
  max_chunk_ = gamma > 0.0 ? kMaxChunkShear / gamma : std::numeric_limits<double>::infinity();

  const LatticeFrame reduced = dim_ == 2 ? gauss_reduce(start) : lll_reduce(start);
  wide_ = reduced.entries();
  use_double_ = std::all_of(wide_.begin(), wide_.end(), [](const ExtendedScalar& e) {
    return e.is_zero() || std::fabs(e.log_mag()) <= kDoubleStateLog;
  });
  if (use_double_) {
    basis_ = reduced.to_doubles();
  }
}

bool FlowPropagator::double_state_in_range() const {
  static const double hi = std::exp(kDoubleStateLog);
  static const double lo = std::exp(-kDoubleStateLog);
  return std::all_of(basis_.begin(), basis_.end(), [](double v) {
    const double a = std::fabs(v);
    return a == 0.0 || (a <= hi && a >= lo);
  });
}

void FlowPropagator::advance(double dt) {
  if (!(dt >= 0.0)) {
    throw DomainError("FlowPropagator::advance: dt must be >= 0");
  }
  while (dt > 0.0) {
    const double h = std::min(dt, max_chunk_);
    advance_chunk(h);
    dt -= h;
    time_ += h;
  }
}

void FlowPropagator::reduce_double() {
  detail::DenseBasis<double> b;
  b.dim = dim_;
  b.a = std::move(basis_);
  if (dim_ == 2) {
    detail::gauss_reduce_inplace<double>(b, nullptr);
  } else {
    detail::lll_reduce_inplace<double>(b, 0.99, nullptr);
  }
  basis_ = std::move(b.a);
}

void FlowPropagator::advance_chunk(double h) {
  const auto& w = flow_.exponents();
  if (use_double_) {
    for (int r = 0; r < dim_; ++r) {
      const double f = std::exp(h * w[static_cast<std::size_t>(r)]);
      for (int c = 0; c < dim_; ++c) {
        basis_[static_cast<std::size_t>(r * dim_ + c)] *= f;
      }
    }
    reduce_double();
    renormalize_double(basis_, dim_);
    if (!double_state_in_range()) {
      wide_.clear();
      for (double v : basis_) {
        wide_.emplace_back(v);
      }
      use_double_ = false;
    }
    return;
  }
  LatticeFrame next = apply_flow(LatticeFrame(dim_, wide_), flow_, h);
  next = dim_ == 2 ? gauss_reduce(next) : lll_reduce(next);
  wide_ = next.entries();
}

LatticeFrame FlowPropagator::frame() const {
  if (use_double_) {
    return LatticeFrame::from_doubles(dim_, basis_);
  }
  return LatticeFrame(dim_, wide_);
}

}  // namespace evtlab
