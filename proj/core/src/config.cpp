#include "evtlab/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "evtlab/errors.hpp"

namespace evtlab {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key, "cannot parse \"" + value + "\"");
  }
  return out;
}

std::optional<double> parse_optional(const std::string& key, const std::string& value) {
  if (value == "auto") {
    return std::nullopt;
  }
  return parse_number<double>(key, value);
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt(*v) : "auto"; }

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(std::string("cannot open ") + what + " \"" + path + "\"");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Tail:
      return "tail";
    case Experiment::Evd:
      return "evd";
    case Experiment::Kth:
      return "kth";
    case Experiment::Returns:
      return "returns";
    case Experiment::Excursion:
      return "excursion";
    case Experiment::CheckConditions:
      break;
  }
  return "check-conditions";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::Tail, Experiment::Evd, Experiment::Kth, Experiment::Returns, Experiment::Excursion,
                 Experiment::CheckConditions}) {
    if (to_string(e) == name) {
      return e;
    }
  }
  throw ConfigError("experiment", "unknown experiment \"" + name + "\"");
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "experiment") {
      c.experiment = parse_experiment(value);
    } else if (key == "dim") {
      c.dim = parse_number<int>(key, value);
    } else if (key == "flow") {
      c.flow = parse_flow(value);
    } else if (key == "observable") {
      c.observable = parse_observable(value);
    } else if (key == "m0") {
      c.m0 = parse_number<double>(key, value);
    } else if (key == "q") {
      c.q = parse_number<double>(key, value);
    } else if (key == "n") {
      c.n = parse_number<int>(key, value);
    } else if (key == "k") {
      c.k = parse_number<int>(key, value);
    } else if (key == "v") {
      c.v = parse_optional(key, value);
    } else if (key == "samples") {
      c.samples = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "base_point") {
      c.base_point = value;
    } else if (key == "search_bound") {
      c.search_bound = parse_number<int>(key, value);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "threads") {
      c.threads = parse_number<unsigned>(key, value);
    } else if (key == "mixing_delta") {
      c.mixing_delta = parse_number<double>(key, value);
    } else if (key == "tail_z_min") {
      c.tail_z_min = parse_optional(key, value);
    } else if (key == "tail_z_max") {
      c.tail_z_max = parse_optional(key, value);
    } else if (key == "tail_z_step") {
      c.tail_z_step = parse_number<double>(key, value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(key, e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(c, trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)));
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig c = parse_config(read_file(path, "config"));
  // A relative base point file is looked up next to the config file.
  if (c.base_point != "identity" && std::filesystem::path(c.base_point).is_relative()) {
    c.base_point = (std::filesystem::path(path).parent_path() / c.base_point).lexically_normal().string();
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment = " << to_string(c.experiment) << '\n'
      << "dim = " << c.dim << '\n'
      << "flow = " << format_flow(c.flow) << '\n'
      << "observable = " << to_string(c.observable) << '\n'
      << "m0 = " << fmt(c.m0) << '\n'
      << "q = " << fmt(c.q) << '\n'
      << "n = " << c.n << '\n'
      << "k = " << c.k << '\n'
      << "v = " << fmt_optional(c.v) << '\n'
      << "samples = " << c.samples << '\n'
      << "seed = " << c.seed << '\n'
      << "base_point = " << c.base_point << '\n'
      << "search_bound = " << c.search_bound << '\n'
      << "output = " << c.output << '\n'
      << "threads = " << c.threads << '\n'
      << "mixing_delta = " << fmt(c.mixing_delta) << '\n'
      << "tail_z_min = " << fmt_optional(c.tail_z_min) << '\n'
      << "tail_z_max = " << fmt_optional(c.tail_z_max) << '\n'
      << "tail_z_step = " << fmt(c.tail_z_step) << '\n';
  return out.str();
}

void validate(const ExperimentConfig& c) {
  if (c.dim < 2) {
    throw ConfigError("dim", "must be >= 2");
  }
  if (c.flow.dim() != c.dim) {
    throw ConfigError("flow", "has " + std::to_string(c.flow.dim()) + " exponents but dim = " + std::to_string(c.dim));
  }
  if (!(c.m0 > 0.0)) {
    throw ConfigError("m0", "must be positive");
  }
  if (!(c.q > 1.0)) {
    throw ConfigError("q", "must be > 1");
  }
  if (c.n < 1) {
    throw ConfigError("n", "must be >= 1");
  }
  if (c.v && !(*c.v > 0.0)) {
    throw ConfigError("v", "must be positive");
  }
  if (c.search_bound < 1) {
    throw ConfigError("search_bound", "must be >= 1");
  }
  if (!(c.tail_z_step > 0.0)) {
    throw ConfigError("tail_z_step", "must be positive");
  }
  if (c.tail_z_min && c.tail_z_max && !(*c.tail_z_max > *c.tail_z_min)) {
    throw ConfigError("tail_z_max", "must exceed tail_z_min");
  }
  if (c.experiment == Experiment::CheckConditions) {
    if (c.k < 1) {
      throw ConfigError("k", "must be >= 1");
    }
    if (!(c.mixing_delta > 0.0)) {
      throw ConfigError("mixing_delta", "must be positive");
    }
    return;
  }
  if (c.dim != 2) {
    throw ConfigError("dim", "sampling experiments are implemented for dim = 2 only");
  }
  if (c.samples < 100) {
    throw ConfigError("samples", "must be >= 100");
  }
  if (effective_observable(c) != Observable::ShortestVector && c.base_point.empty()) {
    throw ConfigError("base_point", "distance observables require a base point");
  }
  if (c.experiment == Experiment::Tail) {
    return;
  }
  if (c.experiment == Experiment::Kth && c.k < 2) {
    throw ConfigError("k", "kth requires k >= 2");
  }
  if (c.experiment == Experiment::Evd && c.k != 1) {
    throw ConfigError("k", "evd is the k = 1 case; use kth");
  }
  if (c.k < 1 || c.k > c.n + 1) {
    throw ConfigError("k", "must lie in [1, N] with N = n + 1");
  }
}

Observable effective_observable(const ExperimentConfig& c) {
  switch (c.experiment) {
    case Experiment::Returns:
      return Observable::NegLogReturn;
    case Experiment::Excursion:
      return Observable::ExcursionDistance;
    default:
      return c.observable;
  }
}

SparseSchedule schedule_of(const ExperimentConfig& c) { return build_schedule(c.m0, c.q, c.n); }

ObservableKind observable_kind_of(const ExperimentConfig& c) {
  const Observable obs = effective_observable(c);
  if (obs == Observable::ShortestVector) {
    return ObservableKind::shortest_vector();
  }
  LatticeFrame frame0 = LatticeFrame::identity(2);
  if (c.base_point != "identity") {
    try {
      frame0 = frame_from_json(read_file(c.base_point, "base point"));
    } catch (const InvalidArgument& e) {
      throw ConfigError("base_point", e.what());
    } catch (const IoError& e) {
      throw ConfigError("base_point", e.what());
    }
  }
  try {
    return ObservableKind(obs, BasePoint(frame0, c.search_bound));
  } catch (const InvalidArgument& e) {
    throw ConfigError("base_point", e.what());
  }
}

std::pair<double, double> default_tail_range(Observable obs) {
  switch (obs) {
    case Observable::ShortestVector:
      return {0.75, 2.5};
    case Observable::ExcursionDistance:
      return {2.0, 5.0};
    case Observable::NegLogReturn:
      break;
  }
  return {1.0, 12.0};
}

}  // namespace evtlab
