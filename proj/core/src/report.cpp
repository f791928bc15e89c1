#include "evtlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "evtlab/errors.hpp"
#include "parallel.hpp"

namespace evtlab {

namespace {

using Json = nlohmann::ordered_json;

// Acceptance-style diagnostics recorded in every maxima report.
constexpr double kBandAlpha = 0.01;
constexpr double kGridLo = -2.0;
constexpr double kGridHi = 3.0;
constexpr double kExactGridStep = 0.01;
constexpr double kSandwichGridStep = 0.05;
constexpr double kSandwichSlack = 0.1;
constexpr std::array<double, 5> kTableR = {-2.0, -1.0, 0.0, 1.0, 2.0};
constexpr std::array<double, 4> kSiegelCheckZ = {0.5, 1.0, 1.5, 2.0};

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, std::string>> params_of(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(serialize_config(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    std::string key = line.substr(0, eq);
    if (key == "output" || key == "threads") {
      continue;
    }
    out.emplace_back(std::move(key), line.substr(eq + 3));
  }
  return out;
}

void finalize_csv(ReportBundle& b) {
  b.csv_rows = b.csv.rows.size();
  b.csv_fnv1a64 = fnv1a64_hex(to_csv(b.csv));
}

std::vector<double> haar_values(const ObservableKind& obs, std::size_t samples, std::uint64_t seed,
                                unsigned threads) {
  std::vector<double> out(samples);
  detail::parallel_for(samples, threads, [&](std::size_t i) {
    Rng rng(derive_subseed(Seed{seed}, i));
    out[i] = evaluate(obs, sample_haar_sl2(rng));
  });
  return out;
}

std::vector<double> tail_grid(const ExperimentConfig& c, Observable obs) {
  const auto [lo, hi] = default_tail_range(obs);
  return arithmetic_grid(c.tail_z_min.value_or(lo), c.tail_z_max.value_or(hi), c.tail_z_step);
}

void add_fit(ReportBundle& b, const TailFit& fit, const std::string& prefix) {
  b.summary.emplace_back(prefix + "v_hat", fit.v_hat);
  b.summary.emplace_back(prefix + "w_hat", fit.w_hat());
  b.summary.emplace_back(prefix + "log_w_hat", fit.log_w_hat);
  b.summary.emplace_back(prefix + "residual_rms", fit.residual_rms);
  b.summary.emplace_back(prefix + "grid_points", static_cast<std::int64_t>(fit.z_grid.size()));
  b.summary.emplace_back(prefix + "z_min", fit.z_grid.front());
  b.summary.emplace_back(prefix + "z_max", fit.z_grid.back());
}

void run_tail(const ExperimentConfig& c, ReportBundle& b) {
  const Observable obs = effective_observable(c);
  const auto values = haar_values(observable_kind_of(c), c.samples, c.seed, c.threads);
  const EmpiricalCDF ecdf(values);
  const auto grid = tail_grid(c, obs);
  const TailFit fit = tail_fit(values, grid);

  b.csv.header = {"z", "empirical_tail", "fitted_tail", "count"};
  b.table_header = {"z", "empirical_tail", "fitted_tail"};
  const double n = static_cast<double>(values.size());
  for (double z : grid) {
    const double tail = ecdf.tail(z);
    b.csv.rows.push_back({z, tail, fit.tail(z), std::round(tail * n)});
  }
  for (double z : fit.z_grid) {
    b.table.push_back({z, ecdf.tail(z), fit.tail(z)});
  }
  b.summary.emplace_back("n", static_cast<std::int64_t>(values.size()));
  add_fit(b, fit, "");
  b.summary.emplace_back("min_value", ecdf.sorted_samples().front());
  b.summary.emplace_back("max_value", ecdf.sorted_samples().back());
  if (obs == Observable::ShortestVector) {
    const double cd = siegel_constant(c.dim);
    const double v = static_cast<double>(c.dim);
    bool holds = true;
    for (double z : kSiegelCheckZ) {
      const double p = cd * std::exp(-v * z);
      const double rel_se = std::sqrt((1.0 - p) / (n * p));
      holds = holds && ecdf.tail(z) <= p * (1.0 + 3.0 * rel_se);
    }
    b.summary.emplace_back("siegel_constant", cd);
    b.summary.emplace_back("w_rel_error", std::fabs(fit.w_hat() / cd - 1.0));
    b.summary.emplace_back("siegel_bound_holds", holds);
  }
}

std::vector<double> pooled(const std::vector<TrajectoryRecord>& records) {
  std::vector<double> out;
  for (const auto& r : records) {
    out.insert(out.end(), r.values.begin(), r.values.end());
  }
  return out;
}

void run_maxima(const ExperimentConfig& c, ReportBundle& b) {
  const Observable obs = effective_observable(c);
  EnsembleSpec spec;
  spec.flow = c.flow;
  spec.schedule = schedule_of(c);
  spec.observable = observable_kind_of(c);
  spec.k = c.k;
  spec.samples = c.samples;
  spec.seed = Seed{c.seed};
  spec.threads = c.threads;
  const int big_n = spec.schedule.size();

  const auto dyn = simulate_ensemble(spec);
  const auto orc = simulate_iid_oracle(spec);
  const EmpiricalCDF dyn_marginal(pooled(dyn));
  const EmpiricalCDF orc_marginal(pooled(orc));

  // Tail constants: Siegel's for Delta, otherwise fitted on the oracle's
  // Haar draws.
  std::optional<TailFit> fit;
  try {
    fit = tail_fit(orc_marginal.sorted_samples(), tail_grid(c, obs));
  } catch (const InsufficientTail&) {
    if (obs != Observable::ShortestVector) {
      throw;
    }
  }
  double v;
  double w;
  if (obs == Observable::ShortestVector) {
    v = c.v.value_or(static_cast<double>(c.dim));
    w = siegel_constant(c.dim);
  } else {
    v = c.v.value_or(obs == Observable::NegLogReturn ? 3.0 : fit->v_hat);
    // Intercept refit with the slope pinned to v.
    double s = 0.0;
    for (double z : fit->z_grid) {
      s += std::log(orc_marginal.tail(z)) + v * z;
    }
    w = std::exp(s / static_cast<double>(fit->z_grid.size()));
  }
  spec.v = v;

  const EmpiricalCDF d(rescaled_kth_maxima(dyn, c.k, v));
  const EmpiricalCDF o(rescaled_kth_maxima(orc, c.k, v));
  const GumbelLaw law(w, v);
  const int k = c.k;
  const double shift = std::log(static_cast<double>(big_n)) / v;
  auto target = [&](double r) { return kth_target_cdf(r, law, k); };
  auto exact_with = [&](const EmpiricalCDF& marginal) {
    return [&marginal, big_n, k, shift](double r) {
      return iid_exact_kth_cdf(1.0 - marginal(r + shift), big_n, k);
    };
  };
  const double band = dkw_epsilon(c.samples, kBandAlpha);

  std::size_t exact_hits = 0;
  const auto exact_grid = arithmetic_grid(kGridLo, kGridHi, kExactGridStep);
  const auto orc_exact = exact_with(orc_marginal);
  for (double r : exact_grid) {
    if (std::fabs(o(r) - orc_exact(r)) <= band) {
      ++exact_hits;
    }
  }

  std::size_t sandwich_violations = 0;
  const GumbelLaw lower(w * (1.0 + kSandwichSlack), v);
  const GumbelLaw upper(w * (1.0 - kSandwichSlack), v);
  for (double r : arithmetic_grid(kGridLo, kGridHi, kSandwichGridStep)) {
    const double f = d(r);
    if (f < kth_target_cdf(r, lower, k) - band || f > kth_target_cdf(r, upper, k) + band) {
      ++sandwich_violations;
    }
  }

  b.csv.header = {"r", "empirical", "target", "oracle"};
  b.csv.rows.reserve(d.size());
  for (double r : d.sorted_samples()) {
    b.csv.rows.push_back({r, d(r), target(r), o(r)});
  }
  b.table_header = b.csv.header;
  for (double r : kTableR) {
    b.table.push_back({r, d(r), target(r), o(r)});
  }

  b.summary.emplace_back("samples", static_cast<std::int64_t>(c.samples));
  b.summary.emplace_back("N", static_cast<std::int64_t>(big_n));
  b.summary.emplace_back("k", static_cast<std::int64_t>(k));
  b.summary.emplace_back("v", v);
  b.summary.emplace_back("w", w);
  b.summary.emplace_back("ks_vs_target", ks_distance(d, target));
  b.summary.emplace_back("ks_vs_oracle", ks_distance(d, o));
  b.summary.emplace_back("ks_vs_iid_exact", ks_distance(d, exact_with(dyn_marginal)));
  b.summary.emplace_back("ks_oracle_vs_target", ks_distance(o, target));
  b.summary.emplace_back("ks_oracle_vs_iid_exact", ks_distance(o, orc_exact));
  b.summary.emplace_back("dkw_band", band);
  b.summary.emplace_back("oracle_exact_fraction",
                         static_cast<double>(exact_hits) / static_cast<double>(exact_grid.size()));
  b.summary.emplace_back("sandwich_violations", static_cast<std::int64_t>(sandwich_violations));
  b.summary.emplace_back("sandwich_holds", sandwich_violations == 0);
  b.summary.emplace_back("min_value",
                         std::min(dyn_marginal.sorted_samples().front(), orc_marginal.sorted_samples().front()));
  if (fit) {
    add_fit(b, *fit, "tail_");
  }
}

void run_conditions(const ExperimentConfig& c, ReportBundle& b) {
  const SparseSchedule s = schedule_of(c);
  const AdjointSpectrum spec = adjoint_spectrum(c.flow);
  const int group_dim = c.dim * c.dim - 1;
  const ConditionReport r = check_growth_conditions(s, spec.gamma, c.k, c.mixing_delta, group_dim);
  b.csv.header = {"j", "time"};
  for (int j = s.alpha; j <= s.beta; ++j) {
    b.csv.rows.push_back({static_cast<double>(j), s.time(j)});
  }
  b.table_header = b.csv.header;
  b.table = b.csv.rows;
  b.summary.emplace_back("N", static_cast<std::int64_t>(s.size()));
  b.summary.emplace_back("gamma", spec.gamma);
  b.summary.emplace_back("partially_hyperbolic", spec.partially_hyperbolic);
  b.summary.emplace_back("group_dim", static_cast<std::int64_t>(group_dim));
  b.summary.emplace_back("ratio", r.ratio);
  b.summary.emplace_back("C", r.C);
  b.summary.emplace_back("rho", r.rho);
  b.summary.emplace_back("sigma", r.sigma);
  b.summary.emplace_back("growth_margin", r.growth_margin);
  b.summary.emplace_back("admissible_sparsity", r.admissible_sparsity);
  b.summary.emplace_back("admissible_growth", r.admissible_growth);
}

Json summary_value_json(const SummaryValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

std::string summary_value_text(const SummaryValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return fmt(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::string emit_json(const ReportBundle& b) {
  Json j;
  j["schema_version"] = b.schema_version;
  j["experiment"] = b.experiment;
  Json params = Json::object();
  for (const auto& [k, v] : b.params) {
    params[k] = v;
  }
  j["params"] = std::move(params);
  Json summary = Json::object();
  for (const auto& [k, v] : b.summary) {
    summary[k] = summary_value_json(v);
  }
  j["summary"] = std::move(summary);
  j["table"] = {{"header", b.table_header}, {"rows", b.table}};
  j["ecdf_csv"] = b.ecdf_csv.empty() ? Json(nullptr) : Json(b.ecdf_csv);
  j["csv_rows"] = b.csv_rows;
  j["csv_fnv1a64"] = b.csv_fnv1a64;
  return j.dump(2) + "\n";
}

std::string emit_text(const ReportBundle& b) {
  std::ostringstream out;
  out << "experiment " << b.experiment << " (schema " << b.schema_version << ")\n\n";
  for (const auto& [k, v] : b.params) {
    out << "  " << k << " = " << v << '\n';
  }
  out << '\n';
  char buf[64];
  for (const auto& h : b.table_header) {
    std::snprintf(buf, sizeof buf, " %15s", h.c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& row : b.table) {
    for (double x : row) {
      std::snprintf(buf, sizeof buf, " %15.8g", x);
      out << buf;
    }
    out << '\n';
  }
  out << '\n';
  for (const auto& [k, v] : b.summary) {
    out << "  " << k << ": " << summary_value_text(v) << '\n';
  }
  if (!b.ecdf_csv.empty()) {
    out << "  csv: " << b.ecdf_csv << " (" << b.csv_rows << " rows, fnv1a64 " << b.csv_fnv1a64 << ")\n";
  }
  return out.str();
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += table.header[i];
  }
  out += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) {
        out += ',';
      }
      const auto res = std::to_chars(buf, buf + sizeof buf, row[i]);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const SummaryValue* ReportBundle::find(std::string_view key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

double ReportBundle::number(std::string_view key) const {
  const SummaryValue* v = find(key);
  if (v == nullptr) {
    throw InvalidArgument("report has no summary entry \"" + std::string(key) + "\"");
  }
  if (const auto* d = std::get_if<double>(v)) {
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(v)) {
    return static_cast<double>(*i);
  }
  throw InvalidArgument("summary entry \"" + std::string(key) + "\" is not numeric");
}

bool ReportBundle::flag(std::string_view key) const {
  const SummaryValue* v = find(key);
  if (v == nullptr || !std::holds_alternative<bool>(*v)) {
    throw InvalidArgument("summary entry \"" + std::string(key) + "\" is not a flag");
  }
  return std::get<bool>(*v);
}

ReportBundle execute_experiment(const ExperimentConfig& config, const ExecuteOptions& options) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ReportBundle b;
  b.experiment = to_string(config.experiment);
  b.params = params_of(config);
  switch (config.experiment) {
    case Experiment::Tail:
      run_tail(config, b);
      break;
    case Experiment::CheckConditions:
      run_conditions(config, b);
      break;
    default:
      run_maxima(config, b);
      break;
  }
  finalize_csv(b);
  if (options.timing) {
    b.summary.emplace_back("wall_time", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return b;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json") {
    return ReportFormat::Json;
  }
  if (name == "csv") {
    return ReportFormat::Csv;
  }
  if (name == "text") {
    return ReportFormat::Text;
  }
  throw ConfigError("format", "expected json, csv or text (got \"" + name + "\")");
}

std::string emit_report(const ReportBundle& bundle, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json:
      return emit_json(bundle);
    case ReportFormat::Csv:
      return to_csv(bundle.csv);
    case ReportFormat::Text:
      break;
  }
  return emit_text(bundle);
}

ReportBundle bundle_from_json(std::string_view text) {
  ReportBundle b;
  try {
    const auto j = Json::parse(text);
    b.schema_version = j.at("schema_version").get<int>();
    b.experiment = j.at("experiment").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) {
      b.params.emplace_back(k, v.get<std::string>());
    }
    for (const auto& [k, v] : j.at("summary").items()) {
      if (v.is_boolean()) {
        b.summary.emplace_back(k, v.get<bool>());
      } else if (v.is_number_integer()) {
        b.summary.emplace_back(k, v.get<std::int64_t>());
      } else if (v.is_number()) {
        b.summary.emplace_back(k, v.get<double>());
      } else {
        b.summary.emplace_back(k, v.get<std::string>());
      }
    }
    b.table_header = j.at("table").at("header").get<std::vector<std::string>>();
    b.table = j.at("table").at("rows").get<std::vector<std::vector<double>>>();
    if (!j.at("ecdf_csv").is_null()) {
      b.ecdf_csv = j.at("ecdf_csv").get<std::string>();
    }
    b.csv_rows = j.at("csv_rows").get<std::size_t>();
    b.csv_fnv1a64 = j.at("csv_fnv1a64").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("report JSON: ") + e.what());
  }
  return b;
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot write \"" + tmp.string() + "\"");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) {
      throw IoError("write failed for \"" + tmp.string() + "\"");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto \"" + path + "\"");
  }
}

void write_report(ReportBundle& bundle, ReportFormat format, const std::string& path) {
  if (path.empty()) {
    std::cout << emit_report(bundle, format);
    return;
  }
  if (format != ReportFormat::Csv) {
    std::filesystem::path csv_path(path);
    csv_path.replace_extension(".csv");
    if (csv_path == std::filesystem::path(path)) {
      csv_path += ".csv";
    }
    write_file_atomic(csv_path.string(), to_csv(bundle.csv));
    bundle.ecdf_csv = csv_path.filename().string();
  }
  write_file_atomic(path, emit_report(bundle, format));
}

CsvTable haar_sample_table(std::size_t samples, std::uint64_t seed, unsigned threads) {
  CsvTable t;
  t.header = {"x", "y", "theta", "delta"};
  t.rows.resize(samples);
  detail::parallel_for(samples, threads, [&](std::size_t i) {
    Rng rng(derive_subseed(Seed{seed}, i));
    const FundamentalDomainPoint p = sample_fundamental_domain(rng);
    t.rows[i] = {p.x, p.y, p.theta, delta_observable(frame_from_chart(p))};
  });
  return t;
}

CsvTable target_table(const GumbelLaw& law, int k, double lo, double hi, double step) {
  CsvTable t;
  t.header = {"r", "cdf"};
  for (double r : arithmetic_grid(lo, hi, step)) {
    t.rows.push_back({r, kth_target_cdf(r, law, k)});
  }
  return t;
}

}  // namespace evtlab
