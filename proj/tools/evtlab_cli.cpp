// evtlab command line front end.
#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "evtlab/config.hpp"
#include "evtlab/errors.hpp"
#include "evtlab/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

// Flags shared by every experiment subcommand; unset ones leave the config
// file (or the defaults) alone.
struct ExperimentFlags {
  std::string config_path;
  std::optional<std::string> seed, samples, q, n, k, m0, v, observable, flow, base, delta, search_bound, threads;
  std::string out;
  std::string format = "text";
  bool no_timing = false;
};

void add_experiment_flags(CLI::App* sub, ExperimentFlags& f) {
  sub->add_option("--config", f.config_path, "key = value config file");
  sub->add_option("--seed", f.seed, "master seed (u64)");
  sub->add_option("--samples", f.samples, "number of trajectories / samples");
  sub->add_option("--q", f.q, "schedule ratio q > 1");
  sub->add_option("--n", f.n, "schedule index: alpha = n, beta = 2n");
  sub->add_option("--k", f.k, "order of the maximum (Sobolev order for check-conditions)");
  sub->add_option("--m0", f.m0, "schedule scale m0 > 0");
  sub->add_option("--v", f.v, "rescaling exponent, or auto");
  sub->add_option("--observable", f.observable, "delta | excursion | neglog");
  sub->add_option("--flow", f.flow, "comma separated flow exponents");
  sub->add_option("--base", f.base, "base point frame JSON file");
  sub->add_option("--delta", f.delta, "mixing rate hypothesis (check-conditions)");
  sub->add_option("--search-bound", f.search_bound, "entry bound of the SL(2,Z) search set");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--format", f.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_flag("--no-timing", f.no_timing, "omit wall_time from the summary");
}

evtlab::ExperimentConfig build_config(evtlab::Experiment experiment, const ExperimentFlags& f) {
  evtlab::ExperimentConfig c;
  if (!f.config_path.empty()) {
    c = evtlab::load_config(f.config_path);
  }
  c.experiment = experiment;
  auto set = [&](const char* key, const std::optional<std::string>& value) {
    if (value) {
      evtlab::set_config_value(c, key, *value);
    }
  };
  set("seed", f.seed);
  set("samples", f.samples);
  set("q", f.q);
  set("n", f.n);
  set("k", f.k);
  set("m0", f.m0);
  set("v", f.v);
  set("observable", f.observable);
  set("flow", f.flow);
  set("base_point", f.base);
  set("mixing_delta", f.delta);
  set("search_bound", f.search_bound);
  set("threads", f.threads);
  if (f.flow) {
    c.dim = c.flow.dim();
  }
  if (!f.out.empty()) {
    c.output = f.out;
  }
  evtlab::validate(c);
  return c;
}

int run_experiment(evtlab::Experiment experiment, const ExperimentFlags& f) {
  const auto config = build_config(experiment, f);
  evtlab::ExecuteOptions options;
  options.timing = !f.no_timing;
  auto bundle = evtlab::execute_experiment(config, options);
  evtlab::write_report(bundle, evtlab::parse_format(f.format), config.output);
  return 0;
}

void emit_table(const evtlab::CsvTable& table, const std::string& out) {
  const std::string csv = evtlab::to_csv(table);
  if (out.empty()) {
    std::cout << csv;
  } else {
    evtlab::write_file_atomic(out, csv);
  }
}

// "lo:hi:step".
std::array<double, 3> parse_grid(const std::string& text) {
  std::array<double, 3> g{};
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g[0], &g[1], &g[2], &tail) != 3) {
    throw evtlab::ConfigError("grid", "expected lo:hi:step (got \"" + text + "\")");
  }
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme value experiments for diagonal flows on SL(2,R)/SL(2,Z)"};
  app.require_subcommand(1);

  struct Named {
    const char* name;
    evtlab::Experiment experiment;
    const char* help;
  };
  const Named experiments[] = {
      {"tail", evtlab::Experiment::Tail, "Haar tail of an observable and its exponential fit"},
      {"evd", evtlab::Experiment::Evd, "distribution of rescaled block maxima"},
      {"kth", evtlab::Experiment::Kth, "distribution of rescaled k-th maxima"},
      {"returns", evtlab::Experiment::Returns, "closest returns to the base point"},
      {"excursion", evtlab::Experiment::Excursion, "excursion distance maxima"},
      {"check-conditions", evtlab::Experiment::CheckConditions, "sparsity and growth conditions of a schedule"},
  };
  std::vector<ExperimentFlags> flags(std::size(experiments));
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(experiments); ++i) {
    auto* sub = app.add_subcommand(experiments[i].name, experiments[i].help);
    add_experiment_flags(sub, flags[i]);
    subs.push_back(sub);
  }

  std::size_t haar_samples = 1000;
  std::uint64_t haar_seed = 42;
  std::string haar_out;
  unsigned haar_threads = 0;
  auto* haar = app.add_subcommand("haar-sample", "Haar-random points as CSV x,y,theta,delta");
  haar->add_option("--samples,--n", haar_samples, "number of points");
  haar->add_option("--seed", haar_seed, "master seed (u64)");
  haar->add_option("--threads", haar_threads, "worker threads (0 = all cores)");
  haar->add_option("--out", haar_out, "output CSV (default stdout)");
  std::string haar_format = "csv";
  haar->add_option("--format", haar_format, "csv (the only format)")->check(CLI::IsMember({"csv"}));

  std::string law = "gumbel";
  double target_w = 3.0 / std::numbers::pi;
  double target_v = 2.0;
  int target_k = 1;
  std::string grid = "-3:5:0.1";
  std::string target_out;
  auto* targets = app.add_subcommand("targets", "limit CDF on a grid as CSV r,cdf");
  targets->add_option("--law", law, "gumbel | kth")->check(CLI::IsMember({"gumbel", "kth"}));
  targets->add_option("--w", target_w, "scale constant w > 0");
  targets->add_option("--v", target_v, "exponent v > 0");
  targets->add_option("--k", target_k, "order for --law kth");
  targets->add_option("--grid", grid, "lo:hi:step (write --grid=-3:5:0.1)");
  targets->add_option("--out", target_out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) {
        return run_experiment(experiments[i].experiment, flags[i]);
      }
    }
    if (haar->parsed()) {
      emit_table(evtlab::haar_sample_table(haar_samples, haar_seed, haar_threads), haar_out);
      return 0;
    }
    if (targets->parsed()) {
      if (law == "gumbel" && target_k != 1) {
        throw evtlab::ConfigError("k", "the gumbel law is k = 1; use --law kth");
      }
      const auto g = parse_grid(grid);
      emit_table(evtlab::target_table(evtlab::GumbelLaw(target_w, target_v), target_k, g[0], g[1], g[2]),
                 target_out);
      return 0;
    }
  } catch (const evtlab::NumericError& e) {
    std::cerr << "evtlab: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const evtlab::Error& e) {
    std::cerr << "evtlab: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "evtlab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
