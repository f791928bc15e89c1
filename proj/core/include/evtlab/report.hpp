#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "evtlab/config.hpp"
#include "evtlab/limit_laws.hpp"

namespace evtlab {

inline constexpr int kSchemaVersion = 1;

using SummaryValue = std::variant<double, std::int64_t, bool, std::string>;

/// In-memory CSV: header plus numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

struct ReportBundle {
  int schema_version = kSchemaVersion;
  std::string experiment;
  /// Config echo in serialization order (output and threads excluded: they
  /// never change results).
  std::vector<std::pair<std::string, std::string>> params;
  /// Header of the comparison table followed by its rows.
  std::vector<std::string> table_header;
  std::vector<std::vector<double>> table;
  std::vector<std::pair<std::string, SummaryValue>> summary;
  /// File name of the CSV written next to the report; empty if none.
  std::string ecdf_csv;
  std::string csv_fnv1a64;
  std::size_t csv_rows = 0;
  /// Full CSV data; not part of the JSON form.
  CsvTable csv;

  const SummaryValue* find(std::string_view key) const;
  double number(std::string_view key) const;
  bool flag(std::string_view key) const;
};

struct ExecuteOptions {
  /// Adds a wall_time entry to the summary.
  bool timing = true;
};

/// Runs the experiment named in `config`. All randomness derives from
/// config.seed; the bundle does not depend on the thread count.
ReportBundle execute_experiment(const ExperimentConfig& config, const ExecuteOptions& options = {});

enum class ReportFormat { Json, Csv, Text };
ReportFormat parse_format(const std::string& name);

std::string emit_report(const ReportBundle& bundle, ReportFormat format);
/// Inverse of the JSON form (the CSV rows themselves are not restored).
ReportBundle bundle_from_json(std::string_view text);

/// Writes the report to `path` (stdout when empty). For json and text the
/// CSV goes next to it with extension .csv and bundle.ecdf_csv records its
/// file name.
void write_report(ReportBundle& bundle, ReportFormat format, const std::string& path);

/// Writes through a temporary file and rename. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view contents);

/// Haar samples as CSV x,y,theta,delta; sample i uses derive_subseed(seed, i).
CsvTable haar_sample_table(std::size_t samples, std::uint64_t seed, unsigned threads = 0);

/// Target CDF on lo, lo + step, ..., hi as CSV r,cdf. k = 1 gives the
/// Gumbel law.
CsvTable target_table(const GumbelLaw& law, int k, double lo, double hi, double step);

}  // namespace evtlab
