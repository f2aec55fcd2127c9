#pragma once

// Result files: time-series CSV (17 significant digits), a JSON run
// manifest and a gnuplot-ready log-log fit file.

#include <filesystem>
#include <string>
#include <vector>

#include "zrlab/evolution.hpp"
#include "zrlab/experiments.hpp"
#include "zrlab/fit.hpp"

namespace zrlab {

std::string tool_version();

/// CSV text: header line of column names, then one row per record row.
std::string csv_text(const RunRecord& record);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Inverse of csv_text (values re-parse to the same bits). Throws IoError on
/// malformed input.
CsvTable parse_csv(const std::string& text);

/// Fit file: "# <xname>,lognorm,fit" header, one line per point, and a
/// "# slope = .. intercept = .. r2 = .." footer.
std::string fit_text(const FitResult& fit, const std::string& xname = "logN");

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct EmittedFiles {
  std::filesystem::path csv;
  std::filesystem::path manifest;
  std::filesystem::path fit;

  std::vector<std::filesystem::path> all() const;
};

/// Manifest JSON text. `files` lists the artifacts written alongside it.
std::string manifest_text(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds,
                          const EmittedFiles& files);

/// Writes the files enabled in spec.output into spec.output.dir (created if
/// missing). Throws IoError naming the offending path.
EmittedFiles emit_record(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds);

/// Writes `bytes` to `path`, throwing IoError with the path on failure.
void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace zrlab
