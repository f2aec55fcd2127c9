#include "zrlab/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zrlab/config.hpp"
#include "zrlab/errors.hpp"

#ifndef ZRLAB_VERSION
#define ZRLAB_VERSION "0.0.0"
#endif

namespace zrlab {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string fit_xname(ExperimentKind k) { return k == ExperimentKind::growth ? "logt" : "logN"; }

// Sections of the emitted config, used for the grid and stepper digests.
std::string section_text(const std::string& config, const std::string& section) {
  std::string out;
  bool inside = false;
  std::istringstream in(config);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '[') inside = line == "[" + section + "]";
    if (inside) out += line + "\n";
  }
  return out;
}

}  // namespace

std::string tool_version() { return ZRLAB_VERSION; }

std::string csv_text(const RunRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.columns.size(); ++i) {
    if (i) out += ",";
    out += record.columns[i];
  }
  out += "\n";
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += g17(row[i]);
    }
    out += "\n";
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("csv: missing header");
  t.columns = split(line, ',');
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw IoError("csv line " + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) {
      throw IoError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(t.columns.size()) +
                    " values");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string fit_text(const FitResult& fit, const std::string& xname) {
  std::string out = "# " + xname + ",lognorm,fit\n";
  for (std::size_t i = 0; i < fit.x.size(); ++i) {
    out += g17(fit.x[i]) + "," + g17(fit.y[i]) + "," + g17(fit.predict(fit.x[i])) + "\n";
  }
  out += "# slope = " + g17(fit.slope) + " intercept = " + g17(fit.intercept) + " r2 = " + g17(fit.r_squared) + "\n";
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::filesystem::path> EmittedFiles::all() const {
  std::vector<std::filesystem::path> out;
  for (const auto* p : {&csv, &manifest, &fit}) {
    if (!p->empty()) out.push_back(*p);
  }
  return out;
}

std::string manifest_text(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds,
                          const EmittedFiles& files) {
  using nlohmann::ordered_json;
  const std::string config = emit_config(spec);
  ordered_json j;
  j["tool"] = "zrlab";
  j["version"] = tool_version();
  j["kind"] = to_string(spec.kind);
  j["config"] = config;
  j["digests"] = {{"config", fnv1a_hex(config)},
                  {"grid", fnv1a_hex(section_text(config, "grid"))},
                  {"stepper", fnv1a_hex(section_text(config, "stepper"))}};
  j["verdict"] = to_string(result.verdict);
  ordered_json metrics = ordered_json::object();
  for (const auto& [name, v] : result.metrics) {
    // JSON has no NaN/inf; keep them as strings so the manifest stays valid.
    if (std::isfinite(v)) {
      metrics[name] = v;
    } else {
      metrics[name] = g17(v);
    }
  }
  j["metrics"] = metrics;
  j["notes"] = result.notes;
  j["warnings"] = result.warnings;
  if (result.fit) {
    j["fit"] = {{"slope", result.fit->slope},
                {"intercept", result.fit->intercept},
                {"r_squared", result.fit->r_squared},
                {"points", result.fit->x.size()}};
  }
  if (result.record) {
    j["record"] = {{"rows", result.record->rows.size()},
                   {"steps", result.record->steps},
                   {"dt", result.record->dt},
                   {"csv_digest", fnv1a_hex(csv_text(*result.record))}};
  }
  j["wall_seconds"] = wall_seconds;
  ordered_json list = ordered_json::array();
  for (const auto& p : files.all()) list.push_back(p.filename().string());
  j["files"] = list;
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return ss.str();
}

EmittedFiles emit_record(const ExperimentSpec& spec, const ExperimentResult& result, double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir = spec.output.dir.empty() ? fs::path(".") : fs::path(spec.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  EmittedFiles files;
  const std::string stem = spec.output.prefix;
  if (spec.output.csv && result.record) {
    files.csv = dir / (stem + ".csv");
    write_file(files.csv, csv_text(*result.record));
  }
  if (spec.output.fit && result.fit) {
    files.fit = dir / (stem + "_fit.dat");
    write_file(files.fit, fit_text(*result.fit, fit_xname(spec.kind)));
  }
  if (spec.output.manifest) {
    files.manifest = dir / (stem + "_manifest.json");
    write_file(files.manifest, manifest_text(spec, result, wall_seconds, files));
  }
  return files;
}

}  // namespace zrlab
