#include "zrlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "zrlab/errors.hpp"

namespace zrlab {
namespace {

using Kind = ExperimentKind;

constexpr unsigned bit(Kind k) { return 1u << static_cast<unsigned>(k); }

constexpr unsigned kSim = bit(Kind::simulate);
constexpr unsigned kCons = bit(Kind::conserve);
constexpr unsigned kInfl = bit(Kind::inflate);
constexpr unsigned kC2 = bit(Kind::c2probe);
constexpr unsigned kDec = bit(Kind::decohere);
constexpr unsigned kGrow = bit(Kind::growth);
constexpr unsigned kAll = kSim | kCons | kInfl | kC2 | kDec | kGrow;
constexpr unsigned kEvolving = kSim | kCons | kDec | kGrow;
constexpr unsigned kData = kSim | kCons | kGrow;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.emplace_back();
  return out;
}

// Parse failures are reported as std::invalid_argument and turned into
// ConfigError with the line and key by the caller.
[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double parse_plain_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) bad("expected a number, got '" + s + "'");
  return v;
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    const double v = parse_plain_double(s);
    if (!std::isfinite(v)) bad("non-finite number '" + s + "'");
    return v;
  }
  const double num = parse_plain_double(trim(s.substr(0, slash)));
  const double den = parse_plain_double(trim(s.substr(slash + 1)));
  if (den == 0.0) bad("zero denominator in '" + s + "'");
  const double v = num / den;
  if (!std::isfinite(v)) bad("non-finite number '" + s + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& raw) {
  const std::string s = trim(raw);
  Int v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) bad("expected an integer, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  bad("expected true or false, got '" + s + "'");
}

std::string parse_string(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  if (s.find('"') != std::string::npos) bad("stray quote in string value");
  for (char ch : s) {
    if (static_cast<unsigned char>(ch) < 0x20) bad("control character in string value");
  }
  return s;
}

std::string emit_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class Int>
std::string emit_int(Int v) {
  return std::to_string(v);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += f(v[i]);
  }
  return out;
}

struct KeyDef {
  std::string section;
  std::string name;
  unsigned kinds = 0;
  std::function<void(ExperimentSpec&, const std::string&)> set;
  std::function<std::string(const ExperimentSpec&)> get;

  std::string full() const { return section + "." + name; }
};

template <class Access>
KeyDef dbl(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) { a(s) = parse_double(v); },
          [a](const ExperimentSpec& s) { return emit_double(a(const_cast<ExperimentSpec&>(s))); }};
}

template <class Int, class Access>
KeyDef integer(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) { a(s) = parse_int<Int>(v); },
          [a](const ExperimentSpec& s) { return emit_int(a(const_cast<ExperimentSpec&>(s))); }};
}

template <class Access>
KeyDef boolean(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) { a(s) = parse_bool(v); },
          [a](const ExperimentSpec& s) { return std::string(a(const_cast<ExperimentSpec&>(s)) ? "true" : "false"); }};
}

template <class Access>
KeyDef text(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) { a(s) = parse_string(v); },
          [a](const ExperimentSpec& s) { return "\"" + a(const_cast<ExperimentSpec&>(s)) + "\""; }};
}

template <class Access>
KeyDef dbl_list(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) {
            std::vector<double> out;
            for (const auto& item : split_list(v)) out.push_back(parse_double(item));
            a(s) = std::move(out);
          },
          [a](const ExperimentSpec& s) { return join(a(const_cast<ExperimentSpec&>(s)), emit_double); }};
}

template <class Access>
KeyDef long_list(std::string sec, std::string name, unsigned kinds, Access a) {
  return {std::move(sec), std::move(name), kinds,
          [a](ExperimentSpec& s, const std::string& v) {
            std::vector<long> out;
            for (const auto& item : split_list(v)) out.push_back(parse_int<long>(item));
            a(s) = std::move(out);
          },
          [a](const ExperimentSpec& s) {
            return join(a(const_cast<ExperimentSpec&>(s)), [](long x) { return std::to_string(x); });
          }};
}

#define ZR_FIELD(expr) [](ExperimentSpec& s) -> auto& { return s.expr; }

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = {
      dbl("grid", "length", kEvolving, ZR_FIELD(grid.length)),
      integer<std::size_t>("grid", "n", kEvolving, ZR_FIELD(grid.n)),

      text("params", "preset", kData, ZR_FIELD(params.preset)),
      dbl("params", "theta", kData, ZR_FIELD(params.theta)),
      dbl("params", "gamma", kData, ZR_FIELD(params.gamma)),
      dbl("params", "omega", kData, ZR_FIELD(params.omega)),
      dbl("params", "beta", kData, ZR_FIELD(params.beta)),
      dbl("params", "nu", kData, ZR_FIELD(params.nu)),

      dbl("stepper", "dt", kEvolving, ZR_FIELD(stepper.dt)),
      dbl("stepper", "t_end", kData, ZR_FIELD(stepper.t_end)),
      boolean("stepper", "dealias", kEvolving, ZR_FIELD(stepper.dealias)),
      integer<long>("stepper", "record_every", kEvolving, ZR_FIELD(stepper.record_every)),
      boolean("stepper", "midpoint_external", kEvolving, ZR_FIELD(stepper.midpoint_external)),

      integer<std::uint64_t>("experiment", "seed", kAll, ZR_FIELD(experiment.seed)),
      text("experiment", "data", kData, ZR_FIELD(experiment.data)),
      dbl("experiment", "amplitude", kData, ZR_FIELD(experiment.amplitude)),
      dbl("experiment", "width", kData, ZR_FIELD(experiment.width)),
      dbl("experiment", "center", kData, ZR_FIELD(experiment.center)),
      dbl("experiment", "kappa", kData, ZR_FIELD(experiment.kappa)),
      dbl("experiment", "psi_amplitude", kData, ZR_FIELD(experiment.psi_amplitude)),
      dbl("experiment", "psi_width", kData, ZR_FIELD(experiment.psi_width)),
      dbl("experiment", "c1", kData, ZR_FIELD(experiment.c1)),
      dbl("experiment", "c2", kData, ZR_FIELD(experiment.c2)),
      integer<long>("experiment", "modes", kData, ZR_FIELD(experiment.modes)),
      dbl_list("experiment", "s_list", kEvolving, ZR_FIELD(experiment.s_list)),
      dbl("experiment", "psi_l", kEvolving, ZR_FIELD(experiment.psi_l)),
      dbl("experiment", "epsilon", kData, ZR_FIELD(experiment.epsilon)),
      boolean("experiment", "refine", kCons, ZR_FIELD(experiment.refine)),
      dbl("experiment", "fit_from", kGrow, ZR_FIELD(experiment.fit_from)),

      dbl("experiment", "k", kInfl | kC2, ZR_FIELD(experiment.k)),
      dbl("experiment", "l", kInfl | kC2, ZR_FIELD(experiment.l)),
      long_list("experiment", "N_list", kInfl | kC2, ZR_FIELD(experiment.N_list)),
      dbl("experiment", "t_probe", kInfl | kC2, ZR_FIELD(experiment.t_probe)),
      text("experiment", "variant", kInfl, ZR_FIELD(experiment.variant)),
      integer<long>("experiment", "points_per_hat", kInfl, ZR_FIELD(experiment.points_per_hat)),
      integer<long>("experiment", "steps", kInfl, ZR_FIELD(experiment.steps)),
      boolean("experiment", "normalize", kInfl | kC2, ZR_FIELD(experiment.normalize)),
      integer<long>("experiment", "quad_nodes", kInfl | kC2, ZR_FIELD(experiment.quad_nodes)),
      integer<long>("experiment", "max_grid_log2", kInfl, ZR_FIELD(experiment.max_grid_log2)),

      dbl("experiment", "M", kDec, ZR_FIELD(experiment.M)),
      dbl("experiment", "mu", kDec, ZR_FIELD(experiment.mu)),
      dbl("experiment", "c", kDec, ZR_FIELD(experiment.c)),
      dbl("experiment", "k_reg", kDec, ZR_FIELD(experiment.k_reg)),
      dbl_list("experiment", "mu_list", kDec, ZR_FIELD(experiment.mu_list)),

      text("output", "dir", kAll, ZR_FIELD(output.dir)),
      text("output", "prefix", kAll, ZR_FIELD(output.prefix)),
      boolean("output", "csv", kAll, ZR_FIELD(output.csv)),
      boolean("output", "manifest", kAll, ZR_FIELD(output.manifest)),
      boolean("output", "fit", kAll, ZR_FIELD(output.fit)),
  };
  return table;
}

#undef ZR_FIELD

const std::vector<std::string> kSections = {"grid", "params", "stepper", "experiment", "output"};

struct Entry {
  std::string key;  ///< section.key
  std::string value;
  int line = 0;  ///< 0 for command-line overrides
};

std::string where(const Entry& e) { return e.line > 0 ? "'" + e.key + "'" : "--set '" + e.key + "'"; }

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::vector<Entry> read_entries(const std::string& text) {
  std::vector<Entry> entries;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("key outside of a section", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", line_no);
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'", line_no);
    entries.push_back({full, trim(line.substr(eq + 1)), line_no});
  }
  return entries;
}

Entry read_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + text + "'");
  const std::string key = trim(text.substr(0, eq));
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
    throw ConfigError("--set expects section.key=value, got '" + text + "'");
  }
  return {key, trim(text.substr(eq + 1)), 0};
}

const KeyDef* find_key(const std::string& full) {
  for (const auto& k : key_table()) {
    if (k.full() == full) return &k;
  }
  return nullptr;
}

}  // namespace

ExperimentSpec parse_config(const std::string& text, std::optional<ExperimentKind> kind,
                            const std::vector<std::string>& overrides) {
  auto entries = read_entries(text);
  for (const auto& o : overrides) entries.push_back(read_override(o));

  // The kind decides the defaults, so it is resolved first.
  std::optional<Kind> chosen = kind;
  for (const auto& e : entries) {
    if (e.key != "experiment.kind") continue;
    Kind k;
    try {
      k = parse_kind(parse_string(e.value));
    } catch (const std::exception& ex) {
      throw ConfigError(where(e) + ": " + ex.what(), e.line);
    }
    if (kind && k != *kind) {
      throw ConfigError(where(e) + ": experiment.kind = " + to_string(k) + " conflicts with subcommand " +
                            to_string(*kind),
                        e.line);
    }
    chosen = k;
  }
  if (!chosen) throw ConfigError("experiment.kind is not set");

  ExperimentSpec spec = defaults_for(*chosen);
  for (const auto& e : entries) {
    if (e.key == "experiment.kind") continue;
    const KeyDef* def = find_key(e.key);
    if (!def) throw ConfigError("unknown key " + where(e), e.line);
    if (!(def->kinds & bit(*chosen))) {
      throw ConfigError("key " + where(e) + " is not used by experiment kind " + to_string(*chosen), e.line);
    }
    try {
      def->set(spec, e.value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(where(e) + ": " + ex.what(), e.line);
    }
  }
  validate_spec(spec);
  return spec;
}

std::string emit_config(const ExperimentSpec& spec) {
  std::string out;
  const unsigned mask = bit(spec.kind);
  for (const auto& section : kSections) {
    std::string body;
    if (section == "experiment") body += "kind = " + to_string(spec.kind) + "\n";
    for (const auto& k : key_table()) {
      if (k.section == section && (k.kinds & mask)) body += k.name + " = " + k.get(spec) + "\n";
    }
    if (body.empty()) continue;
    if (!out.empty()) out += "\n";
    out += "[" + section + "]\n" + body;
  }
  return out;
}

std::vector<std::string> config_keys(ExperimentKind kind) {
  std::vector<std::string> out;
  for (const auto& section : kSections) {
    if (section == "experiment") out.push_back("experiment.kind");
    for (const auto& k : key_table()) {
      if (k.section == section && (k.kinds & bit(kind))) out.push_back(k.full());
    }
  }
  return out;
}

}  // namespace zrlab
