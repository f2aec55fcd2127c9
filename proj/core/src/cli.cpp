#include "zrlab/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zrlab/config.hpp"
#include "zrlab/errors.hpp"
#include "zrlab/output.hpp"

namespace zrlab {
namespace {

struct SubcommandArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  bool quiet = false;
};

std::string config_from_file(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("config") || !j["config"].is_string()) {
      throw ConfigError("'" + path + "' is not a run manifest");
    }
    return j["config"].get<std::string>();
  }
  return text;
}

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return 0;
    case Verdict::inconclusive:
      return 2;
    case Verdict::fail:
      return 1;
  }
  return 1;
}

int run(ExperimentKind kind, const SubcommandArgs& a, std::ostream& out) {
  const std::string text = a.config.empty() ? std::string() : config_from_file(a.config);
  auto sets = a.sets;
  if (!a.out.empty()) sets.push_back("output.dir=" + a.out);
  const ExperimentSpec spec = parse_config(text, kind, sets);

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const EmittedFiles files = emit_record(spec, result, wall);

  if (!a.quiet) {
    out << to_string(kind) << ": " << to_string(result.verdict) << "\n";
    for (const auto& [name, v] : result.metrics) out << "  " << name << " = " << g(v) << "\n";
    if (result.fit) {
      out << "  fit: slope = " << g(result.fit->slope) << ", r2 = " << g(result.fit->r_squared) << "\n";
    }
    for (const auto& n : result.notes) out << "  note: " << n << "\n";
    for (const auto& w : result.warnings) out << "  warning: " << w << "\n";
    for (const auto& p : files.all()) out << "  wrote " << p.string() << "\n";
    out << "  wall = " << g(wall) << " s\n";
  }
  return exit_code(result.verdict);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral experiments for the Zakharov-Rubenchik system", "zrlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  const std::vector<ExperimentKind> kinds = {ExperimentKind::simulate, ExperimentKind::conserve,
                                             ExperimentKind::inflate,  ExperimentKind::c2probe,
                                             ExperimentKind::decohere, ExperimentKind::growth};
  const std::vector<std::string> blurbs = {
      "evolve initial data and record conserved quantities and norms",
      "check conservation laws and the second-order energy drift",
      "norm inflation sweep over N with the first-order oracle",
      "bilinear estimate failure sweep over N",
      "decoherence of two nearby modified solutions",
      "long-time Sobolev growth against a-priori envelopes",
  };
  std::vector<SubcommandArgs> args(kinds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    auto* sub = app.add_subcommand(to_string(kinds[i]), blurbs[i]);
    sub->add_option("--config", args[i].config, "config file or run manifest");
    sub->add_option("--set", args[i].sets, "override, section.key=value (repeatable)")->allow_extra_args(false);
    sub->add_option("--out", args[i].out, "output directory");
    sub->add_flag("--quiet", args[i].quiet, "suppress the summary");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return run(kinds[i], args[i], out);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
    }
    return 1;
  }
  err << app.help();
  return 1;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("zrlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace zrlab
