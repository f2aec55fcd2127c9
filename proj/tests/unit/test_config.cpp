#include "zrlab/config.hpp"

#include <string>

#include "gtest/gtest.h"
#include "zrlab/errors.hpp"

namespace zrlab {
namespace {

const std::vector<ExperimentKind> kKinds = {ExperimentKind::simulate, ExperimentKind::conserve,
                                            ExperimentKind::inflate,  ExperimentKind::c2probe,
                                            ExperimentKind::decohere, ExperimentKind::growth};

std::string error_of(const std::string& text, std::vector<std::string> sets = {}) {
  try {
    parse_config(text, std::nullopt, sets);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, MinimalConserveResolvesDefaults) {
  const auto spec = parse_config("[grid]\nn = 256\nlength = 64\n[experiment]\nkind = conserve\n");
  auto want = defaults_for(ExperimentKind::conserve);
  want.grid = {64.0, 256};
  EXPECT_EQ(spec, want);
  EXPECT_EQ(spec.stepper.dt, 1e-3);
  EXPECT_EQ(spec.params.preset, "physical");
  EXPECT_EQ(spec.output.prefix, "conserve");
}

TEST(Config, InflationHypothesisAccepted) {
  const auto spec = parse_config(
      "# inflation sweep\n[experiment]\nkind = inflate\nk = 1/4\nl = 1/4   # on the line\nN_list = 32, 64, 128, 256\n");
  EXPECT_EQ(spec.kind, ExperimentKind::inflate);
  EXPECT_EQ(spec.experiment.k, 0.25);
  EXPECT_EQ(spec.experiment.l, 0.25);
  EXPECT_EQ(spec.experiment.N_list, (std::vector<long>{32, 64, 128, 256}));
}

TEST(Config, InflationHypothesisViolationNamed) {
  // l = 2k - 1 with k = 1/4
  const auto msg = error_of("[experiment]\nkind = inflate\nk = 1/4\nl = -1/2\n");
  EXPECT_NE(msg.find("l > 2k - 1/2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("constraint violated"), std::string::npos) << msg;
}

TEST(Config, SyntaxErrorsCarryLineNumbers) {
  try {
    parse_config("[grid]\nn = 64\n\nthis is not a pair\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
  EXPECT_NE(error_of("[grid\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("n = 3\n").find("outside of a section"), std::string::npos);
  EXPECT_NE(error_of("[gird]\n").find("unknown section"), std::string::npos);
}

TEST(Config, UnknownAndDuplicateKeys) {
  const auto typo = error_of("[experiment]\nkind = conserve\n[stepper]\nddt = 0.1\n");
  EXPECT_NE(typo.find("unknown key 'stepper.ddt'"), std::string::npos) << typo;
  EXPECT_NE(typo.find("line 4"), std::string::npos) << typo;
  const auto dup = error_of("[experiment]\nkind = conserve\n[grid]\nn = 64\nn = 128\n");
  EXPECT_NE(dup.find("duplicate key 'grid.n'"), std::string::npos) << dup;
  EXPECT_NE(dup.find("line 5"), std::string::npos) << dup;
}

TEST(Config, KeysOutsideTheKindRejected) {
  const auto msg = error_of("[experiment]\nkind = inflate\n[grid]\nn = 64\n");
  EXPECT_NE(msg.find("not used by experiment kind inflate"), std::string::npos) << msg;
  EXPECT_FALSE(error_of("[experiment]\nkind = decohere\n[stepper]\nt_end = 3\n").empty());
  EXPECT_FALSE(error_of("[experiment]\nkind = simulate\nrefine = false\n").empty());
}

TEST(Config, ValueErrors) {
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n[grid]\nn = 64.5\n").find("integer"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n[stepper]\ndealias = yes\n").find("true or false"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n[stepper]\ndt = 1/0\n").find("zero denominator"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nkind = warp\n").find("unknown experiment kind"), std::string::npos);
  EXPECT_NE(error_of("[grid]\nn = 64\n").find("experiment.kind is not set"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n[grid]\nn = 96\n").find("power of two"), std::string::npos);
}

TEST(Config, OverridesApplyAfterFile) {
  const auto spec = parse_config("[experiment]\nkind = conserve\n[stepper]\ndt = 0.01\n", std::nullopt,
                                 {"stepper.dt=0.002", "output.prefix = \"run 7\"", "grid.n=128"});
  EXPECT_EQ(spec.stepper.dt, 0.002);
  EXPECT_EQ(spec.output.prefix, "run 7");
  EXPECT_EQ(spec.grid.n, 128u);
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n", {"stepper.dt"}).find("--set"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nkind = conserve\n", {"stepper.bogus=1"}).find("--set 'stepper.bogus'"),
            std::string::npos);
}

TEST(Config, SubcommandSelectsKind) {
  const auto spec = parse_config("", ExperimentKind::growth);
  EXPECT_EQ(spec, defaults_for(ExperimentKind::growth));
  EXPECT_THROW(parse_config("[experiment]\nkind = conserve\n", ExperimentKind::growth), ConfigError);
  EXPECT_EQ(parse_config("[experiment]\nkind = growth\n", ExperimentKind::growth).kind, ExperimentKind::growth);
}

TEST(Config, DefaultsValidForEveryKind) {
  for (auto k : kKinds) EXPECT_NO_THROW(validate_spec(defaults_for(k))) << to_string(k);
}

TEST(Config, RoundTripDefaults) {
  for (auto k : kKinds) {
    const auto spec = defaults_for(k);
    EXPECT_EQ(parse_config(emit_config(spec)), spec) << to_string(k);
  }
}

TEST(Config, RoundTripAwkwardValues) {
  auto spec = parse_config("", ExperimentKind::simulate,
                           {"grid.length=0.1", "stepper.dt=1/3000", "stepper.t_end=0.7", "params.nu=1/3",
                            "params.beta=2.0000000000000004", "experiment.s_list=0.1, 1e-7, 2.5",
                            "experiment.seed=18446744073709551615", "output.dir=\"out # dir\"",
                            "experiment.center=-0.0"});
  const std::string text = emit_config(spec);
  const auto back = parse_config(text);
  EXPECT_EQ(back, spec) << text;
  EXPECT_EQ(emit_config(back), text);

  auto dec = parse_config("", ExperimentKind::decohere, {"experiment.mu_list=", "experiment.mu=0.1"});
  EXPECT_TRUE(dec.experiment.mu_list.empty());
  EXPECT_EQ(parse_config(emit_config(dec)), dec);
}

TEST(Config, KeyListsFollowKind) {
  const auto keys = config_keys(ExperimentKind::c2probe);
  EXPECT_EQ(keys.front(), "experiment.kind");
  EXPECT_NE(std::find(keys.begin(), keys.end(), "experiment.t_probe"), keys.end());
  EXPECT_EQ(std::find(keys.begin(), keys.end(), "grid.n"), keys.end());
  EXPECT_EQ(std::find(keys.begin(), keys.end(), "experiment.variant"), keys.end());
}

}  // namespace
}  // namespace zrlab
