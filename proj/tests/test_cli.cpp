#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "levycouple/error.hpp"

using namespace levycouple;
using namespace levycouple::cli;
using nlohmann::json;

namespace {

struct CommandRun {
  int code;
  std::string out;
  std::string err;
};

CommandRun run_command(const ExperimentConfig& c, const std::string& sub) {
  std::ostringstream out, err;
  const int code = run(c, sub, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

ExperimentConfig quick_config() {
  ExperimentConfig c;
  c.eps_rule = {EpsRule::Kind::kRatio, 0.5};
  c.n = 500;
  return c;
}

}  // namespace

TEST(Csv, SeventeenDigitsAndEmptyCells) {
  EXPECT_EQ(cell(0.1), "0.10000000000000001");
  EXPECT_EQ(cell(1.0), "1");
  EXPECT_EQ(cell(std::optional<double>()), "");
  EXPECT_EQ(cell(true), "1");
  std::ostringstream out;
  CsvWriter w(out, "prov", {"a", "b"});
  w.row(0.5, std::optional<double>());
  EXPECT_EQ(out.str(), "# prov\na,b\n0.5,\n");
  EXPECT_THROW(w.row(1.0), std::logic_error);
}

TEST(Config, DefaultsResolve) {
  ExperimentConfig c;
  const auto m = parse_measure(c.measure);
  const Resolved r = resolve(c, m, 0.3);
  EXPECT_NEAR(r.eps, 5e-5, 1e-12);  // 2 eta(eps) = 2 eps <= 1e-4
  EXPECT_NEAR(r.delta, 0.03, 1e-15);
  const Resolved small = resolve(c, m, 1e-4);  // a/10 below 2 eps: floored
  EXPECT_NEAR(small.delta, 2.0 * small.eps, 1e-15);
  EXPECT_EQ(c.T, 1.0);
  EXPECT_EQ(c.T_max, 64.0);
  EXPECT_EQ(c.n, 10000u);
}

TEST(Config, RatioAndFixedRules) {
  ExperimentConfig c = config_from_json(json::parse(
      R"({"a_grid":[0.2],"delta_rule":{"fixed":0.05},"eps_rule":{"ratio":0.25}})"));
  const auto m = parse_measure(c.measure);
  const Resolved r = resolve(c, m, 0.2);
  EXPECT_EQ(r.delta, 0.05);
  EXPECT_EQ(r.eps, 0.0125);
  c.eps_rule = {EpsRule::Kind::kFixed, 0.03};
  EXPECT_THROW(resolve(c, m, 0.2), ConfigError);
  EXPECT_THROW(resolve_eps(config_from_json(json::parse(R"({"eps_rule":{"ratio":0.5}})")), m),
               ConfigError);
}

TEST(Config, ParsingErrors) {
  EXPECT_THROW(config_from_json(json::parse(R"({"bogus":1})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"n":-3})")), ConfigError);
  EXPECT_THROW(config_from_json(json::parse(R"({"delta_rule":{"half":0.1}})")), ConfigError);
  EXPECT_THROW(parse_measure(json::parse(R"({"family":"gamma"})")), ConfigError);
  EXPECT_THROW(parse_measure(json::parse(R"({"family":"stable"})")), ConfigError);
  EXPECT_THROW(parse_measure(json::parse(R"({"family":"stable","alpha":3})")), InvalidMeasureError);
  const auto tab = parse_measure(
      json::parse(R"({"family":"tabulated","r":[0.1,0.2,1],"tail":[10,5,0],"eta_at_first":0.1})"));
  EXPECT_EQ(tab.lower_bound(), 0.1);
}

TEST(Config, HashTracksContentOnly) {
  ExperimentConfig a, b;
  b.output = "elsewhere.csv";
  b.workers = 3;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Cli, EmptyGridIsAConfigError) {
  ExperimentConfig c = quick_config();
  c.a_grid.clear();
  const CommandRun r = run_command(c, "sweep");
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("a_grid"), std::string::npos);
}

TEST(Cli, UnknownFamilyAndSubcommand) {
  ExperimentConfig c = quick_config();
  c.measure = {{"family", "nope"}};
  EXPECT_EQ(run_command(c, "check-condition").code, kExitConfigError);
  EXPECT_EQ(run_command(quick_config(), "plot").code, kExitConfigError);
  c = quick_config();
  c.a_grid = {1.2};
  EXPECT_EQ(run_command(c, "couple").code, kExitConfigError);
}

TEST(Cli, OracleOnPowerLogIsRefused) {
  ExperimentConfig c = quick_config();
  c.measure = {{"family", "power_log"}, {"eps", 0.5}};
  const CommandRun r = run_command(c, "oracle-tv");
  EXPECT_EQ(r.code, kExitConfigError);
}

TEST(Cli, ProvenanceAndHeader) {
  ExperimentConfig c = quick_config();
  c.measure = {{"family", "power_log"}, {"eps", 0.5}};
  c.sato_alphas = {0.5, 1.0};
  const CommandRun r = run_command(c, "check-condition");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "# levycouple " LEVYCOUPLE_VERSION " config_hash=" + config_hash(c) +
                       " seed=1 subcommand=check-condition");
  EXPECT_EQ(ls[1], "measure,status,value,error_bound,local_exponent,sato_alpha,sato_holds,sato_liminf");
  const auto f = fields(ls[2]);
  EXPECT_EQ(f[0], "powerlog:eps=0.5");
  EXPECT_EQ(f[1], "Finite");
  EXPECT_NEAR(std::stod(f[2]), 2.0, 2e-4);
  EXPECT_EQ(f[5], "0.5|1");
  EXPECT_EQ(f[6], "0|0");
}

TEST(Cli, IdenticalConfigGivesIdenticalBytes) {
  ExperimentConfig c = quick_config();
  c.a_grid = {0.3};
  for (const char* sub : {"couple", "simulate", "sweep", "eta"}) {
    // simulate has no delta, so its truncation level must be fixed.
    if (std::string(sub) == "simulate") c.eps_rule = {EpsRule::Kind::kFixed, 0.005};
    const CommandRun first = run_command(c, sub);
    ExperimentConfig other = c;
    other.workers = 3;
    const CommandRun second = run_command(other, sub);
    ASSERT_EQ(first.code, kExitOk) << sub << first.err;
    EXPECT_EQ(first.out, second.out) << sub;
  }
}

TEST(Cli, CoupleRowsAndSummary) {
  ExperimentConfig c = quick_config();
  c.a_grid = {0.3};
  c.n = 50;
  const CommandRun r = run_command(c, "couple");
  ASSERT_EQ(r.code, kExitOk);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u + 50u + 1u);
  EXPECT_EQ(ls[1], "replication,coupled,tau_delta,tau_bar,z_at_tau_bar,max_z");
  EXPECT_EQ(fields(ls.back())[0], "summary");
}

TEST(Cli, SimulateModes) {
  ExperimentConfig c = quick_config();
  c.eps_rule = {EpsRule::Kind::kFixed, 0.05};
  c.n = 3;
  const CommandRun terminal = run_command(c, "simulate");
  EXPECT_EQ(lines(terminal.out)[1], "replication,x_T");
  EXPECT_EQ(lines(terminal.out).size(), 5u);
  c.simulate_mode = "paths";
  const CommandRun paths = run_command(c, "simulate");
  EXPECT_EQ(lines(paths.out)[1], "replication,t,x");
}

TEST(Cli, SweepTrendsDownwardOnStable) {
  ExperimentConfig c = quick_config();
  c.a_grid = {0.4, 0.2, 0.1, 0.05};
  c.n = 10000;
  const CommandRun r = run_command(c, "sweep");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 6u);
  EXPECT_EQ(fields(ls[1])[0], "a");
  for (std::size_t i = 3; i < ls.size(); ++i) {
    const auto prev = fields(ls[i - 1]), cur = fields(ls[i]);
    const double p0 = std::stod(prev[1]), s0 = std::stod(prev[2]);
    const double p1 = std::stod(cur[1]), s1 = std::stod(cur[2]);
    EXPECT_LE(p1, p0 + 2.0 * std::hypot(s0, s1)) << ls[i];
  }
}
