#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "lambdasim/scenario.hpp"

using namespace lambdasim;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

ScenarioConfig small_run() {
  ScenarioConfig c = parse(
      "n = 3\np = 2\nomega = 0.3\nkappa = 0.1\ngamma0 = 0.05\n"
      "initial_state = zp1\nt_max = 2\nrecord_interval = 0.5\npopulations = zp1, zp0\n");
  finalize_config(c);
  return c;
}

}  // namespace

TEST(Scenario, ParsesKeysAndComments) {
  const ScenarioConfig c = parse(
      "# header\n\n n = 20 \np=3 # trailing\nomega_ratio = 0.1\nkappa = 0.1\n"
      "representation = symmetric\npopulations = zp0, sc:1.0.0\nratio_grid = 0.01:0.05:0.01\n");
  EXPECT_EQ(c.params.n, 20);
  EXPECT_EQ(c.params.p, 3);
  ASSERT_TRUE(c.omega_ratio.has_value());
  EXPECT_DOUBLE_EQ(*c.omega_ratio, 0.1);
  EXPECT_EQ(c.populations, (std::vector<std::string>{"zp0", "sc:1.0.0"}));
  EXPECT_EQ(c.ratio_grid.size(), 5u);
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  EXPECT_NE(config_error("n = 3\nbogus = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(config_error("n = 3\n\nn = 4\n").find("line 3"), std::string::npos);
  EXPECT_NE(config_error("kappa = fast\n").find("line 1"), std::string::npos);
  EXPECT_NE(config_error("n 3\n").find("line 1"), std::string::npos);
  EXPECT_FALSE(config_error("n = 2.5\n").empty());
  EXPECT_FALSE(config_error("representation = dense\n").empty());
}

TEST(Scenario, OverridesReplaceValues) {
  ScenarioConfig c = parse("n = 3\nkappa = 0.1\n");
  apply_override(c, "kappa=0.25");
  apply_override(c, " p = 1 ");
  EXPECT_DOUBLE_EQ(c.params.kappa, 0.25);
  EXPECT_EQ(c.params.p, 1);
  EXPECT_THROW(apply_override(c, "kappa"), ConfigError);
  EXPECT_THROW(apply_override(c, "nope=1"), ConfigError);
}

TEST(Scenario, FinalizeChecksCrossFieldConstraints) {
  ScenarioConfig c = parse("n = 4\np = 3\ngamma10 = 0.05\n");
  EXPECT_THROW(finalize_config(c), ConfigError);
  c = parse("n = 9\np = 3\nrepresentation = full\n");
  EXPECT_THROW(finalize_config(c), ConfigError);
  c = parse("n = 4\np = 3\ndt = 0.5\n");
  EXPECT_THROW(finalize_config(c), ConfigError);
  c = parse("n = 4\np = 3\ninitial_state = sc:9.0.0\n");
  EXPECT_THROW(finalize_config(c), std::exception);
  c = parse("n = 4\np = 3\nomega_ratio = 0.1\ndelta_ratio = 0.2\n");
  finalize_config(c);
  EXPECT_NEAR(c.params.omega, 0.2, 1e-15);
  EXPECT_NEAR(c.params.delta, 0.4, 1e-15);
}

TEST(Scenario, ParseGrid) {
  const auto g = parse_grid("0.01:0.20:0.01");
  ASSERT_EQ(g.size(), 20u);
  EXPECT_NEAR(g.front(), 0.01, 1e-15);
  EXPECT_NEAR(g.back(), 0.20, 1e-12);
  EXPECT_EQ(parse_grid("0.1, 0.3"), (std::vector<double>{0.1, 0.3}));
  EXPECT_THROW(parse_grid("1:0:0.1"), std::invalid_argument);
  EXPECT_FALSE(config_error("ratio_grid = 0.1:x:0.1\n").empty());
}

TEST(Scenario, RevivalHeight) {
  const std::vector<double> falling{3.0, 2.0, 1.0};
  const std::vector<double> rising{1.0, 2.0, 3.0};
  const std::vector<double> dip{3.0, 1.0, 2.0};
  const std::vector<double> two_dips{3.0, 2.0, 2.5, 0.5, 1.5, 1.0};
  EXPECT_EQ(revival_height(falling), 0.0);
  EXPECT_EQ(revival_height(rising), 0.0);
  EXPECT_DOUBLE_EQ(revival_height(dip), 1.0);
  EXPECT_DOUBLE_EQ(revival_height(two_dips), 1.0);
}

TEST(Scenario, RunIsDeterministicAndCsvIsWellFormed) {
  const ScenarioConfig c = small_run();
  std::ostringstream a, b;
  write_trajectory_csv(a, run(c));
  write_trajectory_csv(b, run(c));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "t_g,E_N,purity,trace_dev,min_eig,P[zp1],P[zp0]");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Scenario, VacuumRunStaysPureAndUnentangled) {
  ScenarioConfig c = small_run();
  c.initial_state = "vacuum";
  c.populations.clear();
  const Trajectory tr = run(c);
  for (const auto& r : tr.records) {
    EXPECT_EQ(r.log_negativity, 0.0);
    EXPECT_NEAR(r.purity, 1.0, 1e-14);
  }
}

TEST(Scenario, ScanNeedsThreePoints) {
  ScenarioConfig c = small_run();
  EXPECT_THROW(scan_ratio(c, {0.1, 0.2}, 1), ConfigError);
}

TEST(Scenario, InspectDarkAtZeroExcitations) {
  ScenarioConfig c = parse("n = 3\np = 0\n");
  EXPECT_NE(inspect_dark(c).find("zero_energy_dimension = 1"), std::string::npos);
}

TEST(Scenario, ShippedConfigsLoad) {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LAMBDASIM_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    SCOPED_TRACE(entry.path().string());
    ScenarioConfig c = load_config(entry.path().string());
    EXPECT_NO_THROW(finalize_config(c));
    ++count;
  }
  EXPECT_GE(count, 10);
}
