#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "msqp/config.hpp"

using namespace msqp;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, DefaultsCarryDeviceParameters) {
  const ExperimentConfig c = default_config("cz_sweep");
  EXPECT_EQ(c.q1.spin, 10.0);
  EXPECT_EQ(c.q1.d_ghz, 7.1);
  EXPECT_EQ(c.q2.d_ghz, 7.7);
  EXPECT_EQ(c.q1.g_coupling_mhz, 0.090);
  EXPECT_EQ(c.field_mt, 50.0);
  EXPECT_EQ(c.omega0_ghz, 7.5);
  EXPECT_EQ(c.t2_us, (std::vector<double>{10, 50, 100, 200, 400, 1000}));
  EXPECT_EQ(c.quality, (std::vector<double>{1e5, 1e6, 1e7}));
  EXPECT_NO_THROW(c.validate());
  for (const auto& name : scenario_names()) EXPECT_NO_THROW(default_config(name).validate());
  EXPECT_THROW(default_config("nope"), ConfigError);
}

TEST(Config, MinimalFileEqualsDefaults) {
  EXPECT_EQ(parse("# only the scenario\nscenario = heisenberg\n"), default_config("heisenberg"));
}

TEST(Config, EmitParseRoundTrip) {
  for (const auto& name : scenario_names()) {
    ExperimentConfig c = default_config(name);
    c.delta1_mhz = 0.1 + 0.2;  // not exactly representable in short decimal form
    c.rwa = true;
    std::ostringstream out;
    emit_config(out, c);
    EXPECT_EQ(parse(out.str()), c) << name;
  }
}

TEST(Config, ListsAndInfinity) {
  const ExperimentConfig c = parse("scenario = tim\ntb = linspace(0, 1, 5)\nQ = inf, 1e6\n");
  ASSERT_EQ(c.tb.size(), 5u);
  EXPECT_DOUBLE_EQ(c.tb[1], 0.25);
  EXPECT_DOUBLE_EQ(c.tb.back(), 1.0);
  EXPECT_TRUE(std::isinf(c.quality[0]));
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("scenario = tim\n\nbogus = 1\n").find(":3"), std::string::npos);
  EXPECT_NE(error_of("scenario = tim\nQ = 1e6\nQ = 1e7\n").find(":3"), std::string::npos);
  EXPECT_FALSE(error_of("T2_us = 10\n").empty());
  EXPECT_FALSE(error_of("scenario = tim\nn_max = two\n").empty());
}

TEST(Config, NonPhysicalValuesRejected) {
  EXPECT_FALSE(error_of("scenario = cz_sweep\nQ = 0\n").empty());
  EXPECT_FALSE(error_of("scenario = cz_sweep\nT2_us = -5\n").empty());
  EXPECT_FALSE(error_of("scenario = deutsch_jozsa\nb1_gauss = 0\n").empty());
  EXPECT_FALSE(error_of("scenario = heisenberg\nmethods = magic\n").empty());
  EXPECT_FALSE(error_of("scenario = deutsch_jozsa\noracles = 5\n").empty());
  EXPECT_FALSE(error_of("scenario = tim\nintegrator = euler\n").empty());
}

TEST(Config, ShippedConfigsMatchDefaults) {
  for (const auto& name : scenario_names()) {
    const ExperimentConfig c = load_config(std::string(MSQP_CONFIG_DIR) + "/" + name + ".cfg");
    EXPECT_EQ(c, default_config(name)) << name;
  }
}
