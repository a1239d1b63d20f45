#include <gtest/gtest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include <virann/suites.hpp>

using namespace virann;
using nlohmann::json;

namespace {

json load_schema(const std::string& name) {
  std::ifstream in(std::string(VIRANN_SCHEMA_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return json::parse(in);
}

}  // namespace

TEST(Suites, ConfigDefaults) {
  const SuiteConfig c = config_from_json(json::object());
  EXPECT_EQ(c.module.c, 2.0);
  EXPECT_EQ(c.module.h, 0.5);
  EXPECT_EQ(c.module.N, 12);
  EXPECT_EQ(c.seed, 1u);
  EXPECT_TRUE(c.suites.empty());
}

TEST(Suites, ConfigRejectsBadInput) {
  EXPECT_THROW(config_from_json(json{{"suites", {"bracket", "nosuch"}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"tol", -1.0}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"module", {{"N", 40}}}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"extra", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"seed", "one"}}), ConfigError);
  EXPECT_THROW(config_from_json(json{{"threads", -2}}), ConfigError);
  EXPECT_EQ(config_from_json(json{{"threads", 2}}).threads, 2);
  EXPECT_THROW(config_from_json(json::array()), ConfigError);
}

TEST(Suites, SchemaMatchesParser) {
  const json s = load_schema("run_config.schema.json");
  const auto names = s.at("properties").at("suites").at("items").at("enum").get<std::vector<std::string>>();
  EXPECT_EQ(names, known_suites());
  const json& N = s.at("properties").at("module").at("properties").at("N");
  EXPECT_EQ(N.at("minimum").get<int>(), 8);
  EXPECT_EQ(N.at("maximum").get<int>(), 16);
  EXPECT_FALSE(s.at("additionalProperties").get<bool>());
  for (const auto& d : default_suites()) EXPECT_NE(std::find(names.begin(), names.end(), d), names.end());
}

TEST(Suites, ReportSchemaColumns) {
  const json s = load_schema("report.schema.json");
  const auto req = s.at("properties").at("checks").at("items").at("required").get<std::vector<std::string>>();
  EXPECT_EQ(req, (std::vector<std::string>{"id", "anchor", "residual", "bound", "relation", "pass"}));
}

TEST(Suites, CheapSuitesPassAndAreDeterministic) {
  SuiteConfig cfg;
  cfg.module = {2.0, 0.5, 8};
  cfg.suites = {"bracket", "gram", "mobius", "energy"};
  cfg.threads = 2;
  const Report a = run_suites(cfg);
  const Report b = run_suites(cfg);
  EXPECT_TRUE(a.all_pass());
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
  EXPECT_EQ(report_to_csv(a), report_to_csv(b));
  const std::string csv = report_to_csv(a, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,anchor,residual,bound,pass,seconds");
  EXPECT_EQ(a.rows.front().id, "bracket.commutator");
}

TEST(Suites, LooseToleranceIsReported) {
  SuiteConfig cfg;
  cfg.module = {2.0, 0.5, 8};
  cfg.tol = 1e-3;
  cfg.suites = {"standard"};
  const Report r = run_suites(cfg);
  EXPECT_FALSE(r.all_pass());
}

TEST(Suites, UnknownSuiteThrows) {
  const ModuleData m = build_module({2.0, 0.5, 8});
  EXPECT_THROW(run_suite("nosuch", m, SuiteConfig{}), ConfigError);
}
