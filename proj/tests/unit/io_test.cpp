#include "instances.hpp"

#include <edgeplace/io.hpp>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>

namespace edgeplace {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

constexpr const char* kMinimalDax = R"(<?xml version="1.0"?>
<adag xmlns="http://pegasus.isi.edu/schema/DAX" name="mini">
  <job id="A" name="split">
    <uses file="in.dat" link="input" size="100"/>
    <uses file="mid.dat" link="output" size="40"/>
  </job>
  <job id="B" name="merge">
    <uses file="mid.dat" link="input" size="40"/>
    <uses file="in.dat" link="input" size="100"/>
    <uses file="out.dat" link="output" size="7"/>
  </job>
  <child ref="B"><parent ref="A"/></child>
</adag>)";

TEST(ParseDax, MinimalDocument) {
  const Workflow w = parse_dax(kMinimalDax);
  ASSERT_EQ(w.task_count(), 2u);
  ASSERT_EQ(w.dataset_count(), 3u);
  EXPECT_EQ(w.dataset(dataset_id(0)).name, "in.dat");
  EXPECT_EQ(w.dataset(dataset_id(0)).size, 100u);
  EXPECT_TRUE(w.dataset(dataset_id(0)).source.is_initial());
  EXPECT_EQ(w.dataset(dataset_id(1)).source, DatasetSource::generated(task_id(0)));
  EXPECT_EQ(w.dataset(dataset_id(2)).source, DatasetSource::generated(task_id(1)));
  EXPECT_THAT(w.task(task_id(1)).inputs, ElementsAre(dataset_id(0), dataset_id(1)));
  EXPECT_EQ(w.task(task_id(1)).name, "merge");
  EXPECT_THAT(w.edges(), ElementsAre(std::pair{task_id(0), task_id(1)}));
  EXPECT_EQ(w.total_size(), 147u);
}

TEST(ParseDax, NameAttributeAndMissingSize) {
  const Workflow w = parse_dax(R"(<adag><job id="a">
      <uses name="x" link="input"/></job>
      <job id="b"><uses name="x" link="input" size="9"/></job></adag>)");
  EXPECT_EQ(w.dataset(dataset_id(0)).size, 9u);
}

struct BadDax {
  const char* label;
  const char* text;
  const char* message;
};

class ParseDaxErrors : public ::testing::TestWithParam<BadDax> {};

TEST_P(ParseDaxErrors, ThrowsDataError) {
  try {
    (void)parse_dax(GetParam().text);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_THAT(e.what(), HasSubstr(GetParam().message));
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, ParseDaxErrors,
    ::testing::Values(
        BadDax{"malformed", "<adag><job>", "malformed"},
        BadDax{"no_root", "<dag/>", "no <adag>"},
        BadDax{"no_jobs", "<adag/>", "no jobs"},
        BadDax{"no_uses", R"(<adag><job id="a"/></adag>)", "no <uses>"},
        BadDax{"bad_link", R"(<adag><job id="a"><uses file="f" link="inout"/></job></adag>)",
               "unsupported link"},
        BadDax{"negative",
               R"(<adag><job id="a"><uses file="f" link="input" size="-3"/></job></adag>)",
               "negative"},
        BadDax{"garbage_size",
               R"(<adag><job id="a"><uses file="f" link="input" size="3kb"/></job></adag>)",
               "malformed size"},
        BadDax{"size_conflict",
               R"(<adag><job id="a"><uses file="f" link="input" size="3"/></job>
                  <job id="b"><uses file="f" link="input" size="4"/></job></adag>)",
               "sizes"},
        BadDax{"two_producers",
               R"(<adag><job id="a"><uses file="f" link="output"/></job>
                  <job id="b"><uses file="f" link="output"/></job></adag>)",
               "more than one job"},
        BadDax{"duplicate_job",
               R"(<adag><job id="a"><uses file="f" link="input"/></job>
                  <job id="a"><uses file="g" link="input"/></job></adag>)",
               "duplicate job"},
        BadDax{"unknown_child",
               R"(<adag><job id="a"><uses file="f" link="input"/></job>
                  <child ref="z"><parent ref="a"/></child></adag>)",
               "unknown job"},
        BadDax{"unknown_parent",
               R"(<adag><job id="a"><uses file="f" link="input"/></job>
                  <child ref="a"><parent ref="q"/></child></adag>)",
               "unknown job"},
        BadDax{"self_loop",
               R"(<adag><job id="a"><uses file="f" link="input" size="1"/><uses file="g" link="input" size="1"/></job>
                  <child ref="a"><parent ref="a"/></child></adag>)",
               "itself"},
        BadDax{"data_cycle",
               R"(<adag><job id="a"><uses file="f" link="input"/><uses file="g" link="output"/></job>
                  <job id="b"><uses file="g" link="input"/><uses file="f" link="output"/></job></adag>)",
               "invalid DAX workflow"},
        BadDax{"input_is_output",
               R"(<adag><job id="a"><uses file="f" link="input"/><uses file="f" link="output"/></job></adag>)",
               "invalid DAX workflow"}),
    [](const auto& info) { return std::string(info.param.label); });

struct FixtureCount {
  const char* name;
  std::size_t datasets;
  double terabytes;
};

class LigoFixtures : public ::testing::TestWithParam<FixtureCount> {};

TEST_P(LigoFixtures, DatasetCountAndTotalSize) {
  const Workflow w = testing::load_fixture(GetParam().name);
  EXPECT_EQ(w.dataset_count(), GetParam().datasets);
  const double tb = static_cast<double>(w.total_size()) / static_cast<double>(kTerabyte);
  EXPECT_NEAR(tb, GetParam().terabytes, GetParam().terabytes * 0.01);
  EXPECT_TRUE(validate_workflow(w).empty());
}

INSTANTIATE_TEST_SUITE_P(Ligo, LigoFixtures,
                         ::testing::Values(FixtureCount{"LIGO_small", 47, 2.47},
                                           FixtureCount{"LIGO_medium", 77, 4.08},
                                           FixtureCount{"LIGO_large", 1501, 82.21}),
                         [](const auto& info) { return std::string(info.param.name); });

constexpr std::array<const char*, 15> kFixtures{
    "CyberShake_small", "CyberShake_medium", "CyberShake_large", "Epigenomics_small",
    "Epigenomics_medium", "Epigenomics_large", "LIGO_small", "LIGO_medium", "LIGO_large",
    "Montage_small", "Montage_medium", "Montage_large", "SIPHT_small", "SIPHT_medium",
    "SIPHT_large"};

class AllFixtures : public ::testing::TestWithParam<const char*> {};

TEST_P(AllFixtures, ValidAndJsonRoundTrips) {
  const Workflow w = testing::load_fixture(GetParam());
  EXPECT_TRUE(validate_workflow(w).empty());
  EXPECT_NO_THROW((void)topological_order(w));
  const std::string json = workflow_to_json(w);
  const Workflow back = parse_workflow_json(json);
  EXPECT_EQ(back, w);
  EXPECT_EQ(workflow_to_json(back), json);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, AllFixtures, ::testing::ValuesIn(kFixtures),
                         [](const auto& info) { return std::string(info.param); });

TEST(WorkflowJson, KeepsFixedPlacementAndNames) {
  const Workflow w = testing::fig1_workflow();
  const Workflow back = parse_workflow_json(workflow_to_json(w));
  EXPECT_EQ(back, w);
  EXPECT_EQ(back.dataset(dataset_id(3)).placement, PlacementClass::fixed(dc_id(1)));
  const auto doc = nlohmann::json::parse(workflow_to_json(w));
  EXPECT_TRUE(doc["datasets"][0]["fixed_dc"].is_null());
  EXPECT_EQ(doc["datasets"][5]["generator"], 4);
}

TEST(WorkflowJson, RejectsBadDocuments) {
  EXPECT_THROW(parse_workflow_json("{"), DataError);
  EXPECT_THROW(parse_workflow_json("[]"), DataError);
  EXPECT_THROW(parse_workflow_json(R"({"tasks":[]})"), DataError);
  EXPECT_THROW(parse_workflow_json(R"({"tasks":[],"datasets":[{"id":0,"name":"a"}]})"),
               DataError);
  EXPECT_THROW(parse_workflow_json(
                   R"({"tasks":[],"datasets":[{"id":0,"name":"a","size_bytes":-1}]})"),
               DataError);
  EXPECT_THROW(parse_workflow_json(
                   R"({"tasks":[],"datasets":[{"id":1,"name":"a","size_bytes":1}]})"),
               DataError);
}

TEST(EnvironmentJson, RoundTrip) {
  const Environment env = testing::fig1_environment();
  const std::string json = environment_to_json(env);
  EXPECT_EQ(parse_environment_json(json), env);
  const auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["datacenters"][0]["capacity_bytes"], "unlimited");
  EXPECT_EQ(doc["datacenters"][1]["kind"], "edge");
  EXPECT_EQ(doc["bandwidth_mbps"][1][2], 150.0);
}

TEST(EnvironmentJson, RejectsBadDocuments) {
  EXPECT_THROW(parse_environment_json("nope"), DataError);
  EXPECT_THROW(parse_environment_json(R"({"datacenters":[]})"), DataError);
  // asymmetric link
  EXPECT_THROW(parse_environment_json(R"({"datacenters":[
      {"id":0,"kind":"cloud","capacity_bytes":"unlimited"},
      {"id":1,"kind":"edge","capacity_bytes":10}],
      "bandwidth_mbps":[[0,1],[2,0]]})"),
               DataError);
  EXPECT_THROW(parse_environment_json(R"({"datacenters":[
      {"id":0,"kind":"fog","capacity_bytes":"unlimited"},
      {"id":1,"kind":"edge","capacity_bytes":10}],
      "bandwidth_mbps":[[0,1],[1,0]]})"),
               DataError);
}

TEST(LoadWorkflowFile, SniffsJson) {
  const auto dir = std::filesystem::temp_directory_path() / "edgeplace_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "fig1.json";
  {
    std::ofstream out(path);
    out << "\n  " << workflow_to_json(testing::fig1_workflow());
  }
  EXPECT_EQ(load_workflow_file(path), testing::fig1_workflow());
  EXPECT_THROW((void)load_workflow_file(dir / "missing.dax"), DataError);
  std::filesystem::remove_all(dir);
}

TEST(OutcomeJson, ListsPlacementAndTransfers) {
  const Workflow w = testing::fig1_workflow();
  const Environment env = testing::fig1_environment();
  const Particle p = particle_from_one_based({1, 1, 3, 2, 3, 3});
  const auto doc = nlohmann::json::parse(outcome_to_json(Decoder(w, env).decode(p), p));
  EXPECT_TRUE(doc.contains("feasible"));
  EXPECT_EQ(doc["placement"].size(), 6u);
  EXPECT_EQ(doc["task_dc"].size(), 5u);
  EXPECT_GT(doc["total_time_s"].get<double>(), 0.0);
}

TEST(MergePlanJson, ReportsCounts) {
  const auto doc = nlohmann::json::parse(merge_plan_to_json(preprocess_workflow(testing::fig1_workflow())));
  EXPECT_EQ(doc["original_datasets"], 6);
  EXPECT_EQ(doc["compressed_datasets"], 5);
  EXPECT_EQ(doc["merges"].size(), 1u);
}

} // namespace
} // namespace edgeplace
