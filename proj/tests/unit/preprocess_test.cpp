#include "instances.hpp"

#include <edgeplace/preprocess.hpp>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

namespace edgeplace {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

Task make_task(std::size_t id, std::vector<std::size_t> in, std::vector<std::size_t> out) {
  Task t;
  t.id = task_id(id);
  for (auto d : in) t.inputs.push_back(dataset_id(d));
  for (auto d : out) t.outputs.push_back(dataset_id(d));
  return t;
}

std::vector<Dataset> make_datasets(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> gen) {
  std::vector<Dataset> ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds[i].id = dataset_id(i);
    ds[i].name = "d" + std::to_string(i);
    ds[i].size = (i + 1) * 10;
  }
  for (auto [d, t] : gen) ds[d].source = DatasetSource::generated(task_id(t));
  return ds;
}

TEST(CutEdges, Fig1MergesLastPair) {
  const Workflow w = testing::fig1_workflow();
  EXPECT_THAT(find_cut_edge_pairs(w), ElementsAre(std::pair{dataset_id(4), dataset_id(5)}));
}

TEST(Preprocess, Fig1CompressedDataset) {
  const MergePlan plan = preprocess_workflow(testing::fig1_workflow());
  ASSERT_EQ(plan.compressed.dataset_count(), 5u);
  ASSERT_EQ(plan.merges.size(), 1u);
  EXPECT_EQ(plan.merges[0].merged_id, dataset_id(4));
  EXPECT_THAT(plan.merges[0].constituents, ElementsAre(dataset_id(4), dataset_id(5)));
  const Dataset& m = plan.compressed.dataset(dataset_id(4));
  EXPECT_EQ(m.size, 13 * kGigabyte);
  EXPECT_EQ(m.placement, PlacementClass::fixed(dc_id(2)));
  EXPECT_EQ(m.name, "ds5+ds6");
  EXPECT_TRUE(m.source.is_initial());
  EXPECT_THAT(plan.compressed.task(task_id(4)).inputs, ElementsAre(dataset_id(4)));
  EXPECT_THAT(plan.compressed.task(task_id(4)).outputs, IsEmpty());
  EXPECT_THAT(plan.compressed_of, ElementsAre(dataset_id(0), dataset_id(1), dataset_id(2),
                                              dataset_id(3), dataset_id(4), dataset_id(4)));
  EXPECT_TRUE(validate_workflow(plan.compressed, testing::fig1_environment()).empty());
}

TEST(CutEdges, ChainCollapsesToOneDataset) {
  // d0 -t0-> d1 -t1-> d2 -t2-> d3
  const Workflow w({make_task(0, {0}, {1}), make_task(1, {1}, {2}), make_task(2, {2}, {3})},
                   make_datasets(4, {{1, 0}, {2, 1}, {3, 2}}));
  EXPECT_THAT(find_cut_edge_pairs(w), ElementsAre(std::pair{dataset_id(0), dataset_id(1)},
                                                  std::pair{dataset_id(2), dataset_id(3)}));
  const MergePlan plan = preprocess_workflow(w);
  EXPECT_EQ(plan.compressed.dataset_count(), 1u);
  EXPECT_EQ(plan.compressed.dataset(dataset_id(0)).size, 100u);
  EXPECT_THAT(plan.merges[0].constituents,
              ElementsAre(dataset_id(0), dataset_id(1), dataset_id(2), dataset_id(3)));
}

TEST(CutEdges, NoPairWhenTaskHasTwoInputs) {
  const Workflow w({make_task(0, {0, 1}, {2})}, make_datasets(3, {{2, 0}}));
  EXPECT_THAT(find_cut_edge_pairs(w), IsEmpty());
}

TEST(CutEdges, NoPairWhenTaskHasTwoOutputs) {
  const Workflow w({make_task(0, {0}, {1, 2})}, make_datasets(3, {{1, 0}, {2, 0}}));
  EXPECT_THAT(find_cut_edge_pairs(w), IsEmpty());
}

TEST(CutEdges, NoPairWhenInputFeedsTwoProducers) {
  const Workflow w({make_task(0, {0}, {1}), make_task(1, {0}, {2})},
                   make_datasets(3, {{1, 0}, {2, 1}}));
  EXPECT_THAT(find_cut_edge_pairs(w), IsEmpty());
}

TEST(CutEdges, DeadEndConsumerDoesNotBlock) {
  const Workflow w({make_task(0, {0}, {1}), make_task(1, {0}, {})}, make_datasets(2, {{1, 0}}));
  EXPECT_THAT(find_cut_edge_pairs(w), ElementsAre(std::pair{dataset_id(0), dataset_id(1)}));
  const MergePlan plan = preprocess_workflow(w);
  EXPECT_THAT(plan.compressed.task(task_id(1)).inputs, ElementsAre(dataset_id(0)));
}

TEST(CutEdges, BothFixedIsNotMerged) {
  auto ds = make_datasets(2, {{1, 0}});
  ds[0].placement = PlacementClass::fixed(dc_id(1));
  ds[1].placement = PlacementClass::fixed(dc_id(2));
  const Workflow w({make_task(0, {0}, {1})}, ds);
  EXPECT_THAT(find_cut_edge_pairs(w), IsEmpty());
}

TEST(Preprocess, ConsumersOfOutputAreRemapped) {
  // d0 -t0-> d1; t1 reads d1 and d2
  const Workflow w({make_task(0, {0}, {1}), make_task(1, {1, 2}, {})},
                   make_datasets(3, {{1, 0}}));
  const MergePlan plan = preprocess_workflow(w);
  ASSERT_EQ(plan.compressed.dataset_count(), 2u);
  EXPECT_THAT(plan.compressed.task(task_id(1)).inputs, ElementsAre(dataset_id(0), dataset_id(1)));
  EXPECT_EQ(plan.compressed.dataset(dataset_id(1)).name, "d2");
}

TEST(Preprocess, Idempotent) {
  for (const char* name : {"Epigenomics_medium", "Montage_medium", "SIPHT_small"}) {
    const MergePlan once = preprocess_workflow(testing::load_fixture(name));
    const MergePlan twice = preprocess_workflow(once.compressed);
    EXPECT_EQ(twice.compressed, once.compressed) << name;
    EXPECT_THAT(twice.merges, IsEmpty()) << name;
  }
}

class FixturePreprocess : public ::testing::TestWithParam<const char*> {};

TEST_P(FixturePreprocess, ConservesSizeAndValidity) {
  const Workflow w = testing::load_fixture(GetParam());
  const MergePlan plan = preprocess_workflow(w);
  EXPECT_EQ(plan.compressed.total_size(), w.total_size());
  EXPECT_LE(plan.compressed.dataset_count(), w.dataset_count());
  EXPECT_THAT(validate_workflow(plan.compressed), IsEmpty());
  EXPECT_EQ(plan.compressed.task_count(), w.task_count());
  std::size_t merged = 0;
  for (const auto& m : plan.merges) {
    merged += m.constituents.size() - 1;
    Bytes sum = 0;
    for (DatasetId d : m.constituents) sum += w.dataset(d).size;
    EXPECT_EQ(plan.compressed.dataset(m.merged_id).size, sum);
  }
  EXPECT_EQ(w.dataset_count() - merged, plan.compressed.dataset_count());
}

INSTANTIATE_TEST_SUITE_P(Fixtures, FixturePreprocess,
                         ::testing::Values("CyberShake_medium", "Epigenomics_small",
                                           "Epigenomics_medium", "LIGO_medium", "Montage_medium",
                                           "SIPHT_medium", "Montage_large"));

TEST(Preprocess, EpigenomicsCounts) {
  EXPECT_EQ(preprocess_workflow(testing::load_fixture("Epigenomics_small")).compressed.dataset_count(), 29u);
  EXPECT_EQ(preprocess_workflow(testing::load_fixture("Epigenomics_medium")).compressed.dataset_count(), 50u);
  EXPECT_EQ(preprocess_workflow(testing::load_fixture("Epigenomics_large")).compressed.dataset_count(), 1016u);
}

TEST(Preprocess, MontageShrinks) {
  const Workflow w = testing::load_fixture("Montage_medium");
  EXPECT_LT(preprocess_workflow(w).compressed.dataset_count(), w.dataset_count());
}

TEST(Preprocess, PrivateDatasetsStayPinned) {
  const Workflow base = testing::load_fixture("Epigenomics_medium");
  const Workflow w = assign_private_datasets(base, 0.25, {dc_id(1), dc_id(2), dc_id(3)}, 7);
  const MergePlan plan = preprocess_workflow(w);
  for (std::size_t d = 0; d < w.dataset_count(); ++d) {
    const auto& fixed = w.dataset(dataset_id(d)).placement;
    if (fixed.is_fixed())
      EXPECT_EQ(plan.compressed.dataset(plan.compressed_of[d]).placement, fixed);
  }
}

TEST(Expand, PositionsAndMap) {
  const MergePlan plan = preprocess_workflow(testing::fig1_workflow());
  const std::vector<DatacenterId> c{dc_id(0), dc_id(1), dc_id(2), dc_id(1), dc_id(2)};
  EXPECT_THAT(expand_positions(plan, c),
              ElementsAre(dc_id(0), dc_id(1), dc_id(2), dc_id(1), dc_id(2), dc_id(2)));
  EXPECT_THROW(expand_positions(plan, {dc_id(0)}), ConfigError);

  std::map<DatasetId, DatacenterId> m;
  for (std::size_t i = 0; i < c.size(); ++i) m[dataset_id(i)] = c[i];
  const auto full = expand_placement(plan, m);
  EXPECT_EQ(full.size(), 6u);
  EXPECT_EQ(full.at(dataset_id(5)), dc_id(2));
  m.erase(dataset_id(4));
  EXPECT_THROW(expand_placement(plan, m), ConfigError);
}

} // namespace
} // namespace edgeplace
