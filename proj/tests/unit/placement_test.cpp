#include "instances.hpp"

#include <edgeplace/placement.hpp>
#include <edgeplace/preprocess.hpp>
#include <edgeplace/rng.hpp>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <numeric>

namespace edgeplace {
namespace {

using ::testing::ElementsAre;

class Fig3 : public ::testing::Test {
protected:
  MergePlan plan = preprocess_workflow(testing::fig1_workflow());
  Environment env = testing::fig1_environment();
  Decoder decoder{plan.compressed, env};

  PlacementOutcome run(std::initializer_list<int> one_based) {
    return decoder.decode(particle_from_one_based(one_based));
  }
};

TEST_F(Fig3, StartingVectorsFeasible) {
  EXPECT_TRUE(run({1, 1, 3, 2, 3}).feasible);
  EXPECT_TRUE(run({2, 2, 3, 2, 3}).feasible);
  EXPECT_TRUE(run({1, 2, 3, 2, 3}).feasible);
}

TEST_F(Fig3, CrossoverChildOverloadsThirdDatacenter) {
  const PlacementOutcome o = run({2, 3, 3, 2, 3});
  EXPECT_FALSE(o.feasible);
  EXPECT_EQ(o.usage[2], 21 * kGigabyte);
  EXPECT_EQ(o.overload, 4 * kGigabyte); // t4 pulls ds4 in on top of the 21 GB
  EXPECT_FALSE(check_feasibility(o, env));
}

TEST_F(Fig3, MutatedVectorInfeasible) {
  const PlacementOutcome o = run({1, 3, 3, 2, 3});
  EXPECT_FALSE(o.feasible);
  EXPECT_EQ(o.usage[2], 21 * kGigabyte);
}

TEST_F(Fig3, StorageOnlyOverload) {
  const PlacementOutcome o = run({1, 2, 2, 2, 2});
  EXPECT_FALSE(o.feasible);
  EXPECT_EQ(o.usage[1], 24 * kGigabyte);
}

TEST_F(Fig3, TaskPlacementAndTotals) {
  const PlacementOutcome o = run({1, 1, 3, 2, 3});
  ASSERT_EQ(o.task_dc.size(), 5u);
  EXPECT_EQ(o.task_dc[0], dc_id(0)); // only input at the cloud
  EXPECT_EQ(o.task_dc[4], dc_id(2));
  const double sum = std::accumulate(o.transfers.begin(), o.transfers.end(), 0.0,
                                     [](double a, const Transfer& t) { return a + t.seconds; });
  EXPECT_DOUBLE_EQ(o.total_time_s, sum);
  Bytes stored = std::accumulate(o.usage.begin(), o.usage.end(), Bytes{0});
  EXPECT_EQ(stored, plan.compressed.total_size());
}

TEST(TransferTime, ThreeGigabytesOverTenMps) {
  const Environment env = testing::fig1_environment();
  EXPECT_DOUBLE_EQ(transfer_time(3 * kGigabyte, dc_id(0), dc_id(1), env), 300.0);
  EXPECT_DOUBLE_EQ(transfer_time(3 * kGigabyte, dc_id(1), dc_id(0), env), 300.0);
  EXPECT_EQ(transfer_time(3 * kGigabyte, dc_id(2), dc_id(2), env), 0.0);
  EXPECT_DOUBLE_EQ(transfer_time(15 * kGigabyte, dc_id(1), dc_id(2), env), 100.0);
}

TEST(Decode, EverythingOnOneDatacenterCostsNothing) {
  const Workflow w = testing::load_fixture("Montage_small");
  const Environment env = build_basic_environment(w);
  const Particle p{std::vector<DatacenterId>(w.dataset_count(), dc_id(0))};
  const PlacementOutcome o = Decoder(w, env).decode(p);
  EXPECT_TRUE(o.feasible);
  EXPECT_EQ(o.total_time_s, 0.0);
  EXPECT_TRUE(o.transfers.empty());
  for (DatacenterId dc : o.task_dc) EXPECT_EQ(dc, dc_id(0));
}

Workflow single_task(Bytes in, Bytes out) {
  std::vector<Dataset> ds(2);
  ds[0].id = dataset_id(0);
  ds[0].size = in;
  ds[1].id = dataset_id(1);
  ds[1].size = out;
  ds[1].source = DatasetSource::generated(task_id(0));
  Task t;
  t.id = task_id(0);
  t.inputs = {dataset_id(0)};
  t.outputs = {dataset_id(1)};
  return Workflow({t}, ds);
}

Environment two_dc(Bytes cap) {
  return Environment({{dc_id(0), Capacity::unlimited(), DatacenterKind::Cloud},
                      {dc_id(1), Capacity::bytes(cap), DatacenterKind::Edge}},
                     {{0, 1e6}, {1e6, 0}});
}

TEST(Feasibility, CapacityBoundaryIsInclusive) {
  const Workflow w = single_task(60, 40);
  const Particle both_edge{{dc_id(1), dc_id(1)}};
  EXPECT_TRUE(Decoder(w, two_dc(100)).decode(both_edge).feasible);
  const PlacementOutcome over = Decoder(w, two_dc(99)).decode(both_edge);
  EXPECT_FALSE(over.feasible);
  EXPECT_EQ(over.overload, 1u);
}

TEST(Feasibility, OutputsCountAtTheExecutingDatacenter) {
  // Task runs at dc1 next to its input; its output must fit there before it moves to the cloud.
  const Workflow w = single_task(60, 50);
  const Particle p{{dc_id(1), dc_id(0)}};
  const PlacementOutcome tight = Decoder(w, two_dc(100)).decode(p);
  EXPECT_FALSE(tight.feasible);
  EXPECT_EQ(tight.usage[1], 60u);
  EXPECT_EQ(tight.peak[1], 110u);
  EXPECT_TRUE(Decoder(w, two_dc(110)).decode(p).feasible);
}

TEST(Feasibility, CheckMatchesDecoder) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = testing::tiny_instance(seed);
    const Decoder d(inst.workflow, inst.environment);
    Rng rng(seed);
    for (int k = 0; k < 20; ++k) {
      Particle p;
      for (std::size_t i = 0; i < inst.workflow.dataset_count(); ++i)
        p.positions.push_back(dc_id(rng.below(inst.environment.size())));
      const PlacementOutcome o = d.decode(p);
      EXPECT_EQ(o.feasible, check_feasibility(o, inst.environment));
      EXPECT_EQ(o.feasible, o.overload == 0);
    }
  }
}

TEST(FitnessCompare, FeasibleFirstThenTime) {
  using std::weak_ordering;
  EXPECT_EQ(fitness_compare(Fitness{true, 100}, Fitness{false, 1}), weak_ordering::less);
  EXPECT_EQ(fitness_compare(Fitness{false, 1}, Fitness{true, 100}), weak_ordering::greater);
  EXPECT_EQ(fitness_compare(Fitness{true, 1}, Fitness{true, 2}), weak_ordering::less);
  EXPECT_EQ(fitness_compare(Fitness{false, 3}, Fitness{false, 2}), weak_ordering::greater);
  EXPECT_EQ(fitness_compare(Fitness{true, 2}, Fitness{true, 2}), weak_ordering::equivalent);
}

TEST(Decoder, RejectsBadInput) {
  const Workflow w = testing::fig1_workflow();
  const Environment env = testing::fig1_environment();
  EXPECT_THROW(Decoder(w, env, {task_id(0)}), ConfigError);
  EXPECT_THROW(Decoder(w, env, {task_id(4), task_id(3), task_id(2), task_id(1), task_id(1)}),
               ConfigError);
  const Decoder d(w, env);
  EXPECT_THROW(d.decode(particle_from_one_based({1, 1, 1})), ConfigError);
  EXPECT_THROW(d.decode(particle_from_one_based({1, 1, 1, 2, 3, 4})), ConfigError);
  EXPECT_THROW(particle_from_one_based({0}), ConfigError);
}

TEST(Decoder, AnyTopologicalOrderAccepted) {
  const Workflow w = testing::fig1_workflow();
  const Environment env = testing::fig1_environment();
  const std::vector<TaskId> rev{task_id(4), task_id(3), task_id(2), task_id(1), task_id(0)};
  const Particle p = particle_from_one_based({1, 1, 3, 2, 3, 3});
  EXPECT_EQ(decode_particle(p, w, env, rev).total_time_s, Decoder(w, env).decode(p).total_time_s);
}

TEST(Decoder, EvaluateAgreesWithDecode) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::tiny_instance(seed);
    const Decoder d(inst.workflow, inst.environment);
    Rng rng(seed + 1000);
    for (int k = 0; k < 10; ++k) {
      Particle p;
      for (std::size_t i = 0; i < inst.workflow.dataset_count(); ++i)
        p.positions.push_back(dc_id(rng.below(inst.environment.size())));
      const PlacementOutcome o = d.decode(p);
      const Evaluation e = d.evaluate(p);
      EXPECT_EQ(e.fitness.feasible, o.feasible);
      EXPECT_EQ(e.fitness.total_time_s, o.total_time_s);
      if (o.feasible) {
        EXPECT_TRUE(e.overloaded.empty());
      } else {
        ASSERT_EQ(e.overloaded.size(), inst.environment.size());
        for (std::size_t i = 0; i < inst.environment.size(); ++i)
          EXPECT_EQ(e.overloaded[i],
                    !inst.environment.datacenters()[i].capacity.admits(std::max(o.usage[i], o.peak[i])));
      }
    }
  }
}

TEST(Decoder, TimeScalesInverselyWithBandwidth) {
  const Workflow w = testing::load_fixture("LIGO_medium");
  const Environment basic = build_basic_environment(w);
  Rng rng(5);
  Particle p;
  for (std::size_t i = 0; i < w.dataset_count(); ++i) p.positions.push_back(dc_id(rng.below(4)));
  const PlacementOutcome base = Decoder(w, basic).decode(p);
  for (double lambda : {0.5, 0.8, 1.5, 3.0, 5.0}) {
    const Environment env = scale_environment(basic, 3, kBasicEdgeCapacityMultiplier, lambda, w);
    const PlacementOutcome o = Decoder(w, env).decode(p);
    EXPECT_NEAR(o.total_time_s, base.total_time_s / lambda, 1e-9 * base.total_time_s);
    EXPECT_EQ(o.task_dc, base.task_dc);
    ASSERT_EQ(o.transfers.size(), base.transfers.size());
    for (std::size_t k = 0; k < o.transfers.size(); ++k) {
      EXPECT_EQ(o.transfers[k].dataset, base.transfers[k].dataset);
      EXPECT_EQ(o.transfers[k].src, base.transfers[k].src);
      EXPECT_EQ(o.transfers[k].dst, base.transfers[k].dst);
    }
  }
}

TEST(RespectsFixed, DetectsMovedPrivateDataset) {
  const Workflow w = testing::fig1_workflow();
  EXPECT_TRUE(respects_fixed_positions(particle_from_one_based({1, 1, 3, 2, 3, 1}), w));
  EXPECT_FALSE(respects_fixed_positions(particle_from_one_based({1, 1, 3, 3, 3, 1}), w));
  EXPECT_FALSE(respects_fixed_positions(particle_from_one_based({1, 1, 3}), w));
}

TEST(Decode, TransfersListedInTaskOrder) {
  const Workflow w = testing::fig1_workflow();
  const Environment env = testing::fig1_environment();
  const PlacementOutcome o = Decoder(w, env).decode(particle_from_one_based({1, 1, 3, 2, 3, 3}));
  // t3 reads ds2 (cloud) and ds3 (dc3): pulling 3 GB to the cloud beats pushing 5 GB out.
  EXPECT_EQ(o.task_dc[2], dc_id(0));
  ASSERT_FALSE(o.transfers.empty());
  EXPECT_EQ(o.transfers.front().dataset, dataset_id(2));
  EXPECT_DOUBLE_EQ(o.transfers.front().seconds, 150.0);
}

} // namespace
} // namespace edgeplace
