#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "schedsim/completion.hpp"
#include "schedsim/error.hpp"

namespace schedsim {
namespace {

DelayTrace constant_trace(int n, int positions, double comp, double comm) {
  return DelayTrace(n, positions, std::vector<double>(n * positions, comp), std::vector<double>(n * positions, comm));
}

DelayModel scenario_one(int n) {
  Rng rng(1);
  return scenario_preset(Scenario::One, n, rng);
}

TEST(Arrivals, CyclicTwoByTwo) {
  const auto trace = constant_trace(2, 2, 1.0, 0.5);
  const auto at = arrival_times(cyclic_schedule(2, 2), trace);
  EXPECT_EQ(at.at(0, 1), 1.5);
  EXPECT_EQ(at.at(0, 2), 2.5);
  EXPECT_EQ(at.at(1, 2), 1.5);
  EXPECT_EQ(at.at(1, 1), 2.5);
  EXPECT_EQ(at.per_task[0], 1.5);
  EXPECT_EQ(at.per_task[1], 1.5);
}

TEST(Arrivals, ChainSumsComputationPrefix) {
  // Row [3,2,1]: task 1 sits at the third position.
  const TaskOrderMatrix m({{1, 2, 3}, {3, 2, 1}, {2, 3, 1}});
  DelayTrace trace(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      trace.comp(i, j) = 1.0 + i + 0.1 * j;
      trace.comm(i, j) = 0.01 * (j + 1);
    }
  const auto at = arrival_times(m, trace);
  EXPECT_DOUBLE_EQ(at.at(1, 1), trace.comp(1, 0) + trace.comp(1, 1) + trace.comp(1, 2) + trace.comm(1, 2));
  EXPECT_TRUE(is_never(arrival_times(cyclic_schedule(3, 1), trace).at(0, 2)));
}

TEST(Arrivals, SingleTask) {
  DelayTrace trace(1, 1, {0.7}, {0.2});
  EXPECT_DOUBLE_EQ(completion_time(TaskOrderMatrix({{1}}), trace, 1), 0.9);
}

TEST(Completion, Examples) {
  const auto trace = constant_trace(2, 2, 1.0, 0.5);
  EXPECT_EQ(completion_time(cyclic_schedule(2, 2), trace, 2), 1.5);
  EXPECT_THROW(completion_time(TaskOrderMatrix({{1}, {1}}), constant_trace(2, 1, 1, 1), 2), InfeasibleTarget);
}

TEST(Completion, KEqualsOneIsFirstArrival) {
  const auto model = scenario_one(5);
  Rng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const auto trace = sample_trace(model, 3, rng);
    const auto m = staircase_schedule(5, 3);
    const auto at = arrival_times(m, trace);
    EXPECT_EQ(completion_time(m, trace, 1), *std::min_element(at.per_task.begin(), at.per_task.end()));
  }
}

TEST(FirstKDistinct, CyclicTwoByTwo) {
  const auto got = first_k_distinct(cyclic_schedule(2, 2), constant_trace(2, 2, 1.0, 0.5), 2);
  EXPECT_EQ(got.tasks, (std::vector<int>{1, 2}));
  EXPECT_EQ(got.completion, 1.5);
}

TEST(Wasted, CountsComputationsFinishingLate) {
  const auto trace = constant_trace(2, 2, 1.0, 0.5);
  // Computation stages finish at 1 and 2 on each worker.
  EXPECT_EQ(wasted_computations(trace, 2, 1.5), 2);
  EXPECT_EQ(wasted_computations(trace, 2, 2.0), 0);
  EXPECT_EQ(wasted_computations(trace, 1, 0.5), 2);
}

TEST(LowerBound, Examples) {
  const auto trace = constant_trace(2, 2, 1.0, 0.5);
  EXPECT_EQ(lower_bound_completion(trace, 2), 1.5);
  EXPECT_EQ(lower_bound_completion(trace, 1, 1), 1.5);
}

TEST(LowerBound, LoadOneMatchesAnyDistinctFirstColumn) {
  const auto model = scenario_one(6);
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const auto trace = sample_trace(model, 1, rng);
    for (int k = 1; k <= 6; ++k)
      EXPECT_EQ(lower_bound_completion(trace, k, 1), completion_time(cyclic_schedule(6, 1), trace, k));
  }
}

TEST(Coded, Examples) {
  auto trace = constant_trace(4, 2, 1.0, 0.5);
  EXPECT_EQ(pc_completion(trace, 4, 2), 2.5);
  EXPECT_THROW(pc_completion(trace, 4, 1), Infeasible);

  // Third smallest of four worker times.
  DelayTrace varied(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) varied.comp(i, j) = 1.0 + i, varied.comm(i, j) = 0.0;
  EXPECT_EQ(pc_completion(varied, 4, 2), 6.0);

  EXPECT_EQ(pcmm_completion(constant_trace(2, 2, 1.0, 0.0), 2, 2), 2.0);
  // Seventh of the eight arrivals {1,2, 2,4, 3,6, 4,8}.
  EXPECT_EQ(pcmm_completion(varied, 4, 2), 6.0);
  // n = 1, r = 2: first of two arrivals.
  EXPECT_EQ(pcmm_completion(DelayTrace(1, 2, {1.0, 1.0}, {5.0, 0.5}), 1, 2), 2.5);
}

TEST(Coded, PcAtFullLoadIsFastestWorker) {
  DelayTrace trace(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) trace.comp(i, j) = 1.0 + i, trace.comm(i, j) = 0.1;
  EXPECT_DOUBLE_EQ(pc_completion(trace, 3, 3), 3.1);
}

// The genie bound uses the per-position communication delay of every
// computation, whereas the coded baseline sends once using the first
// position's communication delay. A trace with a cheap first message and
// expensive later ones puts the baseline below the bound.
TEST(LowerBound, CanExceedSingleMessageCodedBaseline) {
  DelayTrace trace(2, 2, {1.0, 1.0, 5.0, 5.0}, {0.0, 100.0, 0.0, 100.0});
  EXPECT_EQ(pc_completion(trace, 2, 2), 2.0);
  EXPECT_EQ(lower_bound_completion(trace, 2, 2), 5.0);
}

class TraceProperties : public ::testing::TestWithParam<int> {};

TEST_P(TraceProperties, DominanceMonotonicityAndRelabeling) {
  const int n = GetParam();
  const auto model = scenario_one(n);
  Rng rng(1000 + n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  for (int rep = 0; rep < 300; ++rep) {
    const auto trace = sample_trace(model, n, rng);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int r = 1; r <= n; ++r) {
      const auto cs = cyclic_schedule(n, r);
      const auto ss = staircase_schedule(n, r);
      // Relabel tasks by perm.
      std::vector<int> relabeled;
      for (int v : cs.entries()) relabeled.push_back(perm[v - 1]);
      const TaskOrderMatrix cs_relabeled(n, r, relabeled);

      double prev_cs = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double lb = lower_bound_completion(trace, k, r);
        const double tcs = completion_time(cs, trace, k);
        const double tss = completion_time(ss, trace, k);
        EXPECT_LE(lb, tcs);
        EXPECT_LE(lb, tss);
        EXPECT_GE(tcs, prev_cs);
        prev_cs = tcs;
        EXPECT_EQ(tcs, completion_time(cs_relabeled, trace, k));
        if (r < n) {
          // Adding a column only adds arrival opportunities.
          EXPECT_LE(completion_time(cyclic_schedule(n, r + 1), trace, k), tcs);
          EXPECT_LE(completion_time(staircase_schedule(n, r + 1), trace, k), tss);
        }
        if (r >= 2 && n * r >= 2 * n - 1) EXPECT_LE(lb, pcmm_completion(trace, n, r));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Workers, TraceProperties, ::testing::Values(2, 3, 5, 8));

TEST(KthSmallest, Basic) {
  std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(kth_smallest(v, 1), 1);
  EXPECT_EQ(kth_smallest(v, 4), 4);
  EXPECT_THROW(kth_smallest(v, 5), InvalidArgument);
}

}  // namespace
}  // namespace schedsim
