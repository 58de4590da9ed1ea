#include <gtest/gtest.h>

#include "schedsim/error.hpp"
#include "schedsim/oracle.hpp"

namespace schedsim {
namespace {

DelayModel two_point_model(int n) {
  return DelayModel::broadcast(n, Discrete({0.25, 1.0}, {0.5, 0.5}), Discrete({0.5, 2.0}, {0.75, 0.25}));
}

TEST(Enumeration, Counts) {
  EXPECT_EQ(enumerate_outcomes(two_point_model(1), 1).size(), 4u);
  EXPECT_EQ(enumerate_outcomes(DelayModel::broadcast(3, Constant{1}, Constant{2}), 3).size(), 1u);
  const auto e = enumerate_outcomes(two_point_model(2), 2);
  EXPECT_EQ(e.size(), 256u);
  double total = 0.0;
  e.for_each([&](double p, const DelayTrace&) { total += p; });
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_EQ(e.materialize().size(), 256u);
}

TEST(Enumeration, LastSlotVariesFastest) {
  const auto e = enumerate_outcomes(two_point_model(1), 1);
  const auto all = e.materialize();
  EXPECT_EQ(all[0].second.comp(0, 0), 0.25);
  EXPECT_EQ(all[0].second.comm(0, 0), 0.5);
  EXPECT_EQ(all[1].second.comm(0, 0), 2.0);
  EXPECT_EQ(all[2].second.comp(0, 0), 1.0);
}

TEST(Enumeration, RejectsContinuousAndHugeModels) {
  Rng rng(1);
  EXPECT_THROW(enumerate_outcomes(scenario_preset(Scenario::One, 2, rng), 1), InvalidArgument);
  EXPECT_THROW(enumerate_outcomes(two_point_model(6), 6), InvalidArgument);
}

TEST(ExactMean, Examples) {
  const auto constant = DelayModel::broadcast(2, Constant{1.0}, Constant{0.5});
  EXPECT_EQ(exact_mean(cyclic_schedule(2, 2), constant, 2), 1.5);
  EXPECT_EQ(exact_survival(cyclic_schedule(2, 2), constant, 2, 1.49), 1.0);
  EXPECT_EQ(exact_survival(cyclic_schedule(2, 2), constant, 2, 1.5), 0.0);
  const auto single = DelayModel::broadcast(1, Discrete({1.0, 2.0}, {0.5, 0.5}), Constant{0.0});
  EXPECT_EQ(exact_mean(TaskOrderMatrix({{1}}), single, 1), 1.5);
  EXPECT_EQ(exact_survival(TaskOrderMatrix({{1}}), two_point_model(1), 1, 0.0), 1.0);
}

// Hand count: one worker, comp {0.25, 1} and comm {0.5, 2} give arrivals
// 0.75 (3/8), 1.5 (3/8), 2.25 (1/8), 3 (1/8).
TEST(ExactLaw, SingleWorkerByHand) {
  const auto law = exact_completion_law(TaskOrderMatrix({{1}}), two_point_model(1), 1);
  ASSERT_EQ(law.size(), 4u);
  EXPECT_EQ(law[0], (std::pair<double, double>{0.75, 0.375}));
  EXPECT_EQ(law[1], (std::pair<double, double>{1.5, 0.375}));
  EXPECT_EQ(law[2], (std::pair<double, double>{2.25, 0.125}));
  EXPECT_EQ(law[3], (std::pair<double, double>{3.0, 0.125}));
  EXPECT_DOUBLE_EQ(law_mean(law), 1.5);
  EXPECT_EQ(law_survival(law, 1.5), 0.25);
  EXPECT_EQ(law_survival(law, 1.49), 0.625);
}

TEST(ExactLaw, StepAreaMatchesMeanAndLowerBoundDominates) {
  for (int n : {2, 3}) {
    const auto model = two_point_model(n);
    for (int r = 1; r <= 2; ++r)
      for (int k = 1; k <= n; ++k) {
        for (const auto& m : {cyclic_schedule(n, r), staircase_schedule(n, r)}) {
          const auto law = exact_completion_law(m, model, k);
          EXPECT_NEAR(law_mean(law), law_mean_by_steps(law), 1e-12);
          double prev = 1.0;
          for (const auto& [value, p] : law) {
            EXPECT_GT(p, 0.0);
            const double s = law_survival(law, value);
            EXPECT_LE(s, prev);
            prev = s;
          }
          EXPECT_LE(exact_mean_lower_bound(model, k, r), law_mean(law) + 1e-15);
        }
      }
  }
}

TEST(ExactLaw, CodedBaselines) {
  const auto constant = DelayModel::broadcast(4, Constant{1.0}, Constant{0.5});
  EXPECT_EQ(exact_mean_pc(constant, 2), 2.5);
  EXPECT_EQ(exact_mean_pcmm(constant, 2), 2.5);
  EXPECT_THROW(exact_mean_pc(constant, 1), Infeasible);
}

TEST(ExactH, PartitionsProbability) {
  const auto model = two_point_model(2);
  const auto m = cyclic_schedule(2, 2);
  for (double t : {0.5, 1.0, 1.6, 2.4}) {
    const double total = exact_h(m, model, {1, 2}, {}, t) + exact_h(m, model, {1}, {2}, t) +
                         exact_h(m, model, {2}, {1}, t) + (1.0 - exact_survival(m, model, 2, t));
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace schedsim
