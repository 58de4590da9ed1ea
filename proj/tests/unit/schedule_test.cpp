#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "schedsim/error.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {
namespace {

bool is_permutation_row(const std::vector<int>& row, int n) {
  std::vector<int> sorted = row;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i + 1) return false;
  return static_cast<int>(row.size()) == n;
}

TEST(WrapIndex, Examples) {
  EXPECT_EQ(wrap_index(5, 4), 1);
  EXPECT_EQ(wrap_index(0, 4), 4);
  EXPECT_EQ(wrap_index(3, 4), 3);
}

TEST(WrapIndex, IdentityAndPeriodicity) {
  for (int n = 1; n <= 12; ++n) {
    for (int m = 1; m <= n; ++m) EXPECT_EQ(wrap_index(m, n), m);
    for (int m = 1 - n; m <= n; ++m) EXPECT_EQ(wrap_index(m + n, n), wrap_index(m, n)) << m << " " << n;
  }
}

TEST(Cyclic, Examples) {
  EXPECT_EQ(cyclic_schedule(4, 3), TaskOrderMatrix({{1, 2, 3}, {2, 3, 4}, {3, 4, 1}, {4, 1, 2}}));
  EXPECT_EQ(cyclic_schedule(1, 1), TaskOrderMatrix({{1}}));
  EXPECT_EQ(cyclic_schedule(3, 3), TaskOrderMatrix({{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}));
}

TEST(Staircase, Examples) {
  EXPECT_EQ(staircase_schedule(4, 3), TaskOrderMatrix({{1, 2, 3}, {2, 1, 4}, {3, 4, 1}, {4, 3, 2}}));
  EXPECT_EQ(staircase_schedule(1, 1), TaskOrderMatrix({{1}}));
  EXPECT_EQ(staircase_schedule(3, 2), TaskOrderMatrix({{1, 2}, {2, 1}, {3, 1}}));
}

TEST(Constructors, RowsDistinctInRangeAndFirstColumnIsWorker) {
  for (int n = 1; n <= 14; ++n) {
    for (int r = 1; r <= n; ++r) {
      for (const auto& m : {cyclic_schedule(n, r), staircase_schedule(n, r)}) {
        ASSERT_EQ(m.workers(), n);
        ASSERT_EQ(m.load(), r);
        for (int i = 0; i < n; ++i) {
          auto row = m.row(i);
          std::set<int> distinct(row.begin(), row.end());
          EXPECT_EQ(static_cast<int>(distinct.size()), r);
          EXPECT_GE(*distinct.begin(), 1);
          EXPECT_LE(*distinct.rbegin(), n);
          EXPECT_EQ(m.at(i, 0), i + 1);
          if (r == n) EXPECT_TRUE(is_permutation_row(row, n));
        }
        EXPECT_TRUE(validate(m, {n, r, n}).ok());
      }
    }
  }
}

TEST(Constructors, RejectLoadOutsideRange) {
  EXPECT_THROW(cyclic_schedule(4, 0), InvalidArgument);
  EXPECT_THROW(cyclic_schedule(4, 5), InvalidArgument);
  EXPECT_THROW(staircase_schedule(0, 1), InvalidArgument);
}

TEST(RandomAssignment, RowsArePermutationsAndSeeded) {
  Rng a(7), b(7);
  const auto m1 = random_assignment_schedule(6, a);
  const auto m2 = random_assignment_schedule(6, b);
  EXPECT_EQ(m1, m2);
  for (int i = 0; i < 6; ++i) EXPECT_TRUE(is_permutation_row(m1.row(i), 6));
  Rng c(1);
  EXPECT_EQ(random_assignment_schedule(1, c), TaskOrderMatrix({{1}}));
}

TEST(RandomAssignment, FirstEntryRoughlyUniform) {
  Rng rng(99);
  std::vector<int> counts(4, 0);
  const int draws = 20000;
  for (int d = 0; d < draws; ++d) ++counts[random_assignment_schedule(4, rng).at(0, 0) - 1];
  for (int c : counts) EXPECT_NEAR(c / double(draws), 0.25, 0.015);
}

TEST(Validate, Examples) {
  const auto ok = validate(cyclic_schedule(4, 3), {4, 3, 4});
  EXPECT_TRUE(ok.ok());
  EXPECT_TRUE(ok.lints.empty());

  const auto dup = validate(TaskOrderMatrix({{1, 1}}), {2, 2, 2});
  ASSERT_EQ(dup.lints.size(), 1u);
  EXPECT_EQ(dup.lints.front(), "duplicate in row 1");
  EXPECT_NE(std::find(dup.errors.begin(), dup.errors.end(), "only 1 distinct task < k=2"), dup.errors.end());

  const auto range = validate(TaskOrderMatrix({{5}}), {4, 1, 1});
  ASSERT_FALSE(range.ok());
  EXPECT_TRUE(std::any_of(range.errors.begin(), range.errors.end(),
                          [](const std::string& e) { return e.find("entry out of range") != std::string::npos; }));
}

TEST(ScheduleText, RoundTrip) {
  const auto m = staircase_schedule(5, 3);
  std::stringstream io;
  write_schedule(io, m);
  EXPECT_EQ(io.str().substr(0, 4), "5 3\n");
  EXPECT_EQ(read_schedule(io), m);
}

TEST(ScheduleText, RejectsMalformed) {
  std::stringstream missing("2 2\n1 2\n2\n");
  EXPECT_THROW(read_schedule(missing), InvalidArgument);
  std::stringstream garbage("two 2\n");
  EXPECT_THROW(read_schedule(garbage), InvalidArgument);
}

}  // namespace
}  // namespace schedsim
