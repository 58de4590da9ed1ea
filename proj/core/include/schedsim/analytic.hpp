#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "schedsim/delay.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {

/// Task sets are lists of 1-based task indices.
using TaskSet = std::vector<int>;

std::uint32_t task_mask(const TaskSet& tasks, int n);
TaskSet mask_tasks(std::uint32_t mask);

/// One inclusion-exclusion term: sign * coefficient * Pr{t_j > t for all j in subset}.
struct SubsetTerm {
  TaskSet subset;
  std::uint32_t mask = 0;
  int sign = 1;
  std::int64_t coefficient = 1;
};

inline constexpr int kAnalyticMaxWorkers = 20;

/// Every subset with |S| >= n-k+1, in increasing mask order.
std::vector<SubsetTerm> subset_terms(int n, int k);

/// Signed weight of a subset of size `s` in the survival expansion.
std::int64_t subset_weight(int n, int k, int s);

struct AnalyticOptions {
  /// Cells used to discretize a continuous computation law.
  int lattice_cells = 128;
  /// Absolute tolerance (seconds) for the integral of the survival function.
  double abs_tol = 1e-7;
};

struct SurvivalCurve {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Evaluates Pr{completion > t} for one schedule and delay model. Workers
/// with identical delay laws share their per-worker tables.
class SurvivalEvaluator {
 public:
  SurvivalEvaluator(const TaskOrderMatrix& schedule, const DelayModel& model, int k, AnalyticOptions options = {});
  ~SurvivalEvaluator();
  SurvivalEvaluator(SurvivalEvaluator&&) noexcept;
  SurvivalEvaluator& operator=(SurvivalEvaluator&&) noexcept;

  /// Pr{t_j > t for every j in `subset`}; 1 for the empty set.
  double h_term(std::uint32_t subset, double t) const;
  /// Survival before clamping, for tolerance checks.
  double raw_survival(double t) const;
  double survival(double t) const;
  SurvivalCurve curve(const std::vector<double>& grid) const;
  double mean() const;

  /// No completion can happen before this instant.
  double earliest() const { return earliest_; }
  /// Completion has surely happened by this instant.
  double latest() const { return latest_; }

 private:
  bool before_support(double t) const;
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double earliest_ = 0.0;
  double latest_ = 0.0;
};

double h_term(const TaskOrderMatrix& schedule, const DelayModel& model, const TaskSet& subset, double t,
              const AnalyticOptions& options = {});
double survival(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config, double t,
                const AnalyticOptions& options = {});
double average_completion(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config,
                          const AnalyticOptions& options = {});
SurvivalCurve survival_curve(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config,
                             const std::vector<double>& grid, const AnalyticOptions& options = {});

/// `points` evenly spaced instants on [0, latest].
std::vector<double> default_grid(const TaskOrderMatrix& schedule, const DelayModel& model, int points);

struct SignedSet {
  int sign = 1;
  TaskSet tasks;
  std::uint32_t mask = 0;
};

/// Pr{t_j > t on `above`, t_j <= t on `below`} written as a signed sum of
/// all-above probabilities over above ∪ B, B ⊆ below. Terms are ordered by
/// |B|, then by mask.
std::vector<SignedSet> signed_expansion(const TaskSet& above, const TaskSet& below);

/// Checks sum_{i=n-k+1}^{s} (-1)^(i+s) C(s,i) == (-1)^(n-k+s+1) C(s-1, n-k)
/// in integer arithmetic.
bool coefficient_identity_check(int s, int n, int k);
/// The identity over every valid (n, k, s) with n <= max_n.
bool coefficient_identity_check_all(int max_n);

std::int64_t binomial(int n, int k);

}  // namespace schedsim
