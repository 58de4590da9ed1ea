#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "schedsim/analytic.hpp"
#include "schedsim/delay.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {

inline constexpr std::uint64_t kMaxOutcomes = 10'000'000;

/// Every joint outcome of a finite-support model over `positions` positions.
/// Slots are ordered lexicographically by (worker, position, stage), the
/// first slot being the most significant digit.
class OutcomeEnumeration {
 public:
  OutcomeEnumeration(const DelayModel& model, int positions);

  int workers() const { return workers_; }
  int positions() const { return positions_; }
  std::uint64_t size() const { return size_; }

  void for_each(const std::function<void(double probability, const DelayTrace& trace)>& visit) const;
  /// All outcomes in enumeration order. Refused above 10^6 outcomes.
  std::vector<std::pair<double, DelayTrace>> materialize() const;

 private:
  int workers_;
  int positions_;
  std::uint64_t size_ = 1;
  std::vector<std::vector<std::pair<double, double>>> slots_;  // (value, probability)
};

OutcomeEnumeration enumerate_outcomes(const DelayModel& model, int positions);

/// Exact law of a completion instant: sorted distinct values with their
/// probabilities.
using ExactLaw = std::vector<std::pair<double, double>>;

ExactLaw exact_completion_law(const TaskOrderMatrix& schedule, const DelayModel& model, int k);
ExactLaw exact_lower_bound_law(const DelayModel& model, int k, int load);
ExactLaw exact_pc_law(const DelayModel& model, int r);
ExactLaw exact_pcmm_law(const DelayModel& model, int r);

/// Pr{T > t} for a law.
double law_survival(const ExactLaw& law, double t);
double law_mean(const ExactLaw& law);
/// Mean as the sum of step areas under the survival function.
double law_mean_by_steps(const ExactLaw& law);

double exact_survival(const TaskOrderMatrix& schedule, const DelayModel& model, int k, double t);
double exact_mean(const TaskOrderMatrix& schedule, const DelayModel& model, int k);
double exact_mean_lower_bound(const DelayModel& model, int k, int load);
double exact_mean_pc(const DelayModel& model, int r);
double exact_mean_pcmm(const DelayModel& model, int r);

/// Pr{t_j > t for j in `above`, t_j <= t for j in `below`} by enumeration.
double exact_h(const TaskOrderMatrix& schedule, const DelayModel& model, const TaskSet& above, const TaskSet& below,
               double t);

}  // namespace schedsim
