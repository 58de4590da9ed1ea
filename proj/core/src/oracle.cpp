#include "schedsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "schedsim/error.hpp"

namespace schedsim {

// The arrival arithmetic here is written out on its own rather than reusing
// the completion engine, since this file is what that engine is checked against.

OutcomeEnumeration::OutcomeEnumeration(const DelayModel& model, int positions)
    : workers_(model.workers()), positions_(positions) {
  if (positions < 1) throw InvalidArgument("enumeration needs at least one position");
  if (!model.is_finite_support()) throw InvalidArgument("exact enumeration needs finite-support delay laws");
  for (int i = 0; i < workers_; ++i) {
    for (int j = 0; j < positions_; ++j) {
      for (int stage = 0; stage < 2; ++stage) {
        slots_.push_back(stage == 0 ? model.comp(i).atoms() : model.comm(i).atoms());
        const auto width = slots_.back().size();
        if (size_ > kMaxOutcomes / width) throw InvalidArgument("enumeration refused: more than 10^7 outcomes");
        size_ *= width;
      }
    }
  }
}

void OutcomeEnumeration::for_each(const std::function<void(double, const DelayTrace&)>& visit) const {
  const std::size_t count = slots_.size();
  std::vector<std::size_t> digit(count, 0);
  DelayTrace trace(workers_, positions_);
  auto write = [&](std::size_t s) {
    const int cell = static_cast<int>(s / 2);
    const int i = cell / positions_, j = cell % positions_;
    const double v = slots_[s][digit[s]].first;
    if (s % 2 == 0)
      trace.comp(i, j) = v;
    else
      trace.comm(i, j) = v;
  };
  for (std::size_t s = 0; s < count; ++s) write(s);
  for (std::uint64_t outcome = 0; outcome < size_; ++outcome) {
    double p = 1.0;
    for (std::size_t s = 0; s < count; ++s) p *= slots_[s][digit[s]].second;
    visit(p, trace);
    // advance the odometer, last slot fastest
    for (std::size_t s = count; s-- > 0;) {
      if (++digit[s] < slots_[s].size()) {
        write(s);
        break;
      }
      digit[s] = 0;
      write(s);
    }
  }
}

std::vector<std::pair<double, DelayTrace>> OutcomeEnumeration::materialize() const {
  if (size_ > 1'000'000) throw InvalidArgument("materializing more than 10^6 outcomes is refused");
  std::vector<std::pair<double, DelayTrace>> out;
  out.reserve(size_);
  for_each([&](double p, const DelayTrace& trace) { out.emplace_back(p, trace); });
  return out;
}

OutcomeEnumeration enumerate_outcomes(const DelayModel& model, int positions) { return {model, positions}; }

namespace {

// Arrival of the result at `position` of `worker`.
double arrival_at(const DelayTrace& trace, int worker, int position) {
  double finish = 0.0;
  for (int m = 0; m <= position; ++m) finish += trace.comp(worker, m);
  return finish + trace.comm(worker, position);
}

std::vector<double> task_arrivals(const TaskOrderMatrix& schedule, const DelayTrace& trace) {
  const int n = schedule.workers();
  std::vector<double> first(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < schedule.load(); ++j) {
      const int task = schedule.at(i, j);
      first[task - 1] = std::min(first[task - 1], arrival_at(trace, i, j));
    }
  return first;
}

double order_statistic(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  return values[k - 1];
}

ExactLaw collect(const OutcomeEnumeration& outcomes, const std::function<double(const DelayTrace&)>& completion) {
  std::map<double, double> mass;
  double total = 0.0;
  outcomes.for_each([&](double p, const DelayTrace& trace) {
    mass[completion(trace)] += p;
    total += p;
  });
  if (std::abs(total - 1.0) > 1e-12) throw Error("enumerated probabilities do not sum to 1");
  return {mass.begin(), mass.end()};
}

void check_schedule(const TaskOrderMatrix& schedule, const DelayModel& model, int k) {
  const int n = schedule.workers();
  if (model.workers() != n) throw InvalidArgument("delay model worker count differs from the schedule");
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  for (int v : schedule.entries())
    if (v < 1 || v > n) throw InvalidArgument("schedule entry out of range [1, n]");
  if (schedule.distinct_tasks() < k) throw InfeasibleTarget("fewer distinct tasks than the computation target");
}

}  // namespace

ExactLaw exact_completion_law(const TaskOrderMatrix& schedule, const DelayModel& model, int k) {
  check_schedule(schedule, model, k);
  const OutcomeEnumeration outcomes(model, schedule.load());
  return collect(outcomes, [&](const DelayTrace& trace) {
    auto first = task_arrivals(schedule, trace);
    first.erase(std::remove_if(first.begin(), first.end(), [](double v) { return std::isinf(v); }), first.end());
    return order_statistic(std::move(first), k);
  });
}

ExactLaw exact_lower_bound_law(const DelayModel& model, int k, int load) {
  const int n = model.workers();
  if (k < 1 || k > n || load < 1) throw InvalidArgument("lower bound needs 1 <= k <= n and a positive load");
  const OutcomeEnumeration outcomes(model, load);
  return collect(outcomes, [&](const DelayTrace& trace) {
    std::vector<double> all;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < load; ++j) all.push_back(arrival_at(trace, i, j));
    return order_statistic(std::move(all), k);
  });
}

ExactLaw exact_pc_law(const DelayModel& model, int r) {
  const int n = model.workers();
  if (r < 2) throw Infeasible("PC requires r >= 2");
  const OutcomeEnumeration outcomes(model, r);
  const int needed = 2 * ((n + r - 1) / r) - 1;
  return collect(outcomes, [&](const DelayTrace& trace) {
    std::vector<double> done;
    for (int i = 0; i < n; ++i) {
      double finish = 0.0;
      for (int j = 0; j < r; ++j) finish += trace.comp(i, j);
      done.push_back(finish + trace.comm(i, 0));
    }
    return order_statistic(std::move(done), needed);
  });
}

ExactLaw exact_pcmm_law(const DelayModel& model, int r) {
  const int n = model.workers();
  if (r < 2 || n * r < 2 * n - 1) throw Infeasible("PCMM requires r >= 2 and n*r >= 2n - 1");
  const OutcomeEnumeration outcomes(model, r);
  return collect(outcomes, [&](const DelayTrace& trace) {
    std::vector<double> all;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) all.push_back(arrival_at(trace, i, j));
    return order_statistic(std::move(all), 2 * n - 1);
  });
}

double law_survival(const ExactLaw& law, double t) {
  double p = 0.0;
  for (const auto& [v, q] : law)
    if (v > t) p += q;
  return p;
}

double law_mean(const ExactLaw& law) {
  double m = 0.0;
  for (const auto& [v, q] : law) m += v * q;
  return m;
}

double law_mean_by_steps(const ExactLaw& law) {
  if (law.empty()) return 0.0;
  double area = law.front().first;  // survival is 1 below the first atom
  for (std::size_t i = 0; i + 1 < law.size(); ++i)
    area += law_survival(law, law[i].first) * (law[i + 1].first - law[i].first);
  return area;
}

double exact_survival(const TaskOrderMatrix& schedule, const DelayModel& model, int k, double t) {
  return law_survival(exact_completion_law(schedule, model, k), t);
}

double exact_mean(const TaskOrderMatrix& schedule, const DelayModel& model, int k) {
  return law_mean(exact_completion_law(schedule, model, k));
}

double exact_mean_lower_bound(const DelayModel& model, int k, int load) {
  return law_mean(exact_lower_bound_law(model, k, load));
}

double exact_mean_pc(const DelayModel& model, int r) { return law_mean(exact_pc_law(model, r)); }

double exact_mean_pcmm(const DelayModel& model, int r) { return law_mean(exact_pcmm_law(model, r)); }

double exact_h(const TaskOrderMatrix& schedule, const DelayModel& model, const TaskSet& above, const TaskSet& below,
               double t) {
  check_schedule(schedule, model, 1);
  const int n = schedule.workers();
  for (int task : above)
    if (task < 1 || task > n) throw InvalidArgument("task index outside [1, n]");
  for (int task : below)
    if (task < 1 || task > n) throw InvalidArgument("task index outside [1, n]");
  const OutcomeEnumeration outcomes(model, schedule.load());
  double p = 0.0;
  outcomes.for_each([&](double q, const DelayTrace& trace) {
    const auto first = task_arrivals(schedule, trace);
    for (int task : above)
      if (!(first[task - 1] > t)) return;
    for (int task : below)
      if (!(first[task - 1] <= t)) return;
    p += q;
  });
  return p;
}

}  // namespace schedsim
