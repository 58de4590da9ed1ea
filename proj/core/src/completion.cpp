#include "schedsim/completion.hpp"

#include <algorithm>
#include <numeric>

#include "schedsim/error.hpp"

namespace schedsim {

namespace {

void check_dimensions(const TaskOrderMatrix& schedule, const DelayTrace& trace) {
  if (schedule.workers() != trace.workers())
    throw InvalidArgument("schedule and trace disagree on worker count");
  if (schedule.load() > trace.positions())
    throw InvalidArgument("trace has fewer positions than the schedule's load");
}

// Per-task earliest arrival, written into `out` (size n, index task - 1).
void per_task_arrivals(const TaskOrderMatrix& schedule, const DelayTrace& trace, int n, std::vector<double>& out) {
  out.assign(n, kNever);
  for (int i = 0; i < schedule.workers(); ++i) {
    double finish = 0.0;
    for (int j = 0; j < schedule.load(); ++j) {
      finish += trace.comp(i, j);
      const int task = schedule.at(i, j);
      if (task < 1 || task > n) throw InvalidArgument("schedule entry out of range");
      out[task - 1] = std::min(out[task - 1], finish + trace.comm(i, j));
    }
  }
}

}  // namespace

double kth_smallest(std::vector<double>& values, int k) {
  if (k < 1 || k > static_cast<int>(values.size())) throw InvalidArgument("order statistic index out of range");
  auto nth = values.begin() + (k - 1);
  std::nth_element(values.begin(), nth, values.end());
  return *nth;
}

ArrivalTimes arrival_times(const TaskOrderMatrix& schedule, const DelayTrace& trace) {
  check_dimensions(schedule, trace);
  const int n = schedule.workers();
  ArrivalTimes out;
  out.n = n;
  out.per_worker_task.assign(static_cast<std::size_t>(n) * n, kNever);
  for (int i = 0; i < n; ++i) {
    double finish = 0.0;
    for (int j = 0; j < schedule.load(); ++j) {
      finish += trace.comp(i, j);
      const int task = schedule.at(i, j);
      if (task < 1 || task > n) throw InvalidArgument("schedule entry out of range");
      double& slot = out.per_worker_task[i * n + (task - 1)];
      slot = std::min(slot, finish + trace.comm(i, j));
    }
  }
  out.per_task.assign(n, kNever);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t) out.per_task[t] = std::min(out.per_task[t], out.per_worker_task[i * n + t]);
  return out;
}

double completion_time(const TaskOrderMatrix& schedule, const DelayTrace& trace, int k) {
  check_dimensions(schedule, trace);
  const int n = schedule.workers();
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  std::vector<double> per_task;
  per_task_arrivals(schedule, trace, n, per_task);
  auto end = std::remove_if(per_task.begin(), per_task.end(), is_never);
  per_task.erase(end, per_task.end());
  if (static_cast<int>(per_task.size()) < k)
    throw InfeasibleTarget("only " + std::to_string(per_task.size()) + " distinct tasks assigned, target is " +
                           std::to_string(k));
  return kth_smallest(per_task, k);
}

ReceivedTasks first_k_distinct(const TaskOrderMatrix& schedule, const DelayTrace& trace, int k) {
  check_dimensions(schedule, trace);
  const int n = schedule.workers();
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  std::vector<double> per_task;
  per_task_arrivals(schedule, trace, n, per_task);
  std::vector<int> order;
  for (int t = 0; t < n; ++t)
    if (!is_never(per_task[t])) order.push_back(t);
  if (static_cast<int>(order.size()) < k)
    throw InfeasibleTarget("only " + std::to_string(order.size()) + " distinct tasks assigned, target is " +
                           std::to_string(k));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return per_task[a] < per_task[b]; });
  ReceivedTasks out;
  for (int m = 0; m < k; ++m) out.tasks.push_back(order[m] + 1);
  out.completion = per_task[order[k - 1]];
  return out;
}

int wasted_computations(const DelayTrace& trace, int load, double completion) {
  int wasted = 0;
  for (int i = 0; i < trace.workers(); ++i) {
    double finish = 0.0;
    for (int j = 0; j < load; ++j) {
      finish += trace.comp(i, j);
      if (finish > completion) {
        wasted += load - j;
        break;
      }
    }
  }
  return wasted;
}

double lower_bound_completion(const DelayTrace& trace, int k, int load) {
  if (load == 0) load = trace.positions();
  if (load < 1 || load > trace.positions()) throw InvalidArgument("lower bound load outside the trace");
  const int n = trace.workers();
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  std::vector<double> arrivals;
  arrivals.reserve(static_cast<std::size_t>(n) * load);
  for (int i = 0; i < n; ++i) {
    double finish = 0.0;
    for (int j = 0; j < load; ++j) {
      finish += trace.comp(i, j);
      arrivals.push_back(finish + trace.comm(i, j));
    }
  }
  return kth_smallest(arrivals, k);
}

double pc_completion(const DelayTrace& trace, int n, int r) {
  if (r < 2) throw Infeasible("PC requires r >= 2");
  if (n != trace.workers()) throw InvalidArgument("trace and n disagree on worker count");
  if (r > trace.positions()) throw InvalidArgument("PC load exceeds the trace");
  std::vector<double> per_worker(n);
  for (int i = 0; i < n; ++i) {
    double finish = 0.0;
    for (int j = 0; j < r; ++j) finish += trace.comp(i, j);
    per_worker[i] = finish + trace.comm(i, 0);
  }
  const int needed = 2 * ((n + r - 1) / r) - 1;
  return kth_smallest(per_worker, needed);
}

double pcmm_completion(const DelayTrace& trace, int n, int r) {
  if (r < 2) throw Infeasible("PCMM requires r >= 2");
  if (n * r < 2 * n - 1) throw Infeasible("PCMM requires n*r >= 2n - 1");
  if (n != trace.workers()) throw InvalidArgument("trace and n disagree on worker count");
  if (r > trace.positions()) throw InvalidArgument("PCMM load exceeds the trace");
  std::vector<double> arrivals;
  arrivals.reserve(static_cast<std::size_t>(n) * r);
  for (int i = 0; i < n; ++i) {
    double finish = 0.0;
    for (int j = 0; j < r; ++j) {
      finish += trace.comp(i, j);
      arrivals.push_back(finish + trace.comm(i, j));
    }
  }
  return kth_smallest(arrivals, 2 * n - 1);
}

}  // namespace schedsim
