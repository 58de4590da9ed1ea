#pragma once

#include <limits>
#include <vector>

#include "schedsim/delay.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {

/// Arrival instant of a result that is never produced.
inline constexpr double kNever = std::numeric_limits<double>::infinity();

inline bool is_never(double t) { return t == kNever; }

/// Receive instants at the master.
struct ArrivalTimes {
  int n = 0;
  /// n x n, row = worker, column = task - 1. kNever for unassigned tasks.
  std::vector<double> per_worker_task;
  /// Earliest arrival of each task over all workers (index task - 1).
  std::vector<double> per_task;

  double at(int worker, int task) const { return per_worker_task[worker * n + (task - 1)]; }
};

/// Trace positions beyond the schedule's load are ignored, so one long trace
/// can drive every load of a sweep.
ArrivalTimes arrival_times(const TaskOrderMatrix& schedule, const DelayTrace& trace);

/// k-th smallest finite per-task arrival: inf{t : |{j : t_j <= t}| >= k}.
/// Throws InfeasibleTarget when fewer than k distinct tasks are assigned.
double completion_time(const TaskOrderMatrix& schedule, const DelayTrace& trace, int k);

/// The first k distinct tasks to reach the master, in arrival order (ties
/// broken by task index), and the instant the k-th arrived.
struct ReceivedTasks {
  std::vector<int> tasks;
  double completion = 0.0;
};
ReceivedTasks first_k_distinct(const TaskOrderMatrix& schedule, const DelayTrace& trace, int k);

/// Computations whose computation stage finishes strictly after `completion`.
int wasted_computations(const DelayTrace& trace, int load, double completion);

/// Genie bound: k-th smallest of all arrivals over the first `load` positions
/// of every worker. `load` defaults to every position of the trace.
double lower_bound_completion(const DelayTrace& trace, int k, int load = 0);

/// Polynomially coded baseline: worker i sends one message after all r
/// computations, using the communication delay drawn at position 0. Done
/// at the (2*ceil(n/r) - 1)-th fastest worker.
double pc_completion(const DelayTrace& trace, int n, int r);

/// Multi-message polynomially coded baseline: every position sends, done at
/// the (2n - 1)-th arrival.
double pcmm_completion(const DelayTrace& trace, int n, int r);

/// Order statistic helper: k-th smallest (1-based) of `values`, reordering it.
double kth_smallest(std::vector<double>& values, int k);

}  // namespace schedsim
