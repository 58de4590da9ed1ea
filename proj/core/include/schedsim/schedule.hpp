#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include "schedsim/rng.hpp"

namespace schedsim {

/// Worker count n, computation load r and computation target k.
struct CompletionConfig {
  int n = 1;
  int r = 1;
  int k = 1;

  /// Throws InvalidArgument unless 1 <= k <= n and 1 <= r <= n.
  void check() const;
};

/// Task-ordering matrix. Row i lists, in execution order, the tasks worker i
/// computes. Workers and positions are 0-based; task values are 1-based, as
/// in the data model everywhere else (files, CLI, reports).
///
/// The type only enforces the shape. Range and distinctness are properties
/// checked by validate(), so user-supplied matrices can be reported on.
class TaskOrderMatrix {
 public:
  TaskOrderMatrix() = default;
  TaskOrderMatrix(int workers, int load, std::vector<int> entries);
  TaskOrderMatrix(std::initializer_list<std::initializer_list<int>> rows);

  int workers() const { return workers_; }
  int load() const { return load_; }
  int at(int worker, int position) const { return entries_[worker * load_ + position]; }
  std::vector<int> row(int worker) const;
  const std::vector<int>& entries() const { return entries_; }

  /// Number of distinct task values present anywhere in the matrix.
  int distinct_tasks() const;

  bool operator==(const TaskOrderMatrix&) const = default;

 private:
  int workers_ = 0;
  int load_ = 0;
  std::vector<int> entries_;
};

/// Cyclic wrap of an index into [1, n]. Supports m in [1-n, 2n], the only
/// range the constructors ever produce.
int wrap_index(int m, int n);

TaskOrderMatrix cyclic_schedule(int n, int r);
TaskOrderMatrix staircase_schedule(int n, int r);
/// Each row is an independent uniform permutation of 1..n (load is n).
TaskOrderMatrix random_assignment_schedule(int n, Rng& rng);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> lints;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const TaskOrderMatrix& matrix, const CompletionConfig& config);

/// Plain text format: a line "n r" followed by n lines of r integers.
void write_schedule(std::ostream& out, const TaskOrderMatrix& matrix);
TaskOrderMatrix read_schedule(std::istream& in);
std::string to_string(const TaskOrderMatrix& matrix);

}  // namespace schedsim
