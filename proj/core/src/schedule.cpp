#include "schedsim/schedule.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "schedsim/error.hpp"

namespace schedsim {

void CompletionConfig::check() const {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (r < 1 || r > n) throw InvalidArgument("computation load r must lie in [1, n]");
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
}

TaskOrderMatrix::TaskOrderMatrix(int workers, int load, std::vector<int> entries)
    : workers_(workers), load_(load), entries_(std::move(entries)) {
  if (workers < 1 || load < 1) throw InvalidArgument("schedule needs at least one row and one column");
  if (entries_.size() != static_cast<std::size_t>(workers) * static_cast<std::size_t>(load))
    throw InvalidArgument("schedule entry count does not match its shape");
}

TaskOrderMatrix::TaskOrderMatrix(std::initializer_list<std::initializer_list<int>> rows) {
  if (rows.size() == 0) throw InvalidArgument("schedule needs at least one row");
  workers_ = static_cast<int>(rows.size());
  load_ = static_cast<int>(rows.begin()->size());
  if (load_ == 0) throw InvalidArgument("schedule needs at least one column");
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != load_) throw InvalidArgument("ragged schedule rows");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

std::vector<int> TaskOrderMatrix::row(int worker) const {
  auto first = entries_.begin() + worker * load_;
  return {first, first + load_};
}

int TaskOrderMatrix::distinct_tasks() const {
  return static_cast<int>(std::set<int>(entries_.begin(), entries_.end()).size());
}

int wrap_index(int m, int n) {
  if (n < 1) throw InvalidArgument("wrap_index: n must be at least 1");
  if (m < 1 - n || m > 2 * n) throw InvalidArgument("wrap_index: argument outside [1-n, 2n]");
  if (m > n) return m - n;
  if (m < 1) return m + n;
  return m;
}

namespace {

void check_shape(int n, int r) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (r < 1 || r > n) throw InvalidArgument("computation load r must lie in [1, n]");
}

}  // namespace

TaskOrderMatrix cyclic_schedule(int n, int r) {
  check_shape(n, r);
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(n) * r);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= r; ++j) entries.push_back(wrap_index(i + j - 1, n));
  return {n, r, std::move(entries)};
}

TaskOrderMatrix staircase_schedule(int n, int r) {
  check_shape(n, r);
  std::vector<int> entries;
  entries.reserve(static_cast<std::size_t>(n) * r);
  for (int i = 1; i <= n; ++i) {
    const int direction = (i % 2 == 1) ? 1 : -1;
    for (int j = 1; j <= r; ++j) entries.push_back(wrap_index(i + direction * (j - 1), n));
  }
  return {n, r, std::move(entries)};
}

TaskOrderMatrix random_assignment_schedule(int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  std::vector<int> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    auto first = entries.begin() + i * n;
    std::iota(first, first + n, 1);
    // Fisher-Yates with an explicit draw so the result does not depend on
    // the standard library's shuffle implementation.
    for (int j = n - 1; j > 0; --j) {
      const auto pick = static_cast<int>(uniform01(rng) * (j + 1));
      std::swap(first[j], first[std::min(pick, j)]);
    }
  }
  return {n, n, std::move(entries)};
}

ValidationReport validate(const TaskOrderMatrix& matrix, const CompletionConfig& config) {
  ValidationReport report;
  const int n = config.n;
  if (n < 1) {
    report.errors.push_back("n must be at least 1");
    return report;
  }
  if (config.k < 1 || config.k > n) report.errors.push_back("computation target k outside [1, n]");
  if (config.r < 1 || config.r > n) report.errors.push_back("computation load r outside [1, n]");
  if (matrix.workers() != n || matrix.load() != config.r) {
    std::ostringstream msg;
    msg << "dimension mismatch: matrix is " << matrix.workers() << "x" << matrix.load() << ", expected "
        << n << "x" << config.r;
    report.errors.push_back(msg.str());
  }

  std::set<int> present;
  bool out_of_range = false;
  for (int i = 0; i < matrix.workers(); ++i) {
    std::set<int> seen;
    bool duplicate = false;
    for (int j = 0; j < matrix.load(); ++j) {
      const int task = matrix.at(i, j);
      if (task < 1 || task > n) {
        out_of_range = true;
        continue;
      }
      present.insert(task);
      if (!seen.insert(task).second) duplicate = true;
    }
    if (duplicate) report.lints.push_back("duplicate in row " + std::to_string(i + 1));
  }
  if (out_of_range) report.errors.push_back("entry out of range [1, " + std::to_string(n) + "]");
  if (static_cast<int>(present.size()) < config.k) {
    report.errors.push_back("only " + std::to_string(present.size()) + " distinct task" +
                            (present.size() == 1 ? "" : "s") + " < k=" + std::to_string(config.k));
  }
  return report;
}

void write_schedule(std::ostream& out, const TaskOrderMatrix& matrix) {
  out << matrix.workers() << ' ' << matrix.load() << '\n';
  for (int i = 0; i < matrix.workers(); ++i) {
    for (int j = 0; j < matrix.load(); ++j) {
      if (j) out << ' ';
      out << matrix.at(i, j);
    }
    out << '\n';
  }
}

TaskOrderMatrix read_schedule(std::istream& in) {
  int rows = 0;
  int cols = 0;
  if (!(in >> rows >> cols)) throw InvalidArgument("schedule file: missing \"n r\" header");
  if (rows < 1 || cols < 1) throw InvalidArgument("schedule file: shape must be positive");
  std::vector<int> entries(static_cast<std::size_t>(rows) * cols);
  for (auto& e : entries)
    if (!(in >> e)) throw InvalidArgument("schedule file: expected " + std::to_string(rows * cols) + " entries");
  std::string trailing;
  if (in >> trailing) throw InvalidArgument("schedule file: unexpected trailing content");
  return {rows, cols, std::move(entries)};
}

std::string to_string(const TaskOrderMatrix& matrix) {
  std::ostringstream out;
  write_schedule(out, matrix);
  return out.str();
}

}  // namespace schedsim
