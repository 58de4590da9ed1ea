#include "schedsim/analytic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "schedsim/error.hpp"

namespace schedsim {

namespace {

using Int = __int128;

Int binomial_wide(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Int out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

void check_subset_range(int n) {
  if (n > kAnalyticMaxWorkers) throw InvalidArgument("analytic path limited to n ≤ 20");
  if (n < 1) throw InvalidArgument("analytic path needs at least one worker");
}

// Partial sums of a worker's computation delays, restricted to the event that
// every included position so far arrived after t. Either a lattice (continuous
// computation law) or a sorted atom list (finite support).
struct PartialSum {
  // lattice: value(idx) = origin + idx * step
  double origin = 0.0;
  std::vector<double> mass;
  // atoms
  std::vector<std::pair<double, double>> atoms;
};

class WorkerLaw {
 public:
  WorkerLaw(const DelayDistribution& comp, const DelayDistribution& comm, int cells)
      : comp_(comp), comm_(comm), lattice_(!comp.is_finite_support()) {
    if (lattice_) {
      if (cells < 1) throw InvalidArgument("lattice_cells must be positive");
      const double lo = comp.lower();
      step_ = (comp.upper() - lo) / cells;
      mid0_ = lo + 0.5 * step_;
      kernel_.resize(cells);
      double prev = 0.0;
      for (int c = 0; c < cells; ++c) {
        const double next = c + 1 == cells ? 1.0 : comp.cdf(lo + (c + 1) * step_);
        kernel_[c] = next - prev;
        prev = next;
      }
    } else {
      kernel_atoms_ = comp.atoms();
    }
  }

  bool same_laws(const DelayDistribution& comp, const DelayDistribution& comm) const {
    return comp_ == comp && comm_ == comm;
  }

  // Joint survival of every subset of positions [0, load) at instant t,
  // indexed by position mask.
  void tables(int load, double t, std::vector<double>& out) const {
    out.assign(std::size_t{1} << load, 0.0);
    PartialSum start;
    if (lattice_)
      start.mass = {1.0};
    else
      start.atoms = {{0.0, 1.0}};
    descend(0, load, start, 0u, t, out);
  }

  // Every value an arrival at one of the first `load` positions can take
  // (finite support only), formed exactly as the arrival is.
  void arrival_values(int load, std::vector<double>& out) const {
    PartialSum state;
    state.atoms = {{0.0, 1.0}};
    const auto comm_atoms = comm_.atoms();
    for (int p = 0; p < load; ++p) {
      state = convolve(state, p);
      for (const auto& [s, _] : state.atoms)
        for (const auto& [c, __] : comm_atoms) out.push_back(s + c);
    }
  }

 private:
  PartialSum convolve(const PartialSum& in, int depth) const {
    PartialSum out;
    if (lattice_) {
      out.origin = (depth + 1) * mid0_;
      out.mass.assign(in.mass.size() + kernel_.size() - 1, 0.0);
      for (std::size_t a = 0; a < in.mass.size(); ++a) {
        const double m = in.mass[a];
        if (m == 0.0) continue;
        for (std::size_t c = 0; c < kernel_.size(); ++c) out.mass[a + c] += m * kernel_[c];
      }
    } else {
      out.atoms.reserve(in.atoms.size() * kernel_atoms_.size());
      for (const auto& [v, m] : in.atoms)
        for (const auto& [a, q] : kernel_atoms_) out.atoms.emplace_back(v + a, m * q);
      std::sort(out.atoms.begin(), out.atoms.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      std::size_t w = 0;
      for (std::size_t i = 0; i < out.atoms.size(); ++i) {
        if (w > 0 && out.atoms[w - 1].first == out.atoms[i].first)
          out.atoms[w - 1].second += out.atoms[i].second;
        else
          out.atoms[w++] = out.atoms[i];
      }
      out.atoms.resize(w);
    }
    return out;
  }

  PartialSum restrict_late(const PartialSum& in, double t) const {
    PartialSum out = in;
    if (lattice_) {
      for (std::size_t a = 0; a < out.mass.size(); ++a)
        if (out.mass[a] != 0.0) out.mass[a] *= comm_.exceeds(out.origin + a * step_, t);
    } else {
      for (auto& [v, m] : out.atoms) m *= comm_.exceeds(v, t);
    }
    return out;
  }

  static double total(const PartialSum& s) {
    double sum = 0.0;
    for (double m : s.mass) sum += m;
    for (const auto& a : s.atoms) sum += a.second;
    return sum;
  }

  void descend(int p, int load, const PartialSum& state, std::uint32_t mask, double t,
               std::vector<double>& out) const {
    const double mass = total(state);
    if (mass == 0.0) return;  // every extension stays at zero
    if (p == load) {
      out[mask] = mass;
      return;
    }
    const PartialSum next = convolve(state, p);
    descend(p + 1, load, next, mask, t, out);
    descend(p + 1, load, restrict_late(next, t), mask | (std::uint32_t{1} << p), t, out);
  }

  DelayDistribution comp_;
  DelayDistribution comm_;
  bool lattice_;
  double step_ = 0.0;
  double mid0_ = 0.0;
  std::vector<double> kernel_;
  std::vector<std::pair<double, double>> kernel_atoms_;
};

}  // namespace

std::uint32_t task_mask(const TaskSet& tasks, int n) {
  std::uint32_t mask = 0;
  for (int t : tasks) {
    if (t < 1 || t > n) throw InvalidArgument("task index outside [1, n]");
    mask |= std::uint32_t{1} << (t - 1);
  }
  return mask;
}

TaskSet mask_tasks(std::uint32_t mask) {
  TaskSet out;
  for (int b = 0; mask; ++b, mask >>= 1)
    if (mask & 1u) out.push_back(b + 1);
  return out;
}

std::int64_t binomial(int n, int k) { return static_cast<std::int64_t>(binomial_wide(n, k)); }

std::int64_t subset_weight(int n, int k, int s) {
  if (s < n - k + 1 || s > n) return 0;
  const std::int64_t c = binomial(s - 1, n - k);
  return ((n - k + s + 1) % 2 == 0) ? c : -c;
}

std::vector<SubsetTerm> subset_terms(int n, int k) {
  check_subset_range(n);
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  std::vector<SubsetTerm> out;
  const std::uint32_t all = (std::uint32_t{1} << n);
  for (std::uint32_t mask = 1; mask < all; ++mask) {
    const int s = std::popcount(mask);
    if (s < n - k + 1) continue;
    SubsetTerm term;
    term.mask = mask;
    term.subset = mask_tasks(mask);
    term.coefficient = binomial(s - 1, n - k);
    term.sign = subset_weight(n, k, s) > 0 ? 1 : -1;
    out.push_back(std::move(term));
  }
  return out;
}

struct SurvivalEvaluator::Impl {
  int n = 0;
  int load = 0;
  int k = 0;
  bool feasible = true;
  bool finite_support = true;
  AnalyticOptions options;
  std::vector<WorkerLaw> laws;
  std::vector<int> law_of_worker;
  std::vector<std::vector<std::uint32_t>> position_bit;  // [worker][task-1]

  void worker_tables(double t, std::vector<std::vector<double>>& tables) const {
    tables.resize(laws.size());
    for (std::size_t l = 0; l < laws.size(); ++l) laws[l].tables(load, t, tables[l]);
  }

  // H for every subset mask of [n].
  void all_h(double t, std::vector<double>& h) const {
    std::vector<std::vector<double>> tables;
    worker_tables(t, tables);
    const std::size_t count = std::size_t{1} << n;
    h.assign(count, 1.0);
    std::vector<std::uint32_t> positions(count, 0);
    for (int i = 0; i < n; ++i) {
      const auto& table = tables[law_of_worker[i]];
      const auto& bits = position_bit[i];
      for (std::size_t s = 1; s < count; ++s) {
        positions[s] = positions[s & (s - 1)] | bits[std::countr_zero(s)];
        h[s] *= table[positions[s]];
      }
    }
  }

  double single_h(std::uint32_t subset, double t) const {
    std::vector<std::vector<double>> tables;
    worker_tables(t, tables);
    double h = 1.0;
    for (int i = 0; i < n; ++i) {
      std::uint32_t pos = 0;
      for (std::uint32_t s = subset; s; s &= s - 1) pos |= position_bit[i][std::countr_zero(s)];
      h *= tables[law_of_worker[i]][pos];
    }
    return h;
  }

  double raw(double t) const {
    std::vector<double> h;
    all_h(t, h);
    std::vector<double> weight(n + 1, 0.0);
    for (int s = 0; s <= n; ++s) weight[s] = static_cast<double>(subset_weight(n, k, s));
    double sum = 0.0;
    for (std::size_t s = 1; s < h.size(); ++s) {
      const double w = weight[std::popcount(s)];
      if (w != 0.0) sum += w * h[s];
    }
    return sum;
  }
};

SurvivalEvaluator::SurvivalEvaluator(const TaskOrderMatrix& schedule, const DelayModel& model, int k,
                                     AnalyticOptions options)
    : impl_(std::make_unique<Impl>()) {
  const int n = schedule.workers();
  check_subset_range(n);
  if (model.workers() != n) throw InvalidArgument("delay model worker count differs from the schedule");
  if (k < 1 || k > n) throw InvalidArgument("computation target k must lie in [1, n]");
  if (schedule.load() < 1 || schedule.load() > n) throw InvalidArgument("schedule load must lie in [1, n]");
  if (!(options.abs_tol > 0)) throw InvalidArgument("abs_tol must be positive");
  auto& impl = *impl_;
  impl.n = n;
  impl.load = schedule.load();
  impl.k = k;
  impl.options = options;
  impl.position_bit.assign(n, std::vector<std::uint32_t>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < impl.load; ++p) {
      const int task = schedule.at(i, p);
      if (task < 1 || task > n) throw InvalidArgument("schedule entry out of range [1, n]");
      // A repeated task arrives at its earliest copy, so it is late only if
      // every copy is.
      impl.position_bit[i][task - 1] |= std::uint32_t{1} << p;
    }
  }
  impl.feasible = schedule.distinct_tasks() >= k;
  impl.finite_support = model.is_finite_support();
  for (int i = 0; i < n; ++i) {
    int found = -1;
    for (std::size_t l = 0; l < impl.laws.size(); ++l)
      if (impl.laws[l].same_laws(model.comp(i), model.comm(i))) found = static_cast<int>(l);
    if (found < 0) {
      impl.laws.emplace_back(model.comp(i), model.comm(i), options.lattice_cells);
      found = static_cast<int>(impl.laws.size()) - 1;
    }
    impl.law_of_worker.push_back(found);
  }
  earliest_ = model.comp(0).lower() + model.comm(0).lower();
  latest_ = 0.0;
  for (int i = 0; i < n; ++i) {
    earliest_ = std::min(earliest_, model.comp(i).lower() + model.comm(i).lower());
    latest_ = std::max(latest_, impl.load * model.comp(i).upper() + model.comm(i).upper());
  }
}

SurvivalEvaluator::~SurvivalEvaluator() = default;
SurvivalEvaluator::SurvivalEvaluator(SurvivalEvaluator&&) noexcept = default;
SurvivalEvaluator& SurvivalEvaluator::operator=(SurvivalEvaluator&&) noexcept = default;

double SurvivalEvaluator::h_term(std::uint32_t subset, double t) const {
  if (impl_->n < 32 && subset >> impl_->n) throw InvalidArgument("subset mask outside [1, n]");
  if (subset == 0 || before_support(t)) return 1.0;
  if (t >= latest_) return 0.0;
  return impl_->single_h(subset, t);
}

bool SurvivalEvaluator::before_support(double t) const {
  return t < earliest_ || (t == earliest_ && !impl_->finite_support);
}

double SurvivalEvaluator::raw_survival(double t) const {
  if (!impl_->feasible || before_support(t)) return 1.0;
  if (t >= latest_) return 0.0;
  return impl_->raw(t);
}

double SurvivalEvaluator::survival(double t) const { return std::clamp(raw_survival(t), 0.0, 1.0); }

SurvivalCurve SurvivalEvaluator::curve(const std::vector<double>& grid) const {
  SurvivalCurve out;
  out.grid = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("survival grid must be increasing");
    out.values.push_back(survival(grid[i]));
  }
  return out;
}

namespace {

struct Simpson {
  const SurvivalEvaluator& eval;

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval.survival(lm), frm = eval.survival(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double integrate(double a, double b, double tol) const {
    constexpr int panels = 32;
    const double width = (b - a) / panels;
    double sum = 0.0;
    double fa = eval.survival(a);
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * width;
      const double hi = p + 1 == panels ? b : lo + width;
      const double fm = eval.survival(0.5 * (lo + hi));
      const double fb = eval.survival(hi);
      const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
      sum += refine(lo, hi, fa, fm, fb, whole, tol / panels, 40);
      fa = fb;
    }
    return sum;
  }
};

}  // namespace

double SurvivalEvaluator::mean() const {
  const auto& impl = *impl_;
  if (!impl.feasible) throw InfeasibleTarget("fewer distinct tasks than the computation target");
  if (impl.finite_support) {
    // The survival function is a step function; integrate it exactly over
    // the values an arrival can take.
    std::vector<double> breaks;
    for (const auto& law : impl.laws) law.arrival_values(impl.load, breaks);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double mean = breaks.front();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) mean += survival(breaks[i]) * (breaks[i + 1] - breaks[i]);
    return mean;
  }
  return earliest_ + Simpson{*this}.integrate(earliest_, latest_, impl.options.abs_tol);
}

double h_term(const TaskOrderMatrix& schedule, const DelayModel& model, const TaskSet& subset, double t,
              const AnalyticOptions& options) {
  SurvivalEvaluator eval(schedule, model, 1, options);
  return eval.h_term(task_mask(subset, schedule.workers()), t);
}

namespace {

void check_config(const TaskOrderMatrix& schedule, const CompletionConfig& config) {
  config.check();
  if (config.n != schedule.workers() || config.r != schedule.load())
    throw InvalidArgument("configuration does not match the schedule shape");
}

}  // namespace

double survival(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config, double t,
                const AnalyticOptions& options) {
  check_config(schedule, config);
  return SurvivalEvaluator(schedule, model, config.k, options).survival(t);
}

double average_completion(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config,
                          const AnalyticOptions& options) {
  check_config(schedule, config);
  return SurvivalEvaluator(schedule, model, config.k, options).mean();
}

SurvivalCurve survival_curve(const TaskOrderMatrix& schedule, const DelayModel& model, const CompletionConfig& config,
                             const std::vector<double>& grid, const AnalyticOptions& options) {
  check_config(schedule, config);
  return SurvivalEvaluator(schedule, model, config.k, options).curve(grid);
}

std::vector<double> default_grid(const TaskOrderMatrix& schedule, const DelayModel& model, int points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  double latest = 0.0;
  for (int i = 0; i < model.workers(); ++i)
    latest = std::max(latest, schedule.load() * model.comp(i).upper() + model.comm(i).upper());
  std::vector<double> grid(points);
  for (int p = 0; p < points; ++p) grid[p] = latest * p / (points - 1);
  return grid;
}

std::vector<SignedSet> signed_expansion(const TaskSet& above, const TaskSet& below) {
  if (above.empty()) throw InvalidArgument("signed_expansion needs a nonempty set");
  int n = 0;
  for (int t : above) n = std::max(n, t);
  for (int t : below) n = std::max(n, t);
  check_subset_range(n);
  const std::uint32_t a = task_mask(above, n);
  const std::uint32_t b = task_mask(below, n);
  if (a & b) throw InvalidArgument("signed_expansion sets overlap");
  if (std::popcount(a) != static_cast<int>(above.size()) || std::popcount(b) != static_cast<int>(below.size()))
    throw InvalidArgument("signed_expansion sets contain repeated tasks");

  std::vector<std::uint32_t> parts;
  for (std::uint32_t sub = b;; sub = (sub - 1) & b) {
    parts.push_back(sub);
    if (sub == 0) break;
  }
  std::sort(parts.begin(), parts.end(), [](std::uint32_t x, std::uint32_t y) {
    const int px = std::popcount(x), py = std::popcount(y);
    return px != py ? px < py : x < y;
  });
  std::vector<SignedSet> out;
  for (auto sub : parts) {
    SignedSet term;
    term.sign = std::popcount(sub) % 2 == 0 ? 1 : -1;
    term.mask = a | sub;
    term.tasks = mask_tasks(term.mask);
    out.push_back(std::move(term));
  }
  return out;
}

bool coefficient_identity_check(int s, int n, int k) {
  if (k < 1 || k > n || s < n - k + 1 || s > n || n > 60)
    throw InvalidArgument("coefficient identity needs 1 <= k <= n <= 60 and n-k+1 <= s <= n");
  Int lhs = 0;
  for (int i = n - k + 1; i <= s; ++i) lhs += ((i + s) % 2 == 0 ? 1 : -1) * binomial_wide(s, i);
  const Int rhs = ((n - k + s + 1) % 2 == 0 ? 1 : -1) * binomial_wide(s - 1, n - k);
  return lhs == rhs;
}

bool coefficient_identity_check_all(int max_n) {
  for (int n = 1; n <= max_n; ++n)
    for (int k = 1; k <= n; ++k)
      for (int s = n - k + 1; s <= n; ++s)
        if (!coefficient_identity_check(s, n, k)) return false;
  return true;
}

}  // namespace schedsim
