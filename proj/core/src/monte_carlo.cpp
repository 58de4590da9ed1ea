#include "schedsim/monte_carlo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "schedsim/error.hpp"
#include "schedsim/rng.hpp"

namespace schedsim {

SchemeSpec SchemeSpec::parse(std::string_view name) {
  const auto first = name.find_first_not_of(" \t");
  name = first == std::string_view::npos ? std::string_view{} : name.substr(first, name.find_last_not_of(" \t") - first + 1);
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "cs") return cyclic();
  if (lower == "ss") return staircase();
  if (lower == "ra") return random_assignment();
  if (lower == "pc") return pc();
  if (lower == "pcmm") return pcmm();
  if (lower == "lb") return lower_bound();
  if (lower == "custom") throw InvalidArgument("custom scheme needs a schedule file");
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeSpec> parse_scheme_list(std::string_view list) {
  std::vector<SchemeSpec> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto token = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!token.empty()) out.push_back(SchemeSpec::parse(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw InvalidArgument("empty scheme list");
  return out;
}

std::string SchemeSpec::label() const {
  switch (kind) {
    case SchemeKind::Cyclic: return "CS";
    case SchemeKind::Staircase: return "SS";
    case SchemeKind::RandomAssignment: return "RA";
    case SchemeKind::Custom: return "CUSTOM";
    case SchemeKind::PolynomialCoded: return "PC";
    case SchemeKind::PolynomialCodedMultiMessage: return "PCMM";
    case SchemeKind::LowerBound: return "LB";
  }
  return "?";
}

int SchemeSpec::load(const CompletionConfig& config) const {
  switch (kind) {
    case SchemeKind::RandomAssignment: return config.n;
    case SchemeKind::Custom: return custom ? custom->load() : config.r;
    default: return config.r;
  }
}

int SchemeSpec::target(const CompletionConfig& config) const {
  if (kind == SchemeKind::PolynomialCoded || kind == SchemeKind::PolynomialCodedMultiMessage) return config.n;
  return config.k;
}

void SchemeSpec::check(const CompletionConfig& config) const {
  config.check();
  switch (kind) {
    case SchemeKind::PolynomialCoded:
    case SchemeKind::PolynomialCodedMultiMessage:
      if (config.r < 2) throw Infeasible(label() + " requires r >= 2");
      break;
    case SchemeKind::Custom: {
      if (!custom) throw InvalidArgument("custom scheme without a matrix");
      const CompletionConfig own{config.n, custom->load(), config.k};
      const auto report = validate(*custom, own);
      if (!report.ok()) {
        const bool target_only = report.errors.size() == 1 && report.errors.front().starts_with("only ");
        if (target_only) throw InfeasibleTarget("custom schedule: " + report.errors.front());
        throw InvalidArgument("custom schedule: " + report.errors.front());
      }
      break;
    }
    default: break;
  }
}

double scheme_completion(const SchemeSpec& scheme, const CompletionConfig& config, const DelayTrace& trace,
                         std::uint64_t rep_schedule_seed, int* wasted) {
  double t = 0.0;
  int load = scheme.load(config);
  switch (scheme.kind) {
    case SchemeKind::Cyclic: t = completion_time(cyclic_schedule(config.n, config.r), trace, config.k); break;
    case SchemeKind::Staircase: t = completion_time(staircase_schedule(config.n, config.r), trace, config.k); break;
    case SchemeKind::RandomAssignment: {
      Rng rng(rep_schedule_seed);
      t = completion_time(random_assignment_schedule(config.n, rng), trace, config.k);
      break;
    }
    case SchemeKind::Custom: t = completion_time(*scheme.custom, trace, config.k); break;
    case SchemeKind::PolynomialCoded: t = pc_completion(trace, config.n, config.r); break;
    case SchemeKind::PolynomialCodedMultiMessage: t = pcmm_completion(trace, config.n, config.r); break;
    case SchemeKind::LowerBound: t = lower_bound_completion(trace, config.k, config.r); break;
  }
  if (wasted) *wasted = wasted_computations(trace, load, t);
  return t;
}

std::pair<double, double> mean_and_stderr(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  if (count < 2) return {mean, 0.0};
  return {mean, std::sqrt(m2 / static_cast<double>(count - 1)) / std::sqrt(static_cast<double>(count))};
}

namespace {

// A (scheme, config) pair evaluated on every replication.
struct Slot {
  SchemeSpec scheme;
  CompletionConfig config;
  std::optional<TaskOrderMatrix> fixed;  // CS/SS matrices built once
};

// Welford accumulator; blocks are merged in index order so the reduction is
// independent of how blocks were spread over threads.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double wasted = 0.0;

  void add(double v) {
    count += 1.0;
    const double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
    wasted += o.wasted;
  }
};

constexpr std::size_t kBlock = 1024;

struct BlockResult {
  std::vector<Moments> moments;                   // per slot
  std::vector<std::vector<std::size_t>> exceed;   // per slot, per grid point
};

double evaluate_slot(const Slot& slot, const DelayTrace& trace, std::uint64_t sched_seed, int* wasted) {
  if (slot.fixed) {
    const double t = completion_time(*slot.fixed, trace, slot.config.k);
    *wasted = wasted_computations(trace, slot.fixed->load(), t);
    return t;
  }
  return scheme_completion(slot.scheme, slot.config, trace, sched_seed, wasted);
}

bool same_work(const Slot& a, const Slot& b) {
  return a.scheme.kind == b.scheme.kind && a.scheme.kind != SchemeKind::Custom && a.config.n == b.config.n &&
         a.config.r == b.config.r && a.config.k == b.config.k;
}

std::vector<SimulationReport> run_unique_slots(const std::vector<Slot>& slots, const DelayModel& model,
                                               const MonteCarloOptions& options) {
  if (options.reps < 1) throw InvalidArgument("reps must be at least 1");
  for (const auto& s : slots) {
    if (s.config.n != model.workers()) throw InvalidArgument("delay model worker count differs from n");
    s.scheme.check(s.config);
  }
  int positions = 1;
  for (const auto& s : slots) positions = std::max(positions, s.scheme.load(s.config));

  const std::size_t reps = options.reps;
  const std::size_t blocks = (reps + kBlock - 1) / kBlock;
  const auto& grid = options.survival_grid;
  std::vector<BlockResult> results(blocks);
  std::vector<std::vector<double>> samples(slots.size());
  if (options.keep_samples)
    for (auto& s : samples) s.assign(reps, 0.0);

  auto run_block = [&](std::size_t b) {
    BlockResult& out = results[b];
    out.moments.assign(slots.size(), Moments{});
    out.exceed.assign(slots.size(), std::vector<std::size_t>(grid.size(), 0));
    DelayTrace trace(model.workers(), positions);
    const std::size_t end = std::min(reps, (b + 1) * kBlock);
    for (std::size_t rep = b * kBlock; rep < end; ++rep) {
      Rng rng(replication_seed(options.seed, rep));
      sample_trace_into(model, rng, trace);
      const std::uint64_t sched_seed = schedule_seed(options.seed, rep);
      for (std::size_t s = 0; s < slots.size(); ++s) {
        int wasted = 0;
        const double t = evaluate_slot(slots[s], trace, sched_seed, &wasted);
        out.moments[s].add(t);
        out.moments[s].wasted += wasted;
        if (options.keep_samples) samples[s][rep] = t;
        for (std::size_t g = 0; g < grid.size(); ++g)
          if (t > grid[g]) ++out.exceed[s][g];
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < blocks; b += threads) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<SimulationReport> reports;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    Moments total;
    std::vector<std::size_t> exceed(grid.size(), 0);
    for (const auto& block : results) {
      total.merge(block.moments[s]);
      for (std::size_t g = 0; g < grid.size(); ++g) exceed[g] += block.exceed[s][g];
    }
    SimulationReport report;
    report.scheme = slots[s].scheme.label();
    report.n = slots[s].config.n;
    report.r = slots[s].scheme.load(slots[s].config);
    report.k = slots[s].scheme.target(slots[s].config);
    report.reps = reps;
    report.seed = options.seed;
    report.mean_seconds = total.mean;
    report.stderr_seconds = reps > 1 ? std::sqrt(total.m2 / (total.count - 1.0)) / std::sqrt(total.count) : 0.0;
    report.mean_wasted = total.wasted / total.count;
    if (options.keep_samples) report.samples = std::move(samples[s]);
    if (!grid.empty()) {
      report.survival_grid = grid;
      for (auto c : exceed) report.survival.push_back(static_cast<double>(c) / static_cast<double>(reps));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

// Slots that would compute the same numbers (RA at every load of a sweep)
// are evaluated once.
std::vector<SimulationReport> run_slots(const std::vector<Slot>& slots, const DelayModel& model,
                                        const MonteCarloOptions& options) {
  std::vector<Slot> unique;
  std::vector<std::size_t> alias;
  for (const auto& s : slots) {
    std::size_t u = 0;
    while (u < unique.size() && !same_work(unique[u], s)) ++u;
    if (u == unique.size()) unique.push_back(s);
    alias.push_back(u);
  }
  const auto computed = run_unique_slots(unique, model, options);
  std::vector<SimulationReport> out;
  for (auto u : alias) out.push_back(computed[u]);
  return out;
}

Slot make_slot(const SchemeSpec& scheme, CompletionConfig config) {
  if (scheme.kind == SchemeKind::RandomAssignment) config.r = config.n;
  Slot slot{scheme, config, std::nullopt};
  if (scheme.kind == SchemeKind::Cyclic) slot.fixed = cyclic_schedule(config.n, config.r);
  if (scheme.kind == SchemeKind::Staircase) slot.fixed = staircase_schedule(config.n, config.r);
  if (scheme.kind == SchemeKind::Custom && scheme.custom) slot.fixed = scheme.custom;
  return slot;
}

}  // namespace

SimulationReport monte_carlo(const SchemeSpec& scheme, const DelayModel& model, const CompletionConfig& config,
                             const MonteCarloOptions& options) {
  scheme.check(config);
  return run_slots({make_slot(scheme, config)}, model, options).front();
}

std::vector<SimulationReport> compare(std::span<const SchemeSpec> schemes, const DelayModel& model,
                                      const CompletionConfig& config, const MonteCarloOptions& options) {
  std::vector<Slot> slots;
  for (const auto& s : schemes) {
    s.check(config);
    slots.push_back(make_slot(s, config));
  }
  return run_slots(slots, model, options);
}

std::vector<std::vector<SimulationReport>> load_sweep(std::span<const SchemeSpec> schemes, const DelayModel& model,
                                                      int n, int k, std::span<const int> loads,
                                                      const MonteCarloOptions& options) {
  if (loads.empty()) throw InvalidArgument("load sweep needs at least one load");
  std::vector<Slot> slots;
  for (int r : loads) {
    const CompletionConfig config{n, r, k};
    for (const auto& s : schemes) {
      s.check(config);
      slots.push_back(make_slot(s, config));
    }
  }
  auto flat = run_slots(slots, model, options);
  std::vector<std::vector<SimulationReport>> out(loads.size());
  for (std::size_t i = 0; i < flat.size(); ++i) out[i / schemes.size()].push_back(std::move(flat[i]));
  return out;
}

std::vector<std::vector<SimulationReport>> averaged_load_sweep(std::span<const SchemeSpec> schemes,
                                                               std::span<const DelayModel> models, int n, int k,
                                                               std::span<const int> loads,
                                                               const MonteCarloOptions& options) {
  if (models.empty()) throw InvalidArgument("averaged sweep needs at least one delay model");
  std::vector<std::vector<SimulationReport>> total;
  const double count = static_cast<double>(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    MonteCarloOptions opts = options;
    opts.seed = options.seed + m;
    opts.keep_samples = false;
    opts.survival_grid.clear();
    auto part = load_sweep(schemes, models[m], n, k, loads, opts);
    if (m == 0) {
      total = std::move(part);
      for (auto& row : total)
        for (auto& r : row) {
          r.mean_seconds /= count;
          r.stderr_seconds *= r.stderr_seconds;
          r.mean_wasted /= count;
        }
      continue;
    }
    for (std::size_t l = 0; l < total.size(); ++l)
      for (std::size_t s = 0; s < total[l].size(); ++s) {
        auto& acc = total[l][s];
        const auto& r = part[l][s];
        acc.mean_seconds += r.mean_seconds / count;
        acc.stderr_seconds += r.stderr_seconds * r.stderr_seconds;
        acc.mean_wasted += r.mean_wasted / count;
        acc.reps += r.reps;
      }
  }
  for (auto& row : total)
    for (auto& r : row) {
      r.stderr_seconds = std::sqrt(r.stderr_seconds) / count;
      r.seed = options.seed;
    }
  return total;
}

}  // namespace schedsim
