// One PASS/FAIL line per acceptance criterion. Tolerances and sample sizes
// are fixed here; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "schedsim/analytic.hpp"
#include "schedsim/coded.hpp"
#include "schedsim/completion.hpp"
#include "schedsim/dgd.hpp"
#include "schedsim/monte_carlo.hpp"
#include "schedsim/oracle.hpp"
#include "schedsim/schedule.hpp"

using namespace schedsim;

namespace {

// ---- pinned tolerances and sizes ------------------------------------------

constexpr double kOracleSurvivalTol = 1e-9;
constexpr double kOracleMeanTol = 1e-8;  // seconds
constexpr int kOracleGridPoints = 50;
constexpr double kIdentityTol = 1e-12;

constexpr int kDominanceTraces = 10000;

constexpr std::size_t kScenarioOneReps = 200000;
constexpr double kRaTargetOneMs = 0.86;
constexpr double kReductionOnePct = 19.45;
constexpr std::size_t kScenarioTwoRepsPerSeed = 25000;
constexpr int kScenarioTwoPermSeeds = 20;
constexpr double kRaTargetTwoMs = 1.64;
constexpr double kReductionTwoPct = 16.32;
constexpr double kRaRelTol = 0.05;
constexpr double kReductionTolPp = 2.0;
constexpr double kOrderingStderrs = 3.0;

constexpr std::size_t kAgreementReps = 1000000;
constexpr double kAgreementStderrs = 3.0;

constexpr double kPcDecodeTol = 1e-6;
constexpr double kPcmmDecodeTol = 1e-4;
constexpr double kDgdTol = 1e-9;

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DelayModel scenario_one(int n) {
  Rng rng(1);
  return scenario_preset(Scenario::One, n, rng);
}

// Homogeneous and heterogeneous two-point laws.
std::vector<DelayModel> two_point_models(int n) {
  std::vector<DelayModel> out;
  out.push_back(DelayModel::broadcast(n, Discrete({0.25, 1.0}, {0.5, 0.5}), Discrete({0.5, 2.0}, {0.75, 0.25})));
  std::vector<DelayDistribution> comp, comm;
  for (int i = 0; i < n; ++i) {
    comp.emplace_back(Discrete({0.2 + 0.1 * i, 0.9}, {0.3 + 0.1 * i, 0.7 - 0.1 * i}));
    comm.emplace_back(Discrete({0.4, 1.3 + 0.25 * i}, {0.6, 0.4}));
  }
  out.emplace_back(comp, comm);
  return out;
}

// ---- criteria -------------------------------------------------------------

Outcome constructors() {
  const TaskOrderMatrix cs({{1, 2, 3}, {2, 3, 4}, {3, 4, 1}, {4, 1, 2}});
  const TaskOrderMatrix ss({{1, 2, 3}, {2, 1, 4}, {3, 4, 1}, {4, 3, 2}});
  const bool ok_cs = cyclic_schedule(4, 3) == cs;
  const bool ok_ss = staircase_schedule(4, 3) == ss;
  return {ok_cs && ok_ss, std::string("CS(4,3) ") + (ok_cs ? "matches" : "differs") + ", SS(4,3) " +
                              (ok_ss ? "matches" : "differs")};
}

Outcome oracle_equivalence() {
  double worst_survival = 0.0, worst_mean = 0.0;
  int cases = 0;
  for (int n : {2, 3})
    for (int r : {1, 2})
      for (int k = 1; k <= n; ++k)
        for (const auto& model : two_point_models(n))
          for (const auto& m : {cyclic_schedule(n, r), staircase_schedule(n, r)}) {
            SurvivalEvaluator eval(m, model, k);
            const double lo = 0.0, hi = 1.05 * eval.latest();
            for (int i = 0; i < kOracleGridPoints; ++i) {
              const double t = lo + (hi - lo) * i / (kOracleGridPoints - 1);
              worst_survival = std::max(worst_survival, std::abs(eval.survival(t) - exact_survival(m, model, k, t)));
            }
            worst_mean = std::max(worst_mean, std::abs(eval.mean() - exact_mean(m, model, k)));
            ++cases;
          }
  return {worst_survival <= kOracleSurvivalTol && worst_mean <= kOracleMeanTol,
          std::to_string(cases) + " cases, max survival gap " + fmt("%.2e", worst_survival) + ", max mean gap " +
              fmt("%.2e", worst_mean) + " s"};
}

Outcome identities() {
  double worst_expand = 0.0, worst_step = 0.0;
  int checks = 0;
  for (const auto& model : two_point_models(3)) {
    for (const auto& m : {cyclic_schedule(3, 2), staircase_schedule(3, 2), cyclic_schedule(3, 1)}) {
      SurvivalEvaluator eval(m, model, 1);
      for (std::uint32_t gmask = 1; gmask < 8; ++gmask) {
        const TaskSet above = mask_tasks(gmask);
        const TaskSet below = mask_tasks(7u & ~gmask);
        for (double t = 0.0; t <= 5.0; t += 0.125) {
          const double direct = exact_h(m, model, above, below, t);
          double expanded = 0.0;
          for (const auto& term : signed_expansion(above, below)) expanded += term.sign * eval.h_term(term.mask, t);
          worst_expand = std::max(worst_expand, std::abs(expanded - direct));
          for (int g : below) {
            TaskSet rest, grown = above;
            for (int b : below)
              if (b != g) rest.push_back(b);
            grown.push_back(g);
            std::sort(grown.begin(), grown.end());
            const double step = exact_h(m, model, above, rest, t) - exact_h(m, model, grown, rest, t);
            worst_step = std::max(worst_step, std::abs(step - direct));
          }
          ++checks;
        }
      }
    }
  }
  const bool coefficients = coefficient_identity_check_all(12);
  return {worst_expand <= kIdentityTol && worst_step <= kIdentityTol && coefficients,
          std::to_string(checks) + " (G, t) checks, expansion gap " + fmt("%.1e", worst_expand) +
              ", one-step gap " + fmt("%.1e", worst_step) + ", coefficient identity n<=12 " +
              (coefficients ? "holds" : "FAILS")};
}

Outcome dominance() {
  const int n = 8;
  const auto model = scenario_one(n);
  DelayTrace trace(n, n);
  long violations = 0, comparisons = 0;
  std::string first;
  for (int rep = 0; rep < kDominanceTraces; ++rep) {
    Rng rng(replication_seed(kSeed, rep));
    sample_trace_into(model, rng, trace);
    Rng schedule_rng(schedule_seed(kSeed, rep));
    const auto ra = random_assignment_schedule(n, schedule_rng);
    for (int r : {2, 4, 8}) {
      const auto cs = cyclic_schedule(n, r);
      const auto ss = staircase_schedule(n, r);
      const double pc = pc_completion(trace, n, r);
      const double pcmm = pcmm_completion(trace, n, r);
      for (int k : {4, 8}) {
        const double lb = lower_bound_completion(trace, k, r);
        // RA always runs at load n, so its own config bounds it.
        const double lb_full = lower_bound_completion(trace, k, n);
        const std::tuple<const char*, double, double> others[] = {{"CS", lb, completion_time(cs, trace, k)},
                                                                  {"SS", lb, completion_time(ss, trace, k)},
                                                                  {"RA", lb_full, completion_time(ra, trace, k)},
                                                                  {"PC", lb, pc},
                                                                  {"PCMM", lb, pcmm}};
        for (const auto& [name, bound, value] : others) {
          ++comparisons;
          if (bound > value) {
            if (violations++ == 0)
              first = std::string(" (first: ") + name + " at trace " + std::to_string(rep) + ", r=" +
                      std::to_string(r) + ", k=" + std::to_string(k) + ")";
          }
        }
      }
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(comparisons) + " comparisons" + first};
}

// Paired standard error of a - b from per-replication samples.
double paired_stderr(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return mean_and_stderr(diff).second;
}

Outcome scenario_reproduction() {
  std::ostringstream detail;
  bool pass = true;
  const int n = 16;

  // Scenario 1.
  const auto model = scenario_one(n);
  const std::vector<SchemeSpec> schemes{SchemeSpec::staircase(), SchemeSpec::cyclic(), SchemeSpec::pcmm(),
                                        SchemeSpec::pc(), SchemeSpec::random_assignment()};
  MonteCarloOptions options;
  options.reps = kScenarioOneReps;
  options.seed = kSeed;
  options.keep_samples = true;
  double ra_mean = 0.0, ss_full = 0.0;
  std::vector<std::string> order_failures;
  for (int r = 2; r <= n; ++r) {
    const auto reports = compare(schemes, model, {n, r, n}, options);
    const auto& ss = reports[0];
    const auto& cs = reports[1];
    const auto& pcmm = reports[2];
    const auto& pc = reports[3];
    if (r == n) ra_mean = reports[4].mean_seconds, ss_full = ss.mean_seconds;
    auto check = [&](const SimulationReport& lo, const SimulationReport& hi) {
      const double slack = kOrderingStderrs * paired_stderr(lo.samples, hi.samples);
      if (lo.mean_seconds - hi.mean_seconds > slack)
        order_failures.push_back(lo.scheme + "<=" + hi.scheme + " at r=" + std::to_string(r) + " (" +
                                 fmt("%.4f", lo.mean_seconds * 1e3) + " vs " + fmt("%.4f", hi.mean_seconds * 1e3) +
                                 " ms, 3se " + fmt("%.1e", slack * 1e3) + ")");
    };
    check(ss, cs);
    check(cs, pcmm);
    check(pcmm, pc);
  }
  const double ra_ms = ra_mean * 1e3;
  const double reduction = 100.0 * (ra_mean - ss_full) / ra_mean;
  const bool ra_ok = std::abs(ra_ms - kRaTargetOneMs) <= kRaRelTol * kRaTargetOneMs;
  const bool red_ok = std::abs(reduction - kReductionOnePct) <= kReductionTolPp;
  const bool order_ok = order_failures.empty();
  pass = pass && ra_ok && red_ok && order_ok;
  detail << "S1: RA " << fmt("%.4f", ra_ms) << " ms [" << (ra_ok ? "ok" : "off") << "], SS reduction "
         << fmt("%.2f", reduction) << "% vs " << kReductionOnePct << " [" << (red_ok ? "ok" : "off") << "], ordering "
         << (order_ok ? "ok" : std::to_string(order_failures.size()) + " violation(s): " + order_failures.front());

  // Scenario 2: averaged over random permutations of the worker means.
  std::vector<DelayModel> models;
  for (int p = 0; p < kScenarioTwoPermSeeds; ++p) {
    Rng rng(1 + p);
    models.push_back(scenario_preset(Scenario::Two, n, rng));
  }
  const std::vector<SchemeSpec> pair{SchemeSpec::staircase(), SchemeSpec::random_assignment()};
  const std::vector<int> loads{n};
  MonteCarloOptions two;
  two.reps = kScenarioTwoRepsPerSeed;
  two.seed = kSeed;
  const auto averaged = averaged_load_sweep(pair, models, n, n, loads, two);
  const double ra2 = averaged[0][1].mean_seconds, ss2 = averaged[0][0].mean_seconds;
  const double reduction2 = 100.0 * (ra2 - ss2) / ra2;
  const bool ra2_ok = std::abs(ra2 * 1e3 - kRaTargetTwoMs) <= kRaRelTol * kRaTargetTwoMs;
  const bool red2_ok = std::abs(reduction2 - kReductionTwoPct) <= kReductionTolPp;
  pass = pass && ra2_ok && red2_ok;
  detail << "; S2 (" << kScenarioTwoPermSeeds << " permutations): RA " << fmt("%.4f", ra2 * 1e3) << " ms ["
         << (ra2_ok ? "ok" : "off") << "], SS reduction " << fmt("%.2f", reduction2) << "% vs " << kReductionTwoPct
         << " [" << (red2_ok ? "ok" : "off") << "]";
  return {pass, detail.str()};
}

Outcome mc_analytic_agreement() {
  const int n = 6;
  const auto model = scenario_one(n);
  const std::vector<SchemeSpec> schemes{SchemeSpec::cyclic(), SchemeSpec::staircase()};
  const std::vector<int> loads{3, 6};
  MonteCarloOptions options;
  options.reps = kAgreementReps;
  options.seed = kSeed;
  double worst = 0.0;
  int cases = 0;
  for (int k : {3, 6}) {
    const auto sweep = load_sweep(schemes, model, n, k, loads, options);
    for (std::size_t l = 0; l < loads.size(); ++l) {
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto m = s == 0 ? cyclic_schedule(n, loads[l]) : staircase_schedule(n, loads[l]);
        const double analytic = SurvivalEvaluator(m, model, k).mean();
        const auto& rep = sweep[l][s];
        worst = std::max(worst, std::abs(rep.mean_seconds - analytic) / rep.stderr_seconds);
        ++cases;
      }
    }
  }
  return {worst <= kAgreementStderrs,
          std::to_string(cases) + " cases (r in {3,6}), max |MC - analytic| = " + fmt("%.2f", worst) + " stderr"};
}

Outcome coded() {
  const auto report = run_coded_demo(8, 32, kSeed);
  const bool ok = report.pc_subsets == 4 && report.pcmm_subsets == 8 &&
                  report.pc_max_relative_error <= kPcDecodeTol && report.pcmm_max_relative_error <= kPcmmDecodeTol;
  return {ok, "PC " + std::to_string(report.pc_subsets) + " subsets, max rel err " +
                  fmt("%.1e", report.pc_max_relative_error) + "; PCMM " + std::to_string(report.pcmm_subsets) +
                  " subsets, max rel err " + fmt("%.1e", report.pcmm_max_relative_error)};
}

Outcome dgd() {
  const int n = 5;
  const auto data = generate_dataset(100, 10, n, kSeed);
  const auto model = scenario_one(n);
  DgdOptions options;
  options.iterations = 100;
  options.eta = 0.01;
  options.seed = kSeed;
  const auto reference = run_centralized(data, options);
  double worst = 0.0;
  for (const auto& spec : {SchemeSpec::cyclic(), SchemeSpec::staircase(), SchemeSpec::random_assignment()}) {
    const auto run = run_dgd(spec, model, {n, 3, n}, data, options);
    for (int l = 0; l < options.iterations; ++l)
      worst = std::max(worst, (run.thetas[l] - reference.thetas[l]).cwiseAbs().maxCoeff());
  }
  options.iterations = 200;
  const auto long_run = run_dgd(SchemeSpec::cyclic(), model, {n, n, n}, data, options);
  int increases = 0;
  for (int l = 1; l < options.iterations; ++l)
    if (!(long_run.iterations[l].loss < long_run.iterations[l - 1].loss)) ++increases;
  return {worst <= kDgdTol && increases == 0,
          "max coordinate gap to centralized GD " + fmt("%.1e", worst) + " over 100 iterations; " +
              std::to_string(increases) + " non-decreasing steps in 200 (loss " +
              fmt("%.4g", long_run.iterations.front().loss) + " -> " + fmt("%.4g", long_run.iterations.back().loss) +
              ")"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "constructor fidelity", constructors},
      {2, "analytic survival vs enumeration", oracle_equivalence},
      {3, "expansion identities", identities},
      {4, "per-trace lower-bound dominance", dominance},
      {5, "scenario reproduction", scenario_reproduction},
      {6, "Monte Carlo vs analytic mean", mc_analytic_agreement},
      {7, "coded decoding", coded},
      {8, "gradient descent equivalence", dgd},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("criterion %d %s  %s: %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf(
      "criterion 9 NOT REPRODUCIBLE  cluster measurements: wall-clock figures measured on real hardware are outside "
      "the scope of a simulator; covered instead by criteria 4-6\n");
  return failures == 0 ? 0 : 1;
}
