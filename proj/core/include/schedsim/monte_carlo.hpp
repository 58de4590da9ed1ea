#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schedsim/completion.hpp"
#include "schedsim/delay.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {

enum class SchemeKind { Cyclic, Staircase, RandomAssignment, Custom, PolynomialCoded, PolynomialCodedMultiMessage, LowerBound };

/// One scheme under evaluation. Custom carries its own matrix.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::Cyclic;
  std::optional<TaskOrderMatrix> custom;

  static SchemeSpec cyclic() { return {SchemeKind::Cyclic, {}}; }
  static SchemeSpec staircase() { return {SchemeKind::Staircase, {}}; }
  static SchemeSpec random_assignment() { return {SchemeKind::RandomAssignment, {}}; }
  static SchemeSpec pc() { return {SchemeKind::PolynomialCoded, {}}; }
  static SchemeSpec pcmm() { return {SchemeKind::PolynomialCodedMultiMessage, {}}; }
  static SchemeSpec lower_bound() { return {SchemeKind::LowerBound, {}}; }
  static SchemeSpec with_matrix(TaskOrderMatrix matrix) { return {SchemeKind::Custom, std::move(matrix)}; }

  /// Accepts cs, ss, ra, pc, pcmm, lb (case-insensitive). "custom" needs a
  /// matrix and is rejected here.
  static SchemeSpec parse(std::string_view name);

  std::string label() const;
  /// Trace positions the scheme consumes under `config`.
  int load(const CompletionConfig& config) const;
  /// The target the scheme completes on: config.k, or n for the coded ones.
  int target(const CompletionConfig& config) const;
  /// Throws Infeasible / InfeasibleTarget when the scheme cannot run.
  void check(const CompletionConfig& config) const;
};

std::vector<SchemeSpec> parse_scheme_list(std::string_view comma_separated);

struct MonteCarloOptions {
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  bool keep_samples = false;
  /// When nonempty, the report carries the empirical Pr{T > t} at these t.
  std::vector<double> survival_grid;
};

struct SimulationReport {
  std::string scheme;
  int n = 0;
  int r = 0;
  int k = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double mean_seconds = 0.0;
  double stderr_seconds = 0.0;
  /// Mean count of computations finishing after completion (uncoded schemes).
  double mean_wasted = 0.0;
  std::vector<double> samples;
  std::vector<double> survival_grid;
  std::vector<double> survival;
};

/// Completion of one scheme on one replication. `rep_schedule_seed` drives
/// the RA draw.
double scheme_completion(const SchemeSpec& scheme, const CompletionConfig& config, const DelayTrace& trace,
                         std::uint64_t rep_schedule_seed, int* wasted = nullptr);

SimulationReport monte_carlo(const SchemeSpec& scheme, const DelayModel& model, const CompletionConfig& config,
                             const MonteCarloOptions& options);

/// All schemes on the same traces (common random numbers): replication `rep`
/// uses one trace for every scheme.
std::vector<SimulationReport> compare(std::span<const SchemeSpec> schemes, const DelayModel& model,
                                      const CompletionConfig& config, const MonteCarloOptions& options);

/// compare() over several loads at once; each replication draws one trace
/// long enough for every (scheme, load) pair and loads use its prefixes.
/// Result is indexed [load][scheme].
std::vector<std::vector<SimulationReport>> load_sweep(std::span<const SchemeSpec> schemes, const DelayModel& model,
                                                      int n, int k, std::span<const int> loads,
                                                      const MonteCarloOptions& options);

/// load_sweep averaged over several delay models with equal weight (e.g.
/// random draws of a heterogeneous preset). Model m runs with seed
/// options.seed + m. Means and wasted counts are averaged, standard errors
/// combined as sqrt(sum se^2) / count, and reps summed.
std::vector<std::vector<SimulationReport>> averaged_load_sweep(std::span<const SchemeSpec> schemes,
                                                               std::span<const DelayModel> models, int n, int k,
                                                               std::span<const int> loads,
                                                               const MonteCarloOptions& options);

/// Mean and standard error (sample stddev / sqrt(count)) of `values`.
std::pair<double, double> mean_and_stderr(std::span<const double> values);

}  // namespace schedsim
