#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schedsim/rng.hpp"

namespace schedsim {

/// Normal law N(mu, sigma^2) restricted to [mu - a, mu + b]. All times are
/// in seconds.
class TruncatedGaussian {
 public:
  TruncatedGaussian(double mu, double sigma, double a, double b);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double lower() const { return mu_ - a_; }
  double upper() const { return mu_ + b_; }

  double pdf(double t) const;
  double cdf(double t) const;
  /// Inverse of cdf on (0, 1); the result always lies in [lower, upper].
  double quantile(double u) const;
  double mean() const;

  bool operator==(const TruncatedGaussian& o) const {
    return mu_ == o.mu_ && sigma_ == o.sigma_ && a_ == o.a_ && b_ == o.b_;
  }

 private:
  double mu_, sigma_, a_, b_;
  double phi_lo_;  // standard normal cdf at -a/sigma
  double mass_;    // Phi(b/sigma) - Phi(-a/sigma)
};

/// Finite support law with strictly increasing values.
class Discrete {
 public:
  Discrete(std::vector<double> values, std::vector<double> probs);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Discrete&) const = default;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
};

struct Constant {
  double value = 0.0;
  bool operator==(const Constant&) const = default;
};

/// Delay law of one stage (computation or communication) at one worker.
class DelayDistribution {
 public:
  using Kind = std::variant<TruncatedGaussian, Discrete, Constant>;

  DelayDistribution(TruncatedGaussian tg) : kind_(std::move(tg)) {}
  DelayDistribution(Discrete d) : kind_(std::move(d)) {}
  DelayDistribution(Constant c);

  const Kind& kind() const { return kind_; }
  bool is_finite_support() const { return !std::holds_alternative<TruncatedGaussian>(kind_); }

  double lower() const;
  double upper() const;
  double mean() const;
  /// Pr{X <= t}.
  double cdf(double t) const;
  /// Pr{offset + X > t}. The sum is formed explicitly for atoms so strict
  /// comparisons agree with direct evaluation of arrival times.
  double exceeds(double offset, double t) const;
  double quantile(double u) const;
  double sample(Rng& rng) const { return quantile(uniform01(rng)); }

  /// Atoms (value, probability); a single atom for Constant. Throws for the
  /// continuous kind.
  std::vector<std::pair<double, double>> atoms() const;

  std::string describe() const;

  bool operator==(const DelayDistribution&) const = default;

 private:
  Kind kind_;
};

/// Probability density of a truncated Gaussian, zero outside its support.
inline double tg_pdf(const TruncatedGaussian& d, double t) { return d.pdf(t); }
inline double tg_cdf(const TruncatedGaussian& d, double t) { return d.cdf(t); }
inline double tg_sample(const TruncatedGaussian& d, Rng& rng) { return d.quantile(uniform01(rng)); }

/// Per-worker laws of the computation and communication stages. Delays at a
/// worker are i.i.d. across positions and independent across workers.
class DelayModel {
 public:
  DelayModel(std::vector<DelayDistribution> comp, std::vector<DelayDistribution> comm);
  /// Same pair of laws at every worker.
  static DelayModel broadcast(int workers, const DelayDistribution& comp, const DelayDistribution& comm);

  int workers() const { return static_cast<int>(comp_.size()); }
  const DelayDistribution& comp(int worker) const { return comp_[worker]; }
  const DelayDistribution& comm(int worker) const { return comm_[worker]; }
  bool is_finite_support() const;

 private:
  std::vector<DelayDistribution> comp_;
  std::vector<DelayDistribution> comm_;
};

/// Realized delays indexed by (worker, position in execution order).
class DelayTrace {
 public:
  DelayTrace() = default;
  DelayTrace(int workers, int positions);
  DelayTrace(int workers, int positions, std::vector<double> comp, std::vector<double> comm);

  int workers() const { return workers_; }
  int positions() const { return positions_; }
  double comp(int worker, int position) const { return comp_[worker * positions_ + position]; }
  double comm(int worker, int position) const { return comm_[worker * positions_ + position]; }
  double& comp(int worker, int position) { return comp_[worker * positions_ + position]; }
  double& comm(int worker, int position) { return comm_[worker * positions_ + position]; }

  /// Arrival instant of the j-th result of worker i: comp(i,0..j) + comm(i,j).
  double arrival(int worker, int position) const;

 private:
  int workers_ = 0;
  int positions_ = 0;
  std::vector<double> comp_;
  std::vector<double> comm_;
};

/// Draws a trace position by position (all workers at position 0, then 1,
/// ...), so a trace with more positions extends a shorter one drawn from the
/// same stream.
DelayTrace sample_trace(const DelayModel& model, int positions, Rng& rng);
void sample_trace_into(const DelayModel& model, Rng& rng, DelayTrace& trace);

enum class Scenario { One, Two };

Scenario parse_scenario(std::string_view name);

/// Truncated-Gaussian settings of the simulated comparison. Scenario 2
/// draws per-worker means as random permutations of arithmetic
/// progressions using `rng`; Scenario 1 ignores it.
DelayModel scenario_preset(Scenario scenario, int n, Rng& rng);
DelayModel scenario_preset(std::string_view name, int n, Rng& rng);

}  // namespace schedsim
