#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "schedsim/delay.hpp"
#include "schedsim/monte_carlo.hpp"
#include "schedsim/schedule.hpp"

namespace schedsim {

/// Data split column-wise into n equal parts (after zero padding).
struct PartitionedDataset {
  std::vector<Eigen::MatrixXd> x_parts;  // each d x (padded N / n)
  std::vector<Eigen::VectorXd> y_parts;  // each padded N / n

  int parts() const { return static_cast<int>(x_parts.size()); }
  int dim() const { return x_parts.empty() ? 0 : static_cast<int>(x_parts.front().rows()); }
};

/// Splits a d x N data matrix and its labels into n parts, padding with zero
/// samples (zero column, zero label) when n does not divide N.
PartitionedDataset partition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n);

/// Linear regression data. Samples are the columns of x.
struct RegressionDataset {
  Eigen::MatrixXd x;  // d x N
  Eigen::VectorXd y;  // N
  Eigen::VectorXd weights;  // the generating vector
  int samples = 0;
  PartitionedDataset parts;
  std::vector<Eigen::VectorXd> xy_parts;  // X_i y_i, computed once
};

/// X ~ N(0,1) entrywise, y_i = (X_i + Z)^T U with one noise block Z shared by
/// all parts (entries N(0, noise_sd^2)) and U ~ U[0,1]^d.
RegressionDataset generate_dataset(int samples, int dim, int parts, std::uint64_t seed, double noise_sd = 0.1);

/// Builds the derived fields (parts, X_i y_i) for given data.
RegressionDataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y, int parts);

/// X_i X_i^T theta.
Eigen::VectorXd gradient_task(const PartitionedDataset& data, int part, const Eigen::VectorXd& theta);

/// (1/N) * ||X^T theta - y||^2 over the original samples.
double regression_loss(const RegressionDataset& data, const Eigen::VectorXd& theta);

struct DgdState {
  Eigen::VectorXd theta;
  int iteration = 0;
  double eta = 0.01;
  std::vector<double> loss_history;
  double elapsed_seconds = 0.0;
};

/// theta <- theta - eta * 2n/(kN) * sum over received parts of (X_p X_p^T theta - X_p y_p).
/// `parts` are 1-based partition indices and must be distinct.
void dgd_step(DgdState& state, const RegressionDataset& data, std::span<const int> parts);

/// theta <- theta - eta * (2/N) * (X X^T theta - X y).
void centralized_step(DgdState& state, const RegressionDataset& data);

struct DgdOptions {
  int iterations = 100;
  double eta = 0.01;
  std::uint64_t seed = 1;
  /// Relabel partitions with a fresh random permutation every this many
  /// iterations. Unset keeps the identity labelling.
  std::optional<int> reshuffle_every;
};

struct DgdIteration {
  int iteration = 0;  // 1-based
  double loss = 0.0;  // after the update
  double completion_seconds = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<int> applied_parts;
};

struct DgdRun {
  std::string scheme;
  std::vector<DgdIteration> iterations;
  std::vector<Eigen::VectorXd> thetas;  // after each iteration
};

/// Iteration l uses the delay trace of Monte Carlo replication l under the
/// same seed, so its completion time matches simulate/compare output.
DgdRun run_dgd(const SchemeSpec& scheme, const DelayModel& model, const CompletionConfig& config,
               const RegressionDataset& data, const DgdOptions& options);

/// Plain gradient descent with the same learning rate, for reference.
DgdRun run_centralized(const RegressionDataset& data, const DgdOptions& options);

}  // namespace schedsim
