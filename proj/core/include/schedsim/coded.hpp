#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "schedsim/dgd.hpp"

namespace schedsim {

// Worked polynomial codes for four workers with two partitions' worth of
// load each. Workers are numbered 1..4.

struct EncodedPair {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
};

/// Worker i holds -(i-2) X1 + (i-1) X3 and -(i-2) X2 + (i-1) X4.
std::array<EncodedPair, 4> pc_encode_n4r2(const PartitionedDataset& data);

/// What worker i returns: A A^T theta + B B^T theta for its pair (A, B).
Eigen::VectorXd pc_worker_result(const EncodedPair& pair, const Eigen::VectorXd& theta);

struct WorkerResult {
  int worker = 0;  // 1..4
  Eigen::VectorXd value;
};

/// Interpolates the degree-2 polynomial through three worker results and
/// returns its values at 1 and 2 summed, i.e. sum_i X_i X_i^T theta.
Eigen::VectorXd pc_decode_n4r2(std::span<const WorkerResult> results);

/// Default evaluation points: 8 Chebyshev points on [0.5, 4.5].
std::array<double, 8> default_betas();

/// Worker i holds the Lagrange combination of X1..X4 (nodes 1..4) evaluated
/// at betas[2(i-1)] and betas[2(i-1)+1].
std::array<EncodedPair, 4> pcmm_encode_n4r2(const PartitionedDataset& data, const std::array<double, 8>& betas);

/// Lagrange combination of X1..X4 at a single point.
Eigen::MatrixXd lagrange_combination(const PartitionedDataset& data, double beta);

struct PointResult {
  double beta = 0.0;
  Eigen::VectorXd value;  // X(beta) X(beta)^T theta
};

/// Barycentric interpolation of the degree-6 polynomial through the first
/// seven points; returns its values at 1..4 summed.
Eigen::VectorXd pcmm_decode_n4r2(std::span<const PointResult> points);

struct CodedDemoReport {
  /// Largest relative error against X X^T theta over every 3-subset of workers.
  double pc_max_relative_error = 0.0;
  /// Same over every 7-subset of the 8 evaluations.
  double pcmm_max_relative_error = 0.0;
  int pc_subsets = 0;
  int pcmm_subsets = 0;
};

CodedDemoReport run_coded_demo(int dim, int samples, std::uint64_t seed,
                               const std::array<double, 8>& betas = default_betas());

}  // namespace schedsim
