#include "schedsim/coded.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "schedsim/error.hpp"
#include "schedsim/rng.hpp"

namespace schedsim {

namespace {

void require_four(const PartitionedDataset& data) {
  if (data.parts() != 4) throw InvalidArgument("the coded demo is defined for exactly 4 partitions");
}

// Lagrange basis polynomial for node `node` over nodes 1..4, at x.
double basis(int node, double x) {
  double v = 1.0;
  for (int m = 1; m <= 4; ++m)
    if (m != node) v *= (x - m) / (node - m);
  return v;
}

// Barycentric evaluation of the interpolant through (xs, ys) at x.
Eigen::VectorXd barycentric(const std::vector<double>& xs, const std::vector<const Eigen::VectorXd*>& ys, double x) {
  std::vector<double> w(xs.size(), 1.0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t m = 0; m < xs.size(); ++m)
      if (m != j) w[j] /= xs[j] - xs[m];
  Eigen::VectorXd num = Eigen::VectorXd::Zero(ys.front()->size());
  double den = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (x == xs[j]) return *ys[j];
    const double c = w[j] / (x - xs[j]);
    num += c * *ys[j];
    den += c;
  }
  return num / den;
}

}  // namespace

std::array<EncodedPair, 4> pc_encode_n4r2(const PartitionedDataset& data) {
  require_four(data);
  const auto& x = data.x_parts;
  std::array<EncodedPair, 4> out;
  for (int i = 1; i <= 4; ++i) {
    const double a = -(i - 2.0), b = i - 1.0;
    out[i - 1] = {a * x[0] + b * x[2], a * x[1] + b * x[3]};
  }
  return out;
}

Eigen::VectorXd pc_worker_result(const EncodedPair& pair, const Eigen::VectorXd& theta) {
  return pair.first * (pair.first.transpose() * theta) + pair.second * (pair.second.transpose() * theta);
}

Eigen::VectorXd pc_decode_n4r2(std::span<const WorkerResult> results) {
  if (results.size() != 3) throw InvalidArgument("PC decoding needs exactly 3 worker results");
  std::vector<double> xs;
  std::vector<const Eigen::VectorXd*> ys;
  for (const auto& r : results) {
    if (r.worker < 1 || r.worker > 4) throw InvalidArgument("worker index must lie in 1..4");
    for (double seen : xs)
      if (seen == r.worker) throw InvalidArgument("duplicate worker index in PC decoding");
    xs.push_back(r.worker);
    ys.push_back(&r.value);
  }
  return barycentric(xs, ys, 1.0) + barycentric(xs, ys, 2.0);
}

std::array<double, 8> default_betas() {
  std::array<double, 8> betas{};
  for (int j = 0; j < 8; ++j) betas[j] = 2.5 + 2.0 * std::cos((2 * j + 1) * std::numbers::pi / 16.0);
  return betas;
}

Eigen::MatrixXd lagrange_combination(const PartitionedDataset& data, double beta) {
  require_four(data);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(data.x_parts[0].rows(), data.x_parts[0].cols());
  for (int node = 1; node <= 4; ++node) out += basis(node, beta) * data.x_parts[node - 1];
  return out;
}

std::array<EncodedPair, 4> pcmm_encode_n4r2(const PartitionedDataset& data, const std::array<double, 8>& betas) {
  require_four(data);
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      if (betas[a] == betas[b]) throw InvalidArgument("evaluation points must be distinct");
  std::array<EncodedPair, 4> out;
  for (int i = 0; i < 4; ++i)
    out[i] = {lagrange_combination(data, betas[2 * i]), lagrange_combination(data, betas[2 * i + 1])};
  return out;
}

Eigen::VectorXd pcmm_decode_n4r2(std::span<const PointResult> points) {
  if (points.size() < 7) throw InvalidArgument("PCMM decoding needs 7 evaluations");
  std::vector<double> xs;
  std::vector<const Eigen::VectorXd*> ys;
  for (std::size_t j = 0; j < 7; ++j) {
    for (double seen : xs)
      if (seen == points[j].beta) throw InvalidArgument("duplicate evaluation point in PCMM decoding");
    xs.push_back(points[j].beta);
    ys.push_back(&points[j].value);
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(ys.front()->size());
  for (int node = 1; node <= 4; ++node) sum += barycentric(xs, ys, node);
  return sum;
}

CodedDemoReport run_coded_demo(int dim, int samples, std::uint64_t seed, const std::array<double, 8>& betas) {
  const auto data = generate_dataset(samples, dim, 4, seed);
  Rng rng(splitmix64(seed ^ 0x7e7a7e7a7e7a7e7aULL));
  std::normal_distribution<double> normal;
  Eigen::VectorXd theta(dim);
  for (int j = 0; j < dim; ++j) theta(j) = normal(rng);

  Eigen::VectorXd truth = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < 4; ++i) truth += gradient_task(data.parts, i, theta);
  const double scale = truth.norm();

  CodedDemoReport report;
  const auto pc = pc_encode_n4r2(data.parts);
  std::vector<WorkerResult> workers;
  for (int i = 0; i < 4; ++i) workers.push_back({i + 1, pc_worker_result(pc[i], theta)});
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<WorkerResult> three;
    for (int i = 0; i < 4; ++i)
      if (i != skip) three.push_back(workers[i]);
    const double err = (pc_decode_n4r2(three) - truth).norm() / scale;
    report.pc_max_relative_error = std::max(report.pc_max_relative_error, err);
    ++report.pc_subsets;
  }

  const auto pcmm = pcmm_encode_n4r2(data.parts, betas);
  std::vector<PointResult> points;
  for (int i = 0; i < 4; ++i) {
    const auto& p = pcmm[i];
    points.push_back({betas[2 * i], p.first * (p.first.transpose() * theta)});
    points.push_back({betas[2 * i + 1], p.second * (p.second.transpose() * theta)});
  }
  for (int skip = 0; skip < 8; ++skip) {
    std::vector<PointResult> seven;
    for (int j = 0; j < 8; ++j)
      if (j != skip) seven.push_back(points[j]);
    const double err = (pcmm_decode_n4r2(seven) - truth).norm() / scale;
    report.pcmm_max_relative_error = std::max(report.pcmm_max_relative_error, err);
    ++report.pcmm_subsets;
  }
  return report;
}

}  // namespace schedsim
