#include "schedsim/dgd.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "schedsim/completion.hpp"
#include "schedsim/error.hpp"
#include "schedsim/rng.hpp"

namespace schedsim {

PartitionedDataset partition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n) {
  if (n < 1) throw InvalidArgument("need at least one partition");
  if (x.cols() != y.size()) throw InvalidArgument("data and labels disagree on sample count");
  const Eigen::Index per = (x.cols() + n - 1) / n;
  PartitionedDataset out;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(x.rows(), per);
    Eigen::VectorXd yi = Eigen::VectorXd::Zero(per);
    const Eigen::Index first = i * per;
    const Eigen::Index count = std::clamp<Eigen::Index>(x.cols() - first, 0, per);
    if (count > 0) {
      xi.leftCols(count) = x.middleCols(first, count);
      yi.head(count) = y.segment(first, count);
    }
    out.x_parts.push_back(std::move(xi));
    out.y_parts.push_back(std::move(yi));
  }
  return out;
}

RegressionDataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y, int parts) {
  RegressionDataset data;
  data.samples = static_cast<int>(x.cols());
  data.parts = partition(x, y, parts);
  for (int i = 0; i < parts; ++i) data.xy_parts.push_back(data.parts.x_parts[i] * data.parts.y_parts[i]);
  data.x = std::move(x);
  data.y = std::move(y);
  return data;
}

RegressionDataset generate_dataset(int samples, int dim, int parts, std::uint64_t seed, double noise_sd) {
  if (samples < 1 || dim < 1 || parts < 1) throw InvalidArgument("dataset needs positive N, d and n");
  if (noise_sd < 0) throw InvalidArgument("noise standard deviation must be nonnegative");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int per = (samples + parts - 1) / parts;
  Eigen::MatrixXd x(dim, samples);
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) = normal(rng);
  Eigen::MatrixXd noise(dim, per);
  for (Eigen::Index c = 0; c < noise.cols(); ++c)
    for (Eigen::Index r = 0; r < noise.rows(); ++r) noise(r, c) = noise_sd * normal(rng);
  Eigen::VectorXd u(dim);
  for (Eigen::Index r = 0; r < dim; ++r) u(r) = unit(rng);

  // Labels follow each part's layout so the shared noise block lines up with
  // the part's columns.
  Eigen::VectorXd y(samples);
  for (int c = 0; c < samples; ++c) y(c) = (x.col(c) + noise.col(c % per)).dot(u);

  auto data = make_dataset(std::move(x), std::move(y), parts);
  data.weights = std::move(u);
  return data;
}

Eigen::VectorXd gradient_task(const PartitionedDataset& data, int part, const Eigen::VectorXd& theta) {
  if (part < 0 || part >= data.parts()) throw InvalidArgument("partition index out of range");
  const auto& xi = data.x_parts[part];
  if (theta.size() != xi.rows()) throw InvalidArgument("parameter dimension does not match the data");
  return xi * (xi.transpose() * theta);
}

double regression_loss(const RegressionDataset& data, const Eigen::VectorXd& theta) {
  return (data.x.transpose() * theta - data.y).squaredNorm() / data.samples;
}

void dgd_step(DgdState& state, const RegressionDataset& data, std::span<const int> parts) {
  const int n = data.parts.parts();
  const int k = static_cast<int>(parts.size());
  if (k < 1) throw InvalidArgument("an update needs at least one partition");
  std::vector<bool> seen(n, false);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(state.theta.size());
  for (int p : parts) {
    if (p < 1 || p > n) throw InvalidArgument("partition index out of range");
    if (seen[p - 1]) throw InvalidArgument("duplicate partition index in update");
    seen[p - 1] = true;
    sum += gradient_task(data.parts, p - 1, state.theta) - data.xy_parts[p - 1];
  }
  const double scale = state.eta * 2.0 * n / (static_cast<double>(k) * data.samples);
  state.theta -= scale * sum;
  ++state.iteration;
}

void centralized_step(DgdState& state, const RegressionDataset& data) {
  const Eigen::VectorXd grad = data.x * (data.x.transpose() * state.theta) - data.x * data.y;
  state.theta -= state.eta * 2.0 / data.samples * grad;
  ++state.iteration;
}

DgdRun run_dgd(const SchemeSpec& scheme, const DelayModel& model, const CompletionConfig& config,
               const RegressionDataset& data, const DgdOptions& options) {
  scheme.check(config);
  if (scheme.kind == SchemeKind::LowerBound) throw InvalidArgument("the lower bound is not a runnable scheme");
  if (data.parts.parts() != config.n) throw InvalidArgument("dataset partition count differs from n");
  if (model.workers() != config.n) throw InvalidArgument("delay model worker count differs from n");
  if (options.iterations < 0) throw InvalidArgument("iterations must be nonnegative");
  if (options.reshuffle_every && *options.reshuffle_every < 1)
    throw InvalidArgument("reshuffle period must be positive");

  const bool coded = scheme.kind == SchemeKind::PolynomialCoded ||
                     scheme.kind == SchemeKind::PolynomialCodedMultiMessage;
  std::optional<TaskOrderMatrix> fixed;
  if (scheme.kind == SchemeKind::Cyclic) fixed = cyclic_schedule(config.n, config.r);
  if (scheme.kind == SchemeKind::Staircase) fixed = staircase_schedule(config.n, config.r);
  if (scheme.kind == SchemeKind::Custom) fixed = scheme.custom;

  DgdState state;
  state.theta = Eigen::VectorXd::Zero(data.parts.dim());
  state.eta = options.eta;
  std::vector<int> label(config.n);
  std::iota(label.begin(), label.end(), 1);
  std::vector<int> everything(label);

  DgdRun run;
  run.scheme = scheme.label();
  DelayTrace trace(config.n, scheme.load(config));
  for (int l = 0; l < options.iterations; ++l) {
    if (options.reshuffle_every && l > 0 && l % *options.reshuffle_every == 0) {
      Rng shuffle(schedule_seed(options.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(l)));
      for (int j = config.n - 1; j > 0; --j)
        std::swap(label[j], label[std::min(j, static_cast<int>(uniform01(shuffle) * (j + 1)))]);
    }
    Rng rng(replication_seed(options.seed, static_cast<std::uint64_t>(l)));
    sample_trace_into(model, rng, trace);

    DgdIteration it;
    it.iteration = l + 1;
    if (coded) {
      it.completion_seconds = scheme_completion(scheme, config, trace, 0);
      it.applied_parts = everything;
    } else {
      ReceivedTasks received;
      if (fixed) {
        received = first_k_distinct(*fixed, trace, config.k);
      } else {
        Rng schedule_rng(schedule_seed(options.seed, static_cast<std::uint64_t>(l)));
        received = first_k_distinct(random_assignment_schedule(config.n, schedule_rng), trace, config.k);
      }
      it.completion_seconds = received.completion;
      for (int task : received.tasks) it.applied_parts.push_back(label[task - 1]);
    }
    dgd_step(state, data, it.applied_parts);
    state.elapsed_seconds += it.completion_seconds;
    it.elapsed_seconds = state.elapsed_seconds;
    it.loss = regression_loss(data, state.theta);
    state.loss_history.push_back(it.loss);
    run.iterations.push_back(std::move(it));
    run.thetas.push_back(state.theta);
  }
  return run;
}

DgdRun run_centralized(const RegressionDataset& data, const DgdOptions& options) {
  DgdState state;
  state.theta = Eigen::VectorXd::Zero(data.parts.dim());
  state.eta = options.eta;
  DgdRun run;
  run.scheme = "GD";
  for (int l = 0; l < options.iterations; ++l) {
    centralized_step(state, data);
    DgdIteration it;
    it.iteration = l + 1;
    it.loss = regression_loss(data, state.theta);
    run.iterations.push_back(std::move(it));
    run.thetas.push_back(state.theta);
  }
  return run;
}

}  // namespace schedsim
