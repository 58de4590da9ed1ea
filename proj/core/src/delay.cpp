#include "schedsim/delay.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "schedsim/error.hpp"

namespace schedsim {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double std_normal_quantile(double p) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

TruncatedGaussian::TruncatedGaussian(double mu, double sigma, double a, double b)
    : mu_(mu), sigma_(sigma), a_(a), b_(b) {
  if (!(sigma > 0) || !(a > 0) || !(b > 0) || !std::isfinite(mu) || !std::isfinite(sigma) ||
      !std::isfinite(a) || !std::isfinite(b))
    throw InvalidArgument("truncated gaussian needs finite mu and positive sigma, a, b");
  if (mu - a < 0) throw InvalidArgument("truncated gaussian support must be nonnegative (mu - a >= 0)");
  phi_lo_ = std_normal_cdf(-a / sigma);
  mass_ = std_normal_cdf(b / sigma) - phi_lo_;
  if (!(mass_ > 0)) throw InvalidArgument("truncated gaussian support carries no probability mass");
}

double TruncatedGaussian::pdf(double t) const {
  if (t < lower() || t > upper()) return 0.0;
  return std_normal_pdf((t - mu_) / sigma_) / (sigma_ * mass_);
}

double TruncatedGaussian::cdf(double t) const {
  if (t <= lower()) return 0.0;
  if (t >= upper()) return 1.0;
  return std::clamp((std_normal_cdf((t - mu_) / sigma_) - phi_lo_) / mass_, 0.0, 1.0);
}

double TruncatedGaussian::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("quantile argument must lie in (0, 1)");
  const double p = phi_lo_ + u * mass_;
  return std::clamp(mu_ + sigma_ * std_normal_quantile(p), lower(), upper());
}

double TruncatedGaussian::mean() const {
  return mu_ + sigma_ * (std_normal_pdf(-a_ / sigma_) - std_normal_pdf(b_ / sigma_)) / mass_;
}

Discrete::Discrete(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty() || values_.size() != probs_.size())
    throw InvalidArgument("discrete law needs matching, nonempty support and probabilities");
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0) throw InvalidArgument("discrete support must be nonnegative");
    if (i > 0 && !(values_[i] > values_[i - 1])) throw InvalidArgument("discrete support must be strictly increasing");
    if (!(probs_[i] > 0)) throw InvalidArgument("discrete probabilities must be positive");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("discrete probabilities must sum to 1");
}

DelayDistribution::DelayDistribution(Constant c) : kind_(c) {
  if (!std::isfinite(c.value) || c.value < 0) throw InvalidArgument("constant delay must be finite and nonnegative");
}

double DelayDistribution::lower() const {
  return std::visit(Overloaded{[](const TruncatedGaussian& d) { return d.lower(); },
                               [](const Discrete& d) { return d.values().front(); },
                               [](const Constant& c) { return c.value; }},
                    kind_);
}

double DelayDistribution::upper() const {
  return std::visit(Overloaded{[](const TruncatedGaussian& d) { return d.upper(); },
                               [](const Discrete& d) { return d.values().back(); },
                               [](const Constant& c) { return c.value; }},
                    kind_);
}

double DelayDistribution::mean() const {
  return std::visit(Overloaded{[](const TruncatedGaussian& d) { return d.mean(); },
                               [](const Discrete& d) {
                                 double m = 0.0;
                                 for (std::size_t i = 0; i < d.values().size(); ++i) m += d.values()[i] * d.probs()[i];
                                 return m;
                               },
                               [](const Constant& c) { return c.value; }},
                    kind_);
}

double DelayDistribution::cdf(double t) const {
  return std::visit(Overloaded{[t](const TruncatedGaussian& d) { return d.cdf(t); },
                               [t](const Discrete& d) {
                                 double p = 0.0;
                                 for (std::size_t i = 0; i < d.values().size() && d.values()[i] <= t; ++i)
                                   p += d.probs()[i];
                                 return std::min(p, 1.0);
                               },
                               [t](const Constant& c) { return c.value <= t ? 1.0 : 0.0; }},
                    kind_);
}

double DelayDistribution::exceeds(double offset, double t) const {
  return std::visit(Overloaded{[=](const TruncatedGaussian& d) { return 1.0 - d.cdf(t - offset); },
                               [=](const Discrete& d) {
                                 double p = 0.0;
                                 for (std::size_t i = 0; i < d.values().size(); ++i)
                                   if (offset + d.values()[i] > t) p += d.probs()[i];
                                 return p;
                               },
                               [=](const Constant& c) { return offset + c.value > t ? 1.0 : 0.0; }},
                    kind_);
}

double DelayDistribution::quantile(double u) const {
  return std::visit(Overloaded{[u](const TruncatedGaussian& d) { return d.quantile(u); },
                               [u](const Discrete& d) {
                                 double acc = 0.0;
                                 for (std::size_t i = 0; i + 1 < d.values().size(); ++i) {
                                   acc += d.probs()[i];
                                   if (u < acc) return d.values()[i];
                                 }
                                 return d.values().back();
                               },
                               [](const Constant& c) { return c.value; }},
                    kind_);
}

std::vector<std::pair<double, double>> DelayDistribution::atoms() const {
  return std::visit(Overloaded{[](const TruncatedGaussian&) -> std::vector<std::pair<double, double>> {
                                 throw InvalidArgument("truncated gaussian has no finite support");
                               },
                               [](const Discrete& d) {
                                 std::vector<std::pair<double, double>> out;
                                 for (std::size_t i = 0; i < d.values().size(); ++i)
                                   out.emplace_back(d.values()[i], d.probs()[i]);
                                 return out;
                               },
                               [](const Constant& c) { return std::vector<std::pair<double, double>>{{c.value, 1.0}}; }},
                    kind_);
}

std::string DelayDistribution::describe() const {
  std::ostringstream out;
  out.precision(6);
  std::visit(Overloaded{[&](const TruncatedGaussian& d) {
                          out << "truncated_gaussian(mu=" << d.mu() << ", sigma=" << d.sigma() << ", a=" << d.a()
                              << ", b=" << d.b() << ")";
                        },
                        [&](const Discrete& d) { out << "discrete(" << d.values().size() << " atoms)"; },
                        [&](const Constant& c) { out << "constant(" << c.value << ")"; }},
             kind_);
  return out.str();
}

DelayModel::DelayModel(std::vector<DelayDistribution> comp, std::vector<DelayDistribution> comm)
    : comp_(std::move(comp)), comm_(std::move(comm)) {
  if (comp_.empty()) throw InvalidArgument("delay model needs at least one worker");
  if (comp_.size() != comm_.size())
    throw InvalidArgument("delay model needs one computation and one communication law per worker");
}

DelayModel DelayModel::broadcast(int workers, const DelayDistribution& comp, const DelayDistribution& comm) {
  if (workers < 1) throw InvalidArgument("delay model needs at least one worker");
  return {std::vector<DelayDistribution>(workers, comp), std::vector<DelayDistribution>(workers, comm)};
}

bool DelayModel::is_finite_support() const {
  return std::all_of(comp_.begin(), comp_.end(), [](const auto& d) { return d.is_finite_support(); }) &&
         std::all_of(comm_.begin(), comm_.end(), [](const auto& d) { return d.is_finite_support(); });
}

DelayTrace::DelayTrace(int workers, int positions)
    : workers_(workers),
      positions_(positions),
      comp_(static_cast<std::size_t>(workers) * positions),
      comm_(static_cast<std::size_t>(workers) * positions) {
  if (workers < 1 || positions < 1) throw InvalidArgument("trace needs positive shape");
}

DelayTrace::DelayTrace(int workers, int positions, std::vector<double> comp, std::vector<double> comm)
    : workers_(workers), positions_(positions), comp_(std::move(comp)), comm_(std::move(comm)) {
  const auto size = static_cast<std::size_t>(workers) * positions;
  if (workers < 1 || positions < 1 || comp_.size() != size || comm_.size() != size)
    throw InvalidArgument("trace data does not match its shape");
  for (std::size_t i = 0; i < size; ++i)
    if (!std::isfinite(comp_[i]) || !std::isfinite(comm_[i]) || comp_[i] < 0 || comm_[i] < 0)
      throw InvalidArgument("trace delays must be finite and nonnegative");
}

double DelayTrace::arrival(int worker, int position) const {
  double finish = 0.0;
  for (int m = 0; m <= position; ++m) finish += comp(worker, m);
  return finish + comm(worker, position);
}

void sample_trace_into(const DelayModel& model, Rng& rng, DelayTrace& trace) {
  if (trace.workers() != model.workers()) throw InvalidArgument("trace and model disagree on worker count");
  for (int j = 0; j < trace.positions(); ++j) {
    for (int i = 0; i < trace.workers(); ++i) {
      trace.comp(i, j) = model.comp(i).sample(rng);
      trace.comm(i, j) = model.comm(i).sample(rng);
    }
  }
}

DelayTrace sample_trace(const DelayModel& model, int positions, Rng& rng) {
  DelayTrace trace(model.workers(), positions);
  sample_trace_into(model, rng, trace);
  return trace;
}

Scenario parse_scenario(std::string_view name) {
  if (name == "scenario1" || name == "1") return Scenario::One;
  if (name == "scenario2" || name == "2") return Scenario::Two;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

DelayModel scenario_preset(Scenario scenario, int n, Rng& rng) {
  if (n < 1) throw InvalidArgument("scenario needs at least one worker");
  // Shared spread parameters; symmetric truncation a = b.
  constexpr double comp_sigma = 1e-4, comp_half_width = 3e-5;
  constexpr double comm_sigma = 2e-4, comm_half_width = 2e-4;

  std::vector<double> comp_mu(n, 1e-4);
  std::vector<double> comm_mu(n, 5e-4);
  if (scenario == Scenario::Two) {
    for (int m = 0; m < n; ++m) {
      comp_mu[m] = (3.0 + m) / 3.0 * 1e-4;
      comm_mu[m] = (10.0 + m) / 2.0 * 1e-4;
    }
    auto permute = [&rng](std::vector<double>& v) {
      for (int j = static_cast<int>(v.size()) - 1; j > 0; --j) {
        const auto pick = static_cast<int>(uniform01(rng) * (j + 1));
        std::swap(v[j], v[std::min(pick, j)]);
      }
    };
    permute(comp_mu);
    permute(comm_mu);
  }

  std::vector<DelayDistribution> comp;
  std::vector<DelayDistribution> comm;
  for (int i = 0; i < n; ++i) {
    comp.emplace_back(TruncatedGaussian(comp_mu[i], comp_sigma, comp_half_width, comp_half_width));
    comm.emplace_back(TruncatedGaussian(comm_mu[i], comm_sigma, comm_half_width, comm_half_width));
  }
  return {std::move(comp), std::move(comm)};
}

DelayModel scenario_preset(std::string_view name, int n, Rng& rng) {
  return scenario_preset(parse_scenario(name), n, rng);
}

}  // namespace schedsim
