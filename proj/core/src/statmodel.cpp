#include "vpflab/statmodel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace vpflab {
namespace {

void check_q(int q, const char* name) {
  if (q < kMinQ || q > kMaxQ) {
    throw std::domain_error(std::string(name) + " = " + std::to_string(q) +
                            " outside [2, 31]");
  }
}

// Integral over t in [t1, t2] (0 <= t1 <= t2 <= inf) of
// (t - s)^2 * (lambda / 2) * exp(-lambda t).
double half_moment(double t1, double t2, double s, double lambda) {
  auto antiderivative = [&](double t) {
    if (std::isinf(t)) return 0.0;
    const double d = t - s;
    return -0.5 * std::exp(-lambda * t) *
           (d * d + 2.0 * d / lambda + 2.0 / (lambda * lambda));
  };
  return antiderivative(t2) - antiderivative(t1);
}

// Integral over x in [a, b] of (x - r)^2 f(x) for the Laplacian density f.
double interval_moment(double a, double b, double r, double mu,
                       double lambda) {
  double total = 0.0;
  if (b > mu) {
    const double lo = std::max(a, mu);
    total += half_moment(lo - mu, b - mu, r - mu, lambda);
  }
  if (a < mu) {
    const double hi = std::min(b, mu);
    total += half_moment(mu - hi, mu - a, mu - r, lambda);
  }
  return total;
}

// P(X > x) for the Laplacian.
double upper_tail(double x, double mu, double lambda) {
  if (x >= mu) return 0.5 * std::exp(-lambda * (x - mu));
  return 1.0 - 0.5 * std::exp(-lambda * (mu - x));
}

}  // namespace

void LaplacianParams::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::domain_error("Laplacian variance must be positive");
  }
  if (!std::isfinite(mu)) throw std::domain_error("Laplacian mean not finite");
}

double LaplacianParams::scale() const { return std::sqrt(sigma2 / 2.0); }

void TruncationPolicy::validate() const {
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw std::domain_error("tail_tol must lie in (0, 1)");
  }
  if (max_terms < 1) throw std::domain_error("max_terms must be >= 1");
}

void MBProbModel::validate() const {
  if (q_max != kMaxQ) throw std::domain_error("q_max must be 31");
}

std::vector<double> laplacian_sample(const LaplacianParams& params,
                                     std::size_t count, RandomStream& rng) {
  params.validate();
  if (count == 0) throw std::domain_error("sample count must be >= 1");
  const double b = params.scale();
  std::vector<double> out(count);
  for (double& x : out) {
    const double u = rng.uniform() - 0.5;
    const double magnitude = -b * std::log(1.0 - 2.0 * std::fabs(u));
    x = params.mu + (u < 0.0 ? -magnitude : magnitude);
  }
  return out;
}

std::vector<double> gaussian_sample(double mu, double sigma2,
                                    std::size_t count, RandomStream& rng) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::domain_error("Gaussian variance must be positive");
  }
  if (count == 0) throw std::domain_error("sample count must be >= 1");
  const double sigma = std::sqrt(sigma2);
  std::vector<double> out(count);
  for (double& x : out) x = mu + sigma * rng.standard_normal();
  return out;
}

namespace detail {

double p_pmb_first_formula(double q1, double q_max) {
  return 0.15 + 0.7 * std::exp(-9.0 * q1 / q_max);
}

double p_pmb_second_formula(double p1, double q2, double q_max) {
  return 0.15 + (p1 - 0.15) * std::exp(-9.0 * q2 / q_max);
}

}  // namespace detail

double p_pmb_first(int q1, const MBProbModel& model) {
  model.validate();
  check_q(q1, "q1");
  return detail::p_pmb_first_formula(q1, model.q_max);
}

double p_pmb_second(int q1, int q2, const MBProbModel& model) {
  check_q(q2, "q2");
  const double p1 = p_pmb_first(q1, model);
  return detail::p_pmb_second_formula(p1, q2, model.q_max);
}

double distortion(const DeadzoneQuantizer& quantizer,
                  const LaplacianParams& src, const TruncationPolicy& policy) {
  src.validate();
  policy.validate();
  const double mu = src.mu;
  const double lambda = 1.0 / src.scale();

  const double half_width = quantizer.edge(1);
  double total = interval_moment(-half_width, half_width, 0.0, mu, lambda);

  for (std::int64_t k = 1;; ++k) {
    const double lo = quantizer.edge(k);
    const double tail =
        upper_tail(lo, mu, lambda) + (1.0 - upper_tail(-lo, mu, lambda));
    if (tail < policy.tail_tol) break;
    if (static_cast<std::size_t>(k) > policy.max_terms) {
      throw TruncationError("distortion sum did not reach tail tolerance " +
                            std::to_string(policy.tail_tol) + " within " +
                            std::to_string(policy.max_terms) + " cells");
    }
    const double hi = quantizer.edge(k + 1);
    const double level = quantizer.level(k);
    total += interval_moment(lo, hi, level, mu, lambda);
    total += interval_moment(-hi, -lo, -level, mu, lambda);
  }
  return total;
}

double distortion_intra(double delta, double alpha,
                        const LaplacianParams& src,
                        const TruncationPolicy& policy) {
  return distortion(DeadzoneQuantizer(delta, alpha, QuantMode::Intra), src,
                    policy);
}

double distortion_inter(double delta, double alpha,
                        const LaplacianParams& src,
                        const TruncationPolicy& policy) {
  return distortion(DeadzoneQuantizer(delta, alpha, QuantMode::Inter), src,
                    policy);
}

}  // namespace vpflab
