#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "vpflab/quantizer.hpp"
#include "vpflab/rng.hpp"

namespace vpflab {

// Laplacian source law for one DCT coefficient.
struct LaplacianParams {
  double mu = 0.0;
  double sigma2 = 1.0;

  void validate() const;
  // Scale b of the density exp(-|x - mu| / b) / (2b); sigma2 = 2 b^2.
  double scale() const;
};

// Stop rule for the infinite cell sums of the distortion integrals.
struct TruncationPolicy {
  double tail_tol = 1e-10;
  std::size_t max_terms = 1'000'000;

  void validate() const;
};

// Macroblock-type probability law. q_max is fixed at 31.
struct MBProbModel {
  int q_max = kMaxQ;

  void validate() const;
};

// Thrown when a cell sum does not reach its tail tolerance within max_terms.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> laplacian_sample(const LaplacianParams& params,
                                     std::size_t count, RandomStream& rng);

std::vector<double> gaussian_sample(double mu, double sigma2,
                                    std::size_t count, RandomStream& rng);

// Probability of a P-MB in the first compression:
// 0.15 + 0.7 exp(-9 q1 / q_max). Decreasing in q1.
double p_pmb_first(int q1, const MBProbModel& model = {});

// Probability of a P-MB after recompression:
// 0.15 + (p1 - 0.15) exp(-9 q2 / q_max). Always below p_pmb_first(q1).
double p_pmb_second(int q1, int q2, const MBProbModel& model = {});

namespace detail {
// Formula bodies without domain checks, for direct unit testing.
double p_pmb_first_formula(double q1, double q_max);
double p_pmb_second_formula(double p1, double q2, double q_max);
}  // namespace detail

// Mean squared reconstruction error of a Laplacian source pushed through
// the quantizer: the deadzone integral of x^2 f(x) plus, for every cell on
// both sides, the integral of (x - level)^2 f(x). Each interval uses the
// closed-form Laplacian antiderivative; the cell sum stops once the
// probability mass outside the processed cells drops below
// policy.tail_tol. Throws TruncationError if max_terms cells are not
// enough.
double distortion(const DeadzoneQuantizer& quantizer,
                  const LaplacianParams& src,
                  const TruncationPolicy& policy = {});

// Intra reconstruction levels floor(k delta).
double distortion_intra(double delta, double alpha,
                        const LaplacianParams& src,
                        const TruncationPolicy& policy = {});

// Inter reconstruction levels floor(k delta + delta / 2).
double distortion_inter(double delta, double alpha,
                        const LaplacianParams& src,
                        const TruncationPolicy& policy = {});

}  // namespace vpflab
