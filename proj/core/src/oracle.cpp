#include "vpflab/oracle.hpp"

#include <cmath>

#include "vpflab/rng.hpp"

namespace vpflab::oracle {
namespace {

double sign_of(double v) {
  if (v < 0) return -1.0;
  if (v > 0) return 1.0;
  return 0.0;
}

}  // namespace

std::int64_t literal_quantize(double u, double delta, double alpha) {
  return static_cast<std::int64_t>(
      sign_of(u) * std::floor((std::abs(u) + delta * (1 - alpha / 2)) / delta));
}

double literal_dequantize(std::int64_t uq, double delta, bool intra) {
  const double q = static_cast<double>(uq);
  if (intra) return sign_of(q) * std::floor(delta * std::abs(q));
  return sign_of(q) * std::floor(delta * std::abs(q) + delta / 2);
}

McEstimate mc_distortion(double delta, double alpha, bool intra,
                         double sigma2, std::size_t samples,
                         std::uint64_t seed) {
  RandomStream rng(seed);
  const double b = std::sqrt(sigma2 / 2);
  // Welford accumulation of the squared error.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    // Laplacian as the difference of two independent exponentials.
    const double x = b * (-std::log(rng.uniform()) + std::log(rng.uniform()));
    const double rec =
        literal_dequantize(literal_quantize(x, delta, alpha), delta, intra);
    const double sq = (x - rec) * (x - rec);
    const double d = sq - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (sq - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace vpflab::oracle
