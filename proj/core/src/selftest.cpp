#include "vpflab/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "vpflab/oracle.hpp"
#include "vpflab/quantizer.hpp"
#include "vpflab/rng.hpp"
#include "vpflab/statmodel.hpp"

namespace vpflab {
namespace {

constexpr int kGridQ[] = {2, 8, 16, 31};
constexpr double kGridAlpha[] = {1.0, 1.25, 2.0};
constexpr QuantMode kGridMode[] = {QuantMode::Intra, QuantMode::Inter};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

}  // namespace

CheckResult check_quantizer_bruteforce() {
  Stopwatch clock;
  CheckResult result{"quantizer brute-force equivalence", true, "", 0.0};
  std::size_t points = 0;

  for (int q : kGridQ) {
    for (double alpha : kGridAlpha) {
      for (QuantMode mode : kGridMode) {
        const QuantSpec spec = make_spec(q, alpha, mode);
        const DeadzoneQuantizer quantizer(spec);
        const double delta = spec.delta();
        const bool intra = mode == QuantMode::Intra;
        const double bound =
            intra ? alpha * delta / 2.0 + 1.0 : 1.5 * delta + 1.0;

        for (int k = -1000; k <= 1000; ++k) {
          const double u = k * delta / 100.0;
          const std::int64_t idx = quantizer.quantize(u);
          const std::int64_t ref_idx = oracle::literal_quantize(u, delta, alpha);
          const double rec = quantizer.dequantize(idx);
          const double ref_rec =
              oracle::literal_dequantize(ref_idx, delta, intra);
          ++points;
          if (idx != ref_idx || rec != ref_rec) {
            result.passed = false;
            result.detail = format(
                "mismatch q=%d alpha=%g %s u=%.17g: %lld/%g vs %lld/%g", q,
                alpha, to_string(mode), u, static_cast<long long>(idx), rec,
                static_cast<long long>(ref_idx), ref_rec);
            result.seconds = clock.seconds();
            return result;
          }
          if (std::fabs(rec - u) > bound) {
            result.passed = false;
            result.detail =
                format("bound violated q=%d alpha=%g %s u=%.17g err=%g", q,
                       alpha, to_string(mode), u, std::fabs(rec - u));
            result.seconds = clock.seconds();
            return result;
          }
        }
      }
    }
  }
  result.detail = format("%zu points, 24 configurations", points);
  result.seconds = clock.seconds();
  return result;
}

CheckResult check_distortion_vs_mc(std::size_t samples, std::uint64_t seed,
                                   double sigma2_intra, double sigma2_inter) {
  Stopwatch clock;
  CheckResult result{"analytic distortion vs Monte Carlo", true, "", 0.0};
  double worst_z = 0.0;
  std::size_t cell = 0;

  for (int q : kGridQ) {
    for (double alpha : kGridAlpha) {
      for (QuantMode mode : kGridMode) {
        const bool intra = mode == QuantMode::Intra;
        const double delta = quant_step(q, kDefaultWeight);
        const double sigma2 = intra ? sigma2_intra : sigma2_inter;
        const double analytic =
            intra ? distortion_intra(delta, alpha, {0.0, sigma2})
                  : distortion_inter(delta, alpha, {0.0, sigma2});
        const oracle::McEstimate mc = oracle::mc_distortion(
            delta, alpha, intra, sigma2, samples, derive_seed(seed, {cell++}));
        const double z = std::fabs(analytic - mc.mean) / mc.std_error;
        if (z > worst_z) worst_z = z;
        if (z > 3.0) {
          result.passed = false;
          result.detail +=
              format("q=%d alpha=%g %s: analytic %.6g mc %.6g +- %.3g; ", q,
                     alpha, to_string(mode), analytic, mc.mean, mc.std_error);
        }
      }
    }
  }
  if (result.passed) {
    result.detail = format("24 cells, worst |z| = %.3f", worst_z);
  }
  result.seconds = clock.seconds();
  return result;
}

std::vector<CheckResult> run_selftest() {
  return {check_quantizer_bruteforce(), check_distortion_vs_mc()};
}

}  // namespace vpflab
