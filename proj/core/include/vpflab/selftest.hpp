#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vpflab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Every (q, alpha, mode) in {2,8,16,31} x {1,5/4,2} x {intra,inter}: the
// quantizer agrees exactly with the literal oracle on a delta/100 grid over
// [-10 delta, 10 delta] and never exceeds its reconstruction bound.
CheckResult check_quantizer_bruteforce();

// Same 24-point grid: analytic distortion within 3 standard errors of a
// Monte Carlo estimate with `samples` draws. Intra cells use
// sigma2_intra, inter cells sigma2_inter.
CheckResult check_distortion_vs_mc(std::size_t samples = 1'000'000,
                                   std::uint64_t seed = 20240611,
                                   double sigma2_intra = 2500.0,
                                   double sigma2_inter = 100.0);

std::vector<CheckResult> run_selftest();

}  // namespace vpflab
