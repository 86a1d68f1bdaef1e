#pragma once

#include <cstddef>
#include <cstdint>

// Reference computations that deliberately share no code with the
// quantizer or the distortion integrals. Used by the self-test, the unit
// tests and the acceptance suite.
namespace vpflab::oracle {

// Quantization rule written out term by term.
std::int64_t literal_quantize(double u, double delta, double alpha);

// De-quantization rule written out term by term.
double literal_dequantize(std::int64_t uq, double delta, bool intra);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo mean squared reconstruction error of a zero-mean Laplacian
// source through the literal quantizer.
McEstimate mc_distortion(double delta, double alpha, bool intra,
                         double sigma2, std::size_t samples,
                         std::uint64_t seed);

}  // namespace vpflab::oracle
