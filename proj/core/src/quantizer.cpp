#include "vpflab/quantizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vpflab {
namespace {

constexpr std::array<double, 64> kIntraDefault = {
    8,  16, 19, 22, 26, 27, 29, 34,  //
    16, 16, 22, 24, 27, 29, 34, 37,  //
    19, 22, 26, 27, 29, 34, 34, 38,  //
    22, 22, 26, 27, 29, 34, 37, 40,  //
    22, 26, 27, 29, 32, 35, 40, 48,  //
    26, 27, 29, 32, 35, 40, 48, 58,  //
    26, 27, 29, 34, 38, 46, 56, 69,  //
    27, 29, 35, 38, 46, 56, 69, 83,
};

void check_q(int q) {
  if (q < kMinQ || q > kMaxQ) {
    throw std::domain_error("quantization parameter " + std::to_string(q) +
                            " outside [2, 31]");
  }
}

void check_alpha(double alpha) {
  // Negated form so NaN is rejected too.
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw std::domain_error("deadzone factor " + std::to_string(alpha) +
                            " outside [1, 2]");
  }
}

void check_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

const char* to_string(QuantMode mode) {
  return mode == QuantMode::Intra ? "intra" : "inter";
}

WeightingMatrix::WeightingMatrix(const std::array<double, 64>& entries)
    : entries_(entries) {
  for (double e : entries_) check_positive(e, "weighting matrix entry");
}

WeightingMatrix WeightingMatrix::intra_default() {
  return WeightingMatrix(kIntraDefault);
}

WeightingMatrix WeightingMatrix::inter_default() {
  std::array<double, 64> flat;
  flat.fill(16.0);
  return WeightingMatrix(flat);
}

double WeightingMatrix::at(int row, int col) const {
  if (row < 0 || row > 7 || col < 0 || col > 7) {
    throw std::out_of_range("weighting matrix index out of range");
  }
  return entries_[static_cast<std::size_t>(row * 8 + col)];
}

void QuantSpec::validate() const {
  check_q(q);
  check_alpha(alpha);
  check_positive(weight, "weight");
}

double QuantSpec::delta() const { return quant_step(q, weight); }

QuantSpec make_spec(int q, double alpha, QuantMode mode, double weight) {
  QuantSpec spec{q, alpha, weight, mode};
  spec.validate();
  return spec;
}

double quant_step(int q, double weight) {
  check_q(q);
  check_positive(weight, "weight");
  return q * weight / 8.0;
}

double deadzone_width(double alpha, double delta) {
  check_alpha(alpha);
  check_positive(delta, "quantization step");
  return alpha * delta;
}

DeadzoneQuantizer::DeadzoneQuantizer(double delta, double alpha,
                                     QuantMode mode)
    : delta_(delta), alpha_(alpha), mode_(mode) {
  check_positive(delta, "quantization step");
  check_alpha(alpha);
}

DeadzoneQuantizer::DeadzoneQuantizer(const QuantSpec& spec)
    : DeadzoneQuantizer(spec.delta(), spec.alpha, spec.mode) {
  spec.validate();
}

std::int64_t DeadzoneQuantizer::quantize(double u) const {
  const double offset = delta_ * (1.0 - alpha_ / 2.0);
  const double magnitude = std::floor((std::fabs(u) + offset) / delta_);
  return sgn(u) * static_cast<std::int64_t>(magnitude);
}

double DeadzoneQuantizer::level(std::int64_t k) const {
  const double scaled = delta_ * static_cast<double>(k);
  if (mode_ == QuantMode::Intra) return std::floor(scaled);
  return std::floor(scaled + delta_ / 2.0);
}

double DeadzoneQuantizer::dequantize(std::int64_t index) const {
  const std::int64_t magnitude = index < 0 ? -index : index;
  const int sign = (index > 0) - (index < 0);
  return sign * level(magnitude);
}

double DeadzoneQuantizer::edge(std::int64_t k) const {
  return (static_cast<double>(k) - 1.0 + alpha_ / 2.0) * delta_;
}

std::int64_t quantize(double u, const QuantSpec& spec) {
  return DeadzoneQuantizer(spec).quantize(u);
}

double dequantize(std::int64_t index, const QuantSpec& spec) {
  return DeadzoneQuantizer(spec).dequantize(index);
}

double requantize(double u, const QuantSpec& spec) {
  return DeadzoneQuantizer(spec).requantize(u);
}

}  // namespace vpflab
