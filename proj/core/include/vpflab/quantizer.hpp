#pragma once

#include <array>
#include <cstdint>

namespace vpflab {

// Smallest and largest MPEG-2 quantization parameter.
inline constexpr int kMinQ = 2;
inline constexpr int kMaxQ = 31;

// Weight of the (1,0) AC coefficient in both default weighting matrices.
inline constexpr double kDefaultWeight = 16.0;

enum class QuantMode { Intra, Inter };

const char* to_string(QuantMode mode);

// 8x8 per-coefficient quantization weights. All entries are strictly
// positive; construction rejects anything else.
class WeightingMatrix {
 public:
  explicit WeightingMatrix(const std::array<double, 64>& entries);

  // FFmpeg's MPEG-2 intra default.
  static WeightingMatrix intra_default();
  // Flat 16 matrix used for inter-coded macroblocks.
  static WeightingMatrix inter_default();

  double at(int row, int col) const;
  const std::array<double, 64>& entries() const { return entries_; }

 private:
  std::array<double, 64> entries_;
};

// One scalar quantizer configuration as an encoder would see it: a
// quantization parameter, a deadzone factor, one weighting-matrix entry, and
// the coding mode that selects the reconstruction rule.
struct QuantSpec {
  int q = kMinQ;
  double alpha = 2.0;
  double weight = kDefaultWeight;
  QuantMode mode = QuantMode::Intra;

  // Throws std::domain_error unless q in [2,31], alpha in [1,2], weight > 0.
  void validate() const;
  double delta() const;
};

// Builds a validated QuantSpec.
QuantSpec make_spec(int q, double alpha, QuantMode mode,
                    double weight = kDefaultWeight);

// Step size q * weight / 8, exact in double arithmetic.
double quant_step(int q, double weight);

// Deadzone width alpha * delta.
double deadzone_width(double alpha, double delta);

// Deadzone scalar quantizer parameterised directly by its step. This is the
// form the distortion integrals need, since they also accept steps that no
// (q, weight) pair produces.
class DeadzoneQuantizer {
 public:
  DeadzoneQuantizer(double delta, double alpha, QuantMode mode);
  explicit DeadzoneQuantizer(const QuantSpec& spec);

  double delta() const { return delta_; }
  double alpha() const { return alpha_; }
  QuantMode mode() const { return mode_; }

  // sgn(u) * floor((|u| + delta * (1 - alpha/2)) / delta)
  std::int64_t quantize(double u) const;
  // Intra: sgn(k) floor(delta |k|); Inter: sgn(k) floor(delta |k| + delta/2).
  double dequantize(std::int64_t index) const;
  double requantize(double u) const { return dequantize(quantize(u)); }

  // Magnitude reconstructed for index k >= 1.
  double level(std::int64_t k) const;
  // Lower edge |u| of the cell mapped to index k >= 1; cell k spans
  // [edge(k), edge(k+1)).
  double edge(std::int64_t k) const;

 private:
  double delta_;
  double alpha_;
  QuantMode mode_;
};

std::int64_t quantize(double u, const QuantSpec& spec);
double dequantize(std::int64_t index, const QuantSpec& spec);
double requantize(double u, const QuantSpec& spec);

}  // namespace vpflab
