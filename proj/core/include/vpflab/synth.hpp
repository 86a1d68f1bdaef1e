#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vpflab/quantizer.hpp"

namespace vpflab {

// Constants of the AR(1) source and of the motion-compensated prediction
// surrogate. sigma_nu2 is stored as a variance.
struct ARParams {
  double sigma_x2 = 2500.0;
  double rho = 0.99;
  double sigma_r2 = 10.0;
  double rho_p = 0.88;
  double sigma_nu2 = 1.0;

  void validate() const;
};

// Source realizations at time indices n-2, n-1 and n, plus the innovations
// that link them: x_nm1 = rho x_nm2 + r_nm1 and x_n = rho x_nm1 + r_n.
struct SignalBundle {
  std::vector<double> x_nm2;
  std::vector<double> x_nm1;
  std::vector<double> x_n;
  std::vector<double> r_nm1;
  std::vector<double> r_n;

  std::size_t size() const { return x_n.size(); }
};

// Where the second-pass prediction at n-1 takes its reference from.
// FirstRecon uses x'_{n-2}; SecondRecon uses the re-encoded y'_{n-2}.
enum class PredSource { FirstRecon, SecondRecon };

// How the first-pass P-frame at n-1 reconstructs a skipped macroblock.
// IntraRequant requantizes x_{n-1} with the intra quantizer; CopyReference
// copies x'_{n-2} (zero motion vector, no residue).
enum class SkipRecon { IntraRequant, CopyReference };

struct PipelineOptions {
  // Reuse one set of uniforms for every Bernoulli mode site (and one nu
  // realization for both first-pass predictions at n-1).
  bool coupled_modes = false;
  PredSource second_pass_pred_source = PredSource::FirstRecon;
  SkipRecon skip_recon = SkipRecon::CopyReference;
  // Reuse the first-pass nu_{n-1} in the second pass instead of fresh draws.
  bool reuse_nu_across_passes = false;
  double weight_intra = kDefaultWeight;
  double weight_inter = kDefaultWeight;
};

struct FirstPassParams {
  int q1 = 16;
  double alpha_i = 2.0;
  double alpha_p = 2.0;
  double p1 = 0.5;
};

struct SecondPassParams {
  int q2 = 16;
  double alpha_i = 2.0;
  double alpha_p = 2.0;
  double p2 = 0.5;
};

// Per-sample P-MB indicators (1 = P-MB, 0 = S-MB) for each recipe site.
struct ModeDraws {
  std::vector<std::uint8_t> recon_nm1;
  std::vector<std::uint8_t> e_p1_n;
  std::vector<std::uint8_t> e_p1_nm1;
  std::vector<std::uint8_t> e_p2_nm1;
};

// Quantization-error realizations of both compressions. e_p2_nm1 and
// y_rec_nm2 stay empty until a second pass is attached.
struct ErrorBundle {
  std::vector<double> e_i1_n;
  std::vector<double> e_p1_n;
  std::vector<double> e_p1_nm1;
  std::vector<double> e_p2_nm1;

  std::vector<double> x_rec_nm2;
  std::vector<double> x_rec_nm1;
  std::vector<double> x_rec_n;  // intra reconstruction of x_n
  std::vector<double> y_rec_nm2;

  ModeDraws modes;

  // Retained so the second pass can honour coupled_modes and
  // reuse_nu_across_passes.
  std::vector<double> mode_uniforms;
  std::vector<double> nu_nm1;

  std::size_t size() const { return e_i1_n.size(); }
  bool complete() const;
};

struct SecondPassResult {
  std::vector<double> e_p2_nm1;
  std::vector<double> y_rec_nm2;
  std::vector<std::uint8_t> modes;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SignalBundle gen_ar_signals(const ARParams& params, std::size_t count,
                            std::uint64_t seed);

// First compression: I-frame at n-2, P-frame at n-1, and both
// interpretations of frame n (I1 and P1). Returns a bundle without the
// second-pass fields.
ErrorBundle first_pass(const SignalBundle& sig, const ARParams& ar,
                       const FirstPassParams& params,
                       const PipelineOptions& options, std::uint64_t seed);

// Second compression of the P-frame at n-1, producing e^{P2}_{n-1}.
SecondPassResult second_pass(const SignalBundle& sig, const ErrorBundle& first,
                             const ARParams& ar,
                             const SecondPassParams& params,
                             const PipelineOptions& options,
                             std::uint64_t seed);

// Moves a second-pass result into the bundle; throws PipelineError on a
// length mismatch.
void attach_second_pass(ErrorBundle& bundle, SecondPassResult result);

// Unbiased (N - 1) sample moments, accumulated in extended precision.
double sample_mean(std::span<const double> a);
double sample_variance(std::span<const double> a);
double sample_covariance(std::span<const double> a, std::span<const double> b);

// Sample Pearson correlation. Throws DegenerateInputError when either input
// has zero variance, std::invalid_argument on length problems.
double pearson_corr(std::span<const double> a, std::span<const double> b);

struct VpfDifference {
  double direct = 0.0;
  double decomposed = 0.0;
};

// Var(W)|I1 - Var(W)|P1 evaluated two ways on the same realizations:
// directly from the combined error sequences, and through the expansion
// into variances and covariances of the individual error terms.
VpfDifference vpf_difference(const ErrorBundle& errs);

// |a - b| / max(|a|, |b|); zero when both are zero.
double relative_gap(double a, double b);

}  // namespace vpflab
