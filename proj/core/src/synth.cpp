#include "vpflab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "vpflab/rng.hpp"
#include "vpflab/statmodel.hpp"

namespace vpflab {
namespace {

// Substream tags. Values are part of the reproducibility contract.
enum SiteTag : std::uint64_t {
  kSignalX = 1,
  kSignalRnm1 = 2,
  kSignalRn = 3,
  kModesReconNm1 = 10,
  kModesEp1n = 11,
  kModesEp1nm1 = 12,
  kModesEp2nm1 = 13,
  kNuReconNm1 = 20,
  kNuEp1n = 21,
  kNuEp1nm1 = 22,
  kNuSecond = 23,
};

std::vector<double> uniforms(std::uint64_t seed, SiteTag tag,
                             std::size_t count) {
  RandomStream rng(derive_seed(seed, {tag}));
  std::vector<double> out(count);
  for (double& u : out) u = rng.uniform();
  return out;
}

std::vector<double> nu_draws(std::uint64_t seed, SiteTag tag,
                             const ARParams& ar, std::size_t count) {
  RandomStream rng(derive_seed(seed, {tag}));
  return gaussian_sample(0.0, ar.sigma_nu2, count, rng);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in (0, 1)");
  }
}

void check_variance(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be positive");
  }
}

void check_lengths(std::span<const double> a, std::span<const double> b,
                   std::size_t min_len) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sequence lengths differ");
  }
  if (a.size() < min_len) {
    throw std::invalid_argument("sequence too short for a sample moment");
  }
}

long double mean_ld(std::span<const double> a) {
  long double sum = 0.0L;
  for (double v : a) sum += v;
  return sum / static_cast<long double>(a.size());
}

long double centered_cross(std::span<const double> a,
                           std::span<const double> b) {
  const long double ma = mean_ld(a);
  const long double mb = mean_ld(b);
  long double sum = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += (a[i] - ma) * (b[i] - mb);
  }
  return sum;
}

}  // namespace

void ARParams::validate() const {
  check_variance(sigma_x2, "sigma_x2");
  check_variance(sigma_r2, "sigma_r2");
  check_variance(sigma_nu2, "sigma_nu2");
  check_open_unit(rho, "rho");
  check_open_unit(rho_p, "rho_p");
}

bool ErrorBundle::complete() const {
  const std::size_t n = size();
  return n > 0 && e_p1_n.size() == n && e_p1_nm1.size() == n &&
         e_p2_nm1.size() == n;
}

SignalBundle gen_ar_signals(const ARParams& params, std::size_t count,
                            std::uint64_t seed) {
  params.validate();
  if (count < 1) throw std::invalid_argument("count must be >= 1");

  SignalBundle sig;
  RandomStream x_rng(derive_seed(seed, {kSignalX}));
  RandomStream r1_rng(derive_seed(seed, {kSignalRnm1}));
  RandomStream r0_rng(derive_seed(seed, {kSignalRn}));
  sig.x_nm2 = laplacian_sample({0.0, params.sigma_x2}, count, x_rng);
  sig.r_nm1 = gaussian_sample(0.0, params.sigma_r2, count, r1_rng);
  sig.r_n = gaussian_sample(0.0, params.sigma_r2, count, r0_rng);

  sig.x_nm1.resize(count);
  sig.x_n.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    sig.x_nm1[i] = params.rho * sig.x_nm2[i] + sig.r_nm1[i];
    sig.x_n[i] = params.rho * sig.x_nm1[i] + sig.r_n[i];
  }
  return sig;
}

ErrorBundle first_pass(const SignalBundle& sig, const ARParams& ar,
                       const FirstPassParams& params,
                       const PipelineOptions& options, std::uint64_t seed) {
  ar.validate();
  check_probability(params.p1, "p1");
  const std::size_t n = sig.size();
  if (n == 0 || sig.x_nm1.size() != n || sig.x_nm2.size() != n) {
    throw PipelineError("signal bundle is empty or ragged");
  }

  const DeadzoneQuantizer intra(quant_step(params.q1, options.weight_intra),
                                params.alpha_i, QuantMode::Intra);
  const DeadzoneQuantizer inter(quant_step(params.q1, options.weight_inter),
                                params.alpha_p, QuantMode::Inter);

  ErrorBundle out;
  out.mode_uniforms = uniforms(seed, kModesReconNm1, n);
  out.nu_nm1 = nu_draws(seed, kNuReconNm1, ar, n);
  const bool coupled = options.coupled_modes;
  const std::vector<double> u_ep1n =
      coupled ? out.mode_uniforms : uniforms(seed, kModesEp1n, n);
  const std::vector<double> u_ep1nm1 =
      coupled ? out.mode_uniforms : uniforms(seed, kModesEp1nm1, n);
  const std::vector<double> nu_n = nu_draws(seed, kNuEp1n, ar, n);
  const std::vector<double> nu_ep1nm1 =
      coupled ? out.nu_nm1 : nu_draws(seed, kNuEp1nm1, ar, n);

  out.x_rec_nm2.resize(n);
  out.x_rec_nm1.resize(n);
  out.x_rec_n.resize(n);
  out.e_i1_n.resize(n);
  out.e_p1_n.resize(n);
  out.e_p1_nm1.resize(n);
  out.modes.recon_nm1.resize(n);
  out.modes.e_p1_n.resize(n);
  out.modes.e_p1_nm1.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    // I-frame at n-2.
    const double xr_nm2 = intra.requantize(sig.x_nm2[i]);
    out.x_rec_nm2[i] = xr_nm2;

    // P-frame at n-1.
    double xr_nm1;
    const bool pmb_recon = out.mode_uniforms[i] < params.p1;
    if (pmb_recon) {
      const double pred = ar.rho_p * xr_nm2 + out.nu_nm1[i];
      xr_nm1 = inter.requantize(sig.x_nm1[i] - pred) + pred;
    } else if (options.skip_recon == SkipRecon::CopyReference) {
      xr_nm1 = xr_nm2;
    } else {
      xr_nm1 = intra.requantize(sig.x_nm1[i]);
    }
    out.x_rec_nm1[i] = xr_nm1;
    out.modes.recon_nm1[i] = pmb_recon;

    // Frame n coded as an I-frame.
    out.x_rec_n[i] = intra.requantize(sig.x_n[i]);
    out.e_i1_n[i] = out.x_rec_n[i] - sig.x_n[i];

    // Frame n coded as a P-frame.
    const bool pmb_n = u_ep1n[i] < params.p1;
    if (pmb_n) {
      const double u = sig.x_n[i] - (ar.rho_p * xr_nm1 + nu_n[i]);
      out.e_p1_n[i] = inter.requantize(u) - u;
    } else {
      out.e_p1_n[i] = xr_nm1 - sig.x_n[i];
    }
    out.modes.e_p1_n[i] = pmb_n;

    // Same recipe one frame earlier, predicting from the I-frame.
    const bool pmb_nm1 = u_ep1nm1[i] < params.p1;
    if (pmb_nm1) {
      const double u = sig.x_nm1[i] - (ar.rho_p * xr_nm2 + nu_ep1nm1[i]);
      out.e_p1_nm1[i] = inter.requantize(u) - u;
    } else {
      out.e_p1_nm1[i] = xr_nm2 - sig.x_nm1[i];
    }
    out.modes.e_p1_nm1[i] = pmb_nm1;
  }
  return out;
}

SecondPassResult second_pass(const SignalBundle& sig, const ErrorBundle& first,
                             const ARParams& ar,
                             const SecondPassParams& params,
                             const PipelineOptions& options,
                             std::uint64_t seed) {
  ar.validate();
  check_probability(params.p2, "p2");
  const std::size_t n = sig.size();
  if (first.size() != n || first.x_rec_nm2.size() != n ||
      first.x_rec_nm1.size() != n) {
    throw PipelineError("first-pass bundle length " +
                        std::to_string(first.size()) +
                        " does not match signal length " + std::to_string(n));
  }
  if (options.coupled_modes && first.mode_uniforms.size() != n) {
    throw PipelineError("coupled modes need the first-pass uniforms");
  }
  if (options.reuse_nu_across_passes && first.nu_nm1.size() != n) {
    throw PipelineError("nu reuse needs the first-pass nu draws");
  }

  const DeadzoneQuantizer intra(quant_step(params.q2, options.weight_intra),
                                params.alpha_i, QuantMode::Intra);
  const DeadzoneQuantizer inter(quant_step(params.q2, options.weight_inter),
                                params.alpha_p, QuantMode::Inter);

  const std::vector<double> u_modes = options.coupled_modes
                                          ? first.mode_uniforms
                                          : uniforms(seed, kModesEp2nm1, n);
  const std::vector<double> nu = options.reuse_nu_across_passes
                                     ? first.nu_nm1
                                     : nu_draws(seed, kNuSecond, ar, n);
  const bool from_second =
      options.second_pass_pred_source == PredSource::SecondRecon;

  SecondPassResult out;
  out.e_p2_nm1.resize(n);
  out.y_rec_nm2.resize(n);
  out.modes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Second I-frame at n-2 re-encodes the first reconstruction.
    const double yr_nm2 = intra.requantize(first.x_rec_nm2[i]);
    out.y_rec_nm2[i] = yr_nm2;

    const double y_nm1 = first.x_rec_nm1[i];
    const bool pmb = u_modes[i] < params.p2;
    if (pmb) {
      const double reference = from_second ? yr_nm2 : first.x_rec_nm2[i];
      const double w = y_nm1 - (ar.rho_p * reference + nu[i]);
      out.e_p2_nm1[i] = inter.requantize(w) - w;
    } else {
      out.e_p2_nm1[i] = yr_nm2 - y_nm1;
    }
    out.modes[i] = pmb;
  }
  return out;
}

void attach_second_pass(ErrorBundle& bundle, SecondPassResult result) {
  if (result.e_p2_nm1.size() != bundle.size() ||
      result.y_rec_nm2.size() != bundle.size()) {
    throw PipelineError("second-pass length does not match the bundle");
  }
  bundle.e_p2_nm1 = std::move(result.e_p2_nm1);
  bundle.y_rec_nm2 = std::move(result.y_rec_nm2);
  bundle.modes.e_p2_nm1 = std::move(result.modes);
}

double sample_mean(std::span<const double> a) {
  if (a.empty()) throw std::invalid_argument("mean of an empty sequence");
  return static_cast<double>(mean_ld(a));
}

double sample_variance(std::span<const double> a) {
  return sample_covariance(a, a);
}

double sample_covariance(std::span<const double> a,
                         std::span<const double> b) {
  check_lengths(a, b, 2);
  return static_cast<double>(centered_cross(a, b) /
                             static_cast<long double>(a.size() - 1));
}

double pearson_corr(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b, 2);
  const long double saa = centered_cross(a, a);
  const long double sbb = centered_cross(b, b);
  if (saa == 0.0L || sbb == 0.0L) {
    throw DegenerateInputError("correlation of a zero-variance sequence");
  }
  const long double r = centered_cross(a, b) / std::sqrt(saa * sbb);
  return static_cast<double>(std::clamp(r, -1.0L, 1.0L));
}

VpfDifference vpf_difference(const ErrorBundle& errs) {
  if (!errs.complete()) {
    throw PipelineError("vpf_difference needs a complete error bundle");
  }
  const std::size_t n = errs.size();
  std::vector<double> w_i1(n);
  std::vector<double> w_p1(n);
  for (std::size_t i = 0; i < n; ++i) {
    w_i1[i] = errs.e_i1_n[i] - errs.e_p1_nm1[i] - errs.e_p2_nm1[i];
    w_p1[i] = errs.e_p1_n[i] - errs.e_p1_nm1[i] - errs.e_p2_nm1[i];
  }

  VpfDifference out;
  out.direct = sample_variance(w_i1) - sample_variance(w_p1);

  const double q1_terms =
      sample_variance(errs.e_i1_n) - sample_variance(errs.e_p1_n) -
      2.0 * (sample_covariance(errs.e_i1_n, errs.e_p1_nm1) -
             sample_covariance(errs.e_p1_n, errs.e_p1_nm1));
  const double q1q2_terms =
      -2.0 * (sample_covariance(errs.e_i1_n, errs.e_p2_nm1) -
              sample_covariance(errs.e_p1_n, errs.e_p2_nm1));
  out.decomposed = q1_terms + q1q2_terms;
  return out;
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  if (scale == 0.0) return 0.0;
  return std::fabs(a - b) / scale;
}

}  // namespace vpflab
