#include "vpflab/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "vpflab/rng.hpp"
#include "vpflab/statmodel.hpp"

namespace vpflab {
namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index; the first failing index (lowest) is rethrown.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, n);

  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_grid(const std::vector<int>& grid, const char* name) {
  if (grid.empty()) {
    throw std::domain_error(std::string(name) + " grid is empty");
  }
  for (int q : grid) {
    if (q < kMinQ || q > kMaxQ) {
      throw std::domain_error(std::string(name) + " value " +
                              std::to_string(q) + " outside [2, 31]");
    }
  }
}

void check_alpha(double alpha, const char* name) {
  if (!(alpha >= 1.0 && alpha <= 2.0)) {
    throw std::domain_error(std::string(name) + " outside [1, 2]");
  }
}

std::vector<int> q_axis() {
  std::vector<int> grid;
  for (int q = kMinQ; q <= kMaxQ; ++q) grid.push_back(q);
  return grid;
}

StatMap blank_map(Statistic stat, const SweepConfig& cfg, double alpha_i,
                  bool with_q2) {
  StatMap map;
  map.statistic = stat;
  map.q1_ticks = cfg.q1_range;
  if (with_q2) map.q2_ticks = cfg.q2_range;
  map.values.assign(map.q1_ticks.size() * map.columns(), 0.0);
  map.seeds.assign(map.values.size(), 0);
  map.alpha_i = alpha_i;
  map.alpha_p = cfg.alpha_p;
  map.count = cfg.count;
  map.base_seed = cfg.base_seed;
  return map;
}

// Everything a first-pass-only cell needs.
struct FirstPassCell {
  SignalBundle signals;
  ErrorBundle errors;
};

FirstPassCell run_first(const SweepConfig& cfg, int q1, double alpha_i,
                        std::uint64_t seed) {
  FirstPassCell cell;
  cell.signals = gen_ar_signals(cfg.ar, cfg.count, derive_seed(seed, {0}));
  FirstPassParams params{q1, alpha_i, cfg.alpha_p, p_pmb_first(q1)};
  cell.errors = first_pass(cell.signals, cfg.ar, params, cfg.options,
                           derive_seed(seed, {1}));
  return cell;
}

ErrorBundle run_two_pass(const SweepConfig& cfg, int q1, int q2,
                         double alpha_i, std::uint64_t seed) {
  FirstPassCell cell = run_first(cfg, q1, alpha_i, seed);
  SecondPassParams params{q2, alpha_i, cfg.alpha_p, p_pmb_second(q1, q2)};
  attach_second_pass(cell.errors,
                     second_pass(cell.signals, cell.errors, cfg.ar, params,
                                 cfg.options, derive_seed(seed, {2})));
  return std::move(cell.errors);
}

using CurveStats =
    std::function<std::pair<double, double>(const ErrorBundle&)>;

// Two curves per alpha_i, both computed from one first-pass run per cell.
std::vector<StatMap> curve_pair(const SweepConfig& cfg, Statistic first,
                                Statistic second, const CurveStats& stats) {
  cfg.validate();
  const std::size_t n_alpha = cfg.alpha_i_set.size();
  const std::size_t n_q1 = cfg.q1_range.size();

  std::vector<StatMap> maps;
  for (double alpha_i : cfg.alpha_i_set) {
    maps.push_back(blank_map(first, cfg, alpha_i, false));
    maps.push_back(blank_map(second, cfg, alpha_i, false));
  }

  parallel_for(n_alpha * n_q1, cfg.threads, [&](std::size_t cell) {
    const std::size_t a = cell / n_q1;
    const std::size_t r = cell % n_q1;
    const int q1 = cfg.q1_range[r];
    const std::uint64_t seed = cell_seed(cfg.base_seed, first, q1, 0, a);
    const FirstPassCell run = run_first(cfg, q1, cfg.alpha_i_set[a], seed);
    const auto [v0, v1] = stats(run.errors);
    maps[2 * a].values[r] = v0;
    maps[2 * a].seeds[r] = seed;
    maps[2 * a + 1].values[r] = v1;
    maps[2 * a + 1].seeds[r] = seed;
  });
  return maps;
}

}  // namespace

const char* statistic_name(Statistic stat) {
  switch (stat) {
    case Statistic::VarEI1: return "var_e_i1_n";
    case Statistic::VarEP1: return "var_e_p1_n";
    case Statistic::CorrI1nP1nm1: return "corr_e_i1_n_e_p1_nm1";
    case Statistic::CorrP1nP1nm1: return "corr_e_p1_n_e_p1_nm1";
    case Statistic::CorrI1nP2nm1: return "corr_e_i1_n_e_p2_nm1";
    case Statistic::CorrP1nP2nm1: return "corr_e_p1_n_e_p2_nm1";
    case Statistic::VpfDirect: return "vpf_difference";
    case Statistic::VpfDecomposed: return "vpf_difference_decomposed";
    case Statistic::SignIntraCentroid: return "sign_intra_centroid";
    case Statistic::SignInterCentroid: return "sign_inter_centroid";
  }
  return "unknown";
}

SweepConfig SweepConfig::full_grid() {
  SweepConfig cfg;
  cfg.q1_range = q_axis();
  cfg.q2_range = q_axis();
  return cfg;
}

void SweepConfig::validate() const {
  check_grid(q1_range, "q1");
  check_grid(q2_range, "q2");
  if (alpha_i_set.empty()) throw std::domain_error("alpha_i set is empty");
  for (double a : alpha_i_set) check_alpha(a, "alpha_i");
  check_alpha(alpha_p, "alpha_p");
  if (count < 2) throw std::domain_error("count must be >= 2");
  ar.validate();
}

double StatMap::at(int q1) const {
  if (!is_curve()) throw std::out_of_range("map needs a q2 coordinate");
  const auto it = std::find(q1_ticks.begin(), q1_ticks.end(), q1);
  if (it == q1_ticks.end()) throw std::out_of_range("q1 not on the grid");
  return values[static_cast<std::size_t>(it - q1_ticks.begin())];
}

double StatMap::at(int q1, int q2) const {
  const auto r = std::find(q1_ticks.begin(), q1_ticks.end(), q1);
  const auto c = std::find(q2_ticks.begin(), q2_ticks.end(), q2);
  if (r == q1_ticks.end() || c == q2_ticks.end()) {
    throw std::out_of_range("(q1, q2) not on the grid");
  }
  const auto row = static_cast<std::size_t>(r - q1_ticks.begin());
  const auto col = static_cast<std::size_t>(c - q2_ticks.begin());
  return values[row * q2_ticks.size() + col];
}

const StatMap& find_map(const std::vector<StatMap>& maps, Statistic stat,
                        double alpha_i) {
  for (const StatMap& m : maps) {
    if (m.statistic == stat && m.alpha_i == alpha_i) return m;
  }
  throw std::out_of_range(std::string("no panel for ") + statistic_name(stat));
}

std::uint64_t cell_seed(std::uint64_t base_seed, Statistic stat, int q1,
                        int q2, std::size_t alpha_index) {
  return derive_seed(base_seed,
                     {static_cast<std::uint64_t>(stat),
                      static_cast<std::uint64_t>(q1),
                      static_cast<std::uint64_t>(q2), alpha_index});
}

std::vector<StatMap> variance_curves(const SweepConfig& cfg) {
  return curve_pair(cfg, Statistic::VarEI1, Statistic::VarEP1,
                    [](const ErrorBundle& e) {
                      return std::pair{sample_variance(e.e_i1_n),
                                       sample_variance(e.e_p1_n)};
                    });
}

std::vector<StatMap> corr_vs_q1(const SweepConfig& cfg) {
  return curve_pair(cfg, Statistic::CorrI1nP1nm1, Statistic::CorrP1nP1nm1,
                    [](const ErrorBundle& e) {
                      return std::pair{pearson_corr(e.e_i1_n, e.e_p1_nm1),
                                       pearson_corr(e.e_p1_n, e.e_p1_nm1)};
                    });
}

std::vector<StatMap> corr_map(const SweepConfig& cfg, CorrPair which) {
  cfg.validate();
  const Statistic stat = which == CorrPair::I1_vs_P2 ? Statistic::CorrI1nP2nm1
                                                     : Statistic::CorrP1nP2nm1;
  const std::size_t n_q1 = cfg.q1_range.size();
  const std::size_t n_q2 = cfg.q2_range.size();
  const std::size_t per_panel = n_q1 * n_q2;

  std::vector<StatMap> maps;
  for (double alpha_i : cfg.alpha_i_set) {
    maps.push_back(blank_map(stat, cfg, alpha_i, true));
  }

  parallel_for(maps.size() * per_panel, cfg.threads, [&](std::size_t cell) {
    const std::size_t a = cell / per_panel;
    const std::size_t idx = cell % per_panel;
    const int q1 = cfg.q1_range[idx / n_q2];
    const int q2 = cfg.q2_range[idx % n_q2];
    const std::uint64_t seed = cell_seed(cfg.base_seed, stat, q1, q2, a);
    const ErrorBundle e = run_two_pass(cfg, q1, q2, cfg.alpha_i_set[a], seed);
    const auto& first = which == CorrPair::I1_vs_P2 ? e.e_i1_n : e.e_p1_n;
    maps[a].values[idx] = pearson_corr(first, e.e_p2_nm1);
    maps[a].seeds[idx] = seed;
  });
  return maps;
}

std::vector<StatMap> vpf_map(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t n_q1 = cfg.q1_range.size();
  const std::size_t n_q2 = cfg.q2_range.size();
  const std::size_t per_panel = n_q1 * n_q2;
  const std::size_t n_alpha = cfg.alpha_i_set.size();

  std::vector<StatMap> maps;
  for (double alpha_i : cfg.alpha_i_set) {
    maps.push_back(blank_map(Statistic::VpfDirect, cfg, alpha_i, true));
    maps.push_back(blank_map(Statistic::VpfDecomposed, cfg, alpha_i, true));
  }

  parallel_for(n_alpha * per_panel, cfg.threads, [&](std::size_t cell) {
    const std::size_t a = cell / per_panel;
    const std::size_t idx = cell % per_panel;
    const int q1 = cfg.q1_range[idx / n_q2];
    const int q2 = cfg.q2_range[idx % n_q2];
    const std::uint64_t seed =
        cell_seed(cfg.base_seed, Statistic::VpfDirect, q1, q2, a);
    const ErrorBundle e = run_two_pass(cfg, q1, q2, cfg.alpha_i_set[a], seed);
    const VpfDifference diff = vpf_difference(e);
    if (relative_gap(diff.direct, diff.decomposed) > kDecompositionTolerance) {
      throw PipelineError("variance decomposition mismatch at q1=" +
                          std::to_string(q1) + " q2=" + std::to_string(q2));
    }
    maps[2 * a].values[idx] = diff.direct;
    maps[2 * a].seeds[idx] = seed;
    maps[2 * a + 1].values[idx] = diff.decomposed;
    maps[2 * a + 1].seeds[idx] = seed;
  });
  return maps;
}

StatMap sign_map(CentroidKind kind, double alpha_i, double alpha_p,
                 const std::vector<int>& q1_range,
                 const std::vector<int>& q2_range, double weight) {
  check_grid(q1_range, "q1");
  check_grid(q2_range, "q2");
  check_alpha(alpha_i, "alpha_i");
  check_alpha(alpha_p, "alpha_p");

  StatMap map;
  map.statistic = kind == CentroidKind::Intra ? Statistic::SignIntraCentroid
                                              : Statistic::SignInterCentroid;
  map.q1_ticks = q1_range;
  map.q2_ticks = q2_range;
  map.alpha_i = alpha_i;
  map.alpha_p = alpha_p;
  map.values.reserve(q1_range.size() * q2_range.size());
  map.seeds.assign(q1_range.size() * q2_range.size(), 0);

  for (int q1 : q1_range) {
    const double delta1 = quant_step(q1, weight);
    for (int q2 : q2_range) {
      const double delta2 = quant_step(q2, weight);
      double d;
      double d_prime;
      if (kind == CentroidKind::Intra) {
        d = delta1;
        d_prime = DeadzoneQuantizer(delta2, alpha_i, QuantMode::Intra)
                      .requantize(d);
      } else {
        d = delta1 + delta1 / 2.0;
        d_prime = DeadzoneQuantizer(delta2, alpha_p, QuantMode::Inter)
                      .requantize(d);
      }
      map.values.push_back(static_cast<double>((d_prime > d) -
                                               (d_prime < d)));
    }
  }
  return map;
}

}  // namespace vpflab
