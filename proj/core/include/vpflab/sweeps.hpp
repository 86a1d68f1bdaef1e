#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vpflab/synth.hpp"

namespace vpflab {

// Relative agreement required between the direct and the expanded route of
// the variance difference.
inline constexpr double kDecompositionTolerance = 1e-9;

enum class Statistic : std::uint64_t {
  VarEI1 = 1,
  VarEP1 = 2,
  CorrI1nP1nm1 = 3,
  CorrP1nP1nm1 = 4,
  CorrI1nP2nm1 = 5,
  CorrP1nP2nm1 = 6,
  VpfDirect = 7,
  VpfDecomposed = 8,
  SignIntraCentroid = 9,
  SignInterCentroid = 10,
};

const char* statistic_name(Statistic stat);

enum class CorrPair { I1_vs_P2, P1_vs_P2 };
enum class CentroidKind { Intra, Inter };

struct SweepConfig {
  std::vector<int> q1_range;
  std::vector<int> q2_range;
  std::vector<double> alpha_i_set{1.0, 1.25, 2.0};
  double alpha_p = 2.0;
  std::size_t count = std::size_t{1} << 17;
  std::uint64_t base_seed = 0;
  ARParams ar;
  PipelineOptions options;
  // Worker cap; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;

  // Full 2..31 grids on both axes.
  static SweepConfig full_grid();
  // Throws std::domain_error on empty or out-of-range grids, alpha outside
  // [1,2], or count < 2.
  void validate() const;
};

// One figure panel: a statistic over q1 (curve) or over (q1, q2) (map) for
// a single alpha_i. values and seeds are row-major with q1 along rows.
struct StatMap {
  Statistic statistic = Statistic::VarEI1;
  std::vector<int> q1_ticks;
  std::vector<int> q2_ticks;  // empty for curves
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  double alpha_i = 0.0;
  double alpha_p = 0.0;
  std::size_t count = 0;
  std::uint64_t base_seed = 0;

  bool is_curve() const { return q2_ticks.empty(); }
  std::size_t columns() const { return is_curve() ? 1 : q2_ticks.size(); }
  // Throws std::out_of_range for ticks not on the grid.
  double at(int q1) const;
  double at(int q1, int q2) const;
};

// Locates the panel for (stat, alpha_i); throws std::out_of_range if absent.
const StatMap& find_map(const std::vector<StatMap>& maps, Statistic stat,
                        double alpha_i);

// Seed of one sweep cell. q2 is 0 for curves.
std::uint64_t cell_seed(std::uint64_t base_seed, Statistic stat, int q1,
                        int q2, std::size_t alpha_index);

// Var(e^I1_n) and Var(e^P1_n) against q1, one pair of curves per alpha_i.
std::vector<StatMap> variance_curves(const SweepConfig& cfg);

// corr(e^I1_n, e^P1_{n-1}) and corr(e^P1_n, e^P1_{n-1}) against q1.
std::vector<StatMap> corr_vs_q1(const SweepConfig& cfg);

// Correlation of a first-pass error at n with e^P2_{n-1} over (q1, q2).
std::vector<StatMap> corr_map(const SweepConfig& cfg, CorrPair which);

// Var(W)|I1 - Var(W)|P1 over (q1, q2). Returns the direct-route map and the
// expanded-route map for every alpha_i; throws PipelineError if any cell's
// routes disagree beyond kDecompositionTolerance.
std::vector<StatMap> vpf_map(const SweepConfig& cfg);

// sgn(d' - d) where d is the first reconstruction level of the first
// quantizer (intra: delta1; inter: delta1 + delta1/2) and d' its
// requantization with the second quantizer. Deterministic.
StatMap sign_map(CentroidKind kind, double alpha_i, double alpha_p,
                 const std::vector<int>& q1_range,
                 const std::vector<int>& q2_range,
                 double weight = kDefaultWeight);

}  // namespace vpflab
