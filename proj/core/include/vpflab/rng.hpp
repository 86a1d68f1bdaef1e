#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vpflab {

// SplitMix64 finaliser. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent seed from a parent seed and a list of tags (cell
// coordinates, site ids, ...). The result depends only on the inputs, never
// on call order, so streams for any cell can be rebuilt in isolation.
std::uint64_t derive_seed(std::uint64_t parent,
                          std::initializer_list<std::uint64_t> tags);

// A seeded stream of uniform and normal variates. Only the engine comes from
// <random>; the variate transforms are written out here because the standard
// distributions are implementation-defined and would break cross-platform
// reproducibility.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal via Box-Muller; variates come in pairs.
  double standard_normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace vpflab
