#pragma once

#include <cstdint>
#include <random>

namespace synccert {

enum class DisturbanceKind { Zero, Constant, Gaussian };

/// Per-edge link disturbance, piecewise constant over each integration step.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::Zero;
  double scale = 0.0;
  std::uint64_t seed = 0;
};

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of edge k (0-based) derived from a network-wide seed:
/// splitmix64(global + 0x9E3779B97F4A7C15 * (k + 1)).
std::uint64_t edge_seed(std::uint64_t global_seed, int edge_index) noexcept;

/// Portable standard normal stream: mt19937_64 bits mapped to doubles in
/// [0, 1) via (bits >> 11) * 2^-53, then Marsaglia's polar method. Unlike
/// std::normal_distribution the output is identical across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Draws one held value per integration step for a single edge.
class DisturbanceSource {
 public:
  explicit DisturbanceSource(const DisturbanceSpec& spec) : spec_(spec), stream_(spec.seed) {}

  double next();

 private:
  DisturbanceSpec spec_;
  GaussianStream stream_;
};

}  // namespace synccert
