#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "synccert/certificates.hpp"

namespace synccert {

struct LinearCoupling {
  double gain = 1.0;
};

/// c x + d sin(x)
struct AffineSineCoupling {
  double c = 1.0;
  double d = 0.0;
};

/// Odd piecewise-linear function through (0, 0) and the breakpoints (x_m, y_m),
/// x_m > 0 strictly increasing, continued beyond the last breakpoint with the last
/// segment's slope and extended to x < 0 by oddness.
struct PiecewiseLinearCoupling {
  std::vector<std::pair<double, double>> points;
};

using CouplingFunction = std::variant<LinearCoupling, AffineSineCoupling, PiecewiseLinearCoupling>;

/// Memoryless odd edge nonlinearity together with its declared sector. One
/// function per undirected edge; the incidence sign carries the orientation.
class Coupling {
 public:
  Coupling() = default;
  Coupling(CouplingFunction fn, SectorBound sector);

  /// Uses the tightest analytic sector of `fn`.
  static Coupling with_natural_sector(CouplingFunction fn);

  double operator()(double x) const;
  const SectorBound& sector() const noexcept { return sector_; }
  const CouplingFunction& function() const noexcept { return fn_; }
  std::string kind() const;

 private:
  CouplingFunction fn_ = LinearCoupling{};
  SectorBound sector_{1.0, 1.0};
};

/// Tightest [inf, sup] of f(x)/x over x != 0 for the built-in kinds.
SectorBound natural_sector(const CouplingFunction& fn);

void validate(const PiecewiseLinearCoupling& pwl);

struct SectorCheck {
  bool pass = false;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double worst_x = 0.0;      // sample with the largest violation (or closest approach)
  double worst_ratio = 0.0;  // f(worst_x) / worst_x
  int samples = 0;
};

inline constexpr double kSectorTolerance = 1e-9;

/// Samples |x| log-uniformly over [1e-6, 1e6] with both signs (plus both
/// endpoints) and checks lo - tol <= f(x)/x <= hi + tol.
SectorCheck verify_sector(const std::function<double(double)>& f, const SectorBound& sector, int sample_count = 20000,
                          std::uint64_t seed = 0x5EC7);
SectorCheck verify_sector(const Coupling& c, int sample_count = 20000, std::uint64_t seed = 0x5EC7);

}  // namespace synccert
