#include "synccert/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "synccert/error.hpp"

namespace synccert {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double eval_positive(const PiecewiseLinearCoupling& pwl, double x) {
  double x0 = 0.0, y0 = 0.0;
  for (const auto& [xm, ym] : pwl.points) {
    if (x <= xm) return y0 + (ym - y0) * (x - x0) / (xm - x0);
    x0 = xm;
    y0 = ym;
  }
  const auto n = pwl.points.size();
  const double xp = n >= 2 ? pwl.points[n - 2].first : 0.0;
  const double yp = n >= 2 ? pwl.points[n - 2].second : 0.0;
  const double slope = (y0 - yp) / (x0 - xp);
  return y0 + slope * (x - x0);
}

// Minimum of sin(x)/x, attained at the first positive root of tan(x) = x.
constexpr double kSincMin = -0.21723362821122166;

}  // namespace

void validate(const PiecewiseLinearCoupling& pwl) {
  if (pwl.points.empty()) throw InadmissibleParams("piecewise-linear coupling needs at least one breakpoint");
  double prev = 0.0;
  for (const auto& [x, y] : pwl.points) {
    if (!(x > prev)) throw InadmissibleParams("piecewise-linear breakpoints must have strictly increasing x > 0");
    if (!std::isfinite(y)) throw InadmissibleParams("piecewise-linear breakpoint value is not finite");
    prev = x;
  }
}

SectorBound natural_sector(const CouplingFunction& fn) {
  return std::visit(
      overloaded{
          [](const LinearCoupling& l) { return SectorBound{l.gain, l.gain}; },
          [](const AffineSineCoupling& a) {
            const double r1 = a.c + a.d;
            const double r2 = a.c + a.d * kSincMin;
            return SectorBound{std::min(r1, r2), std::max(r1, r2)};
          },
          [](const PiecewiseLinearCoupling& p) {
            validate(p);
            // f(x)/x is monotone on each segment, so its extremes sit at the
            // breakpoints, the first segment's slope, or the asymptotic slope.
            double lo = p.points.front().second / p.points.front().first;
            double hi = lo;
            for (const auto& [x, y] : p.points) {
              lo = std::min(lo, y / x);
              hi = std::max(hi, y / x);
            }
            const auto n = p.points.size();
            const double xp = n >= 2 ? p.points[n - 2].first : 0.0;
            const double yp = n >= 2 ? p.points[n - 2].second : 0.0;
            const double tail = (p.points.back().second - yp) / (p.points.back().first - xp);
            return SectorBound{std::min(lo, tail), std::max(hi, tail)};
          },
      },
      fn);
}

Coupling::Coupling(CouplingFunction fn, SectorBound sector) : fn_(std::move(fn)), sector_(sector) {
  if (const auto* p = std::get_if<PiecewiseLinearCoupling>(&fn_)) validate(*p);
  sector_.validate();
}

Coupling Coupling::with_natural_sector(CouplingFunction fn) {
  const SectorBound s = natural_sector(fn);
  return Coupling(std::move(fn), s);
}

double Coupling::operator()(double x) const {
  return std::visit(overloaded{
                        [x](const LinearCoupling& l) { return l.gain * x; },
                        [x](const AffineSineCoupling& a) { return a.c * x + a.d * std::sin(x); },
                        [x](const PiecewiseLinearCoupling& p) {
                          return x >= 0.0 ? eval_positive(p, x) : -eval_positive(p, -x);
                        },
                    },
                    fn_);
}

std::string Coupling::kind() const {
  return std::visit(overloaded{
                        [](const LinearCoupling&) { return std::string("linear"); },
                        [](const AffineSineCoupling&) { return std::string("affine-sine"); },
                        [](const PiecewiseLinearCoupling&) { return std::string("piecewise-linear"); },
                    },
                    fn_);
}

SectorCheck verify_sector(const std::function<double(double)>& f, const SectorBound& sector, int sample_count,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-6.0, 6.0);
  SectorCheck out;
  out.pass = true;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = -std::numeric_limits<double>::infinity();
  double worst_violation = -std::numeric_limits<double>::infinity();

  const auto probe = [&](double x) {
    const double r = f(x) / x;
    ++out.samples;
    out.min_ratio = std::min(out.min_ratio, r);
    out.max_ratio = std::max(out.max_ratio, r);
    // Positive violation means outside the tolerance band.
    const double violation = std::max(sector.lo - r, r - sector.hi);
    if (!(violation <= kSectorTolerance)) out.pass = false;
    if (violation > worst_violation || std::isnan(r)) {
      worst_violation = std::isnan(r) ? std::numeric_limits<double>::infinity() : violation;
      out.worst_x = x;
      out.worst_ratio = r;
    }
  };

  for (double mag : {1e-6, 1e6}) {
    probe(mag);
    probe(-mag);
  }
  for (int s = 0; s < sample_count; ++s) {
    const double mag = std::pow(10.0, exponent(rng));
    probe(mag);
    probe(-mag);
  }
  return out;
}

SectorCheck verify_sector(const Coupling& c, int sample_count, std::uint64_t seed) {
  return verify_sector([&c](double x) { return c(x); }, c.sector(), sample_count, seed);
}

}  // namespace synccert
