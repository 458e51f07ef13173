#include "synccert/disturbance.hpp"

#include <cmath>

namespace synccert {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t edge_seed(std::uint64_t global_seed, int edge_index) noexcept {
  return splitmix64(global_seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(edge_index + 1));
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

double DisturbanceSource::next() {
  switch (spec_.kind) {
    case DisturbanceKind::Zero:
      return 0.0;
    case DisturbanceKind::Constant:
      return spec_.scale;
    case DisturbanceKind::Gaussian:
      return spec_.scale * stream_.next();
  }
  return 0.0;
}

}  // namespace synccert
