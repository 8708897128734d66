#include "szo/rng.hpp"

#include <cmath>
#include <numbers>

namespace szo {

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - U lies in (0, 1], keeping log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RngStream derive(const RngStream& parent, std::uint64_t index) noexcept {
  // Two rounds so that neighbouring (seed, index) pairs land far apart.
  return RngStream(mix64(mix64(parent.seed() ^ 0x5851f42d4c957f2dULL) + mix64(index + RngStream::kGolden)));
}

}  // namespace szo
