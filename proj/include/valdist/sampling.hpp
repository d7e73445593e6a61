#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "valdist/value.hpp"

namespace valdist {

/// Two-dimensional Halton points in [0,1)^2 with a seeded random shift
/// (Cranley-Patterson rotation), so the same seed gives the same sequence.
class Halton2 {
 public:
  explicit Halton2(std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    shift_ = {seed == 0 ? 0.0 : u(rng), seed == 0 ? 0.0 : u(rng)};
  }

  std::array<double, 2> next() {
    ++index_;
    std::array<double, 2> p{radical_inverse(index_, 2) + shift_[0], radical_inverse(index_, 3) + shift_[1]};
    for (auto& x : p) x -= std::floor(x);
    return p;
  }

 private:
  static double radical_inverse(std::uint64_t i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  }

  std::uint64_t index_ = 0;
  std::array<double, 2> shift_{};
};

/// Area-uniform quasi-random points in { r_in <= |z| < r_out, theta0 <= arg z < theta1 }.
inline std::vector<cplx> sample_sector(std::size_t n, std::uint64_t seed, double r_in, double r_out,
                                       double theta0 = 0.0, double theta1 = two_pi) {
  Halton2 h(seed);
  std::vector<cplx> out;
  out.reserve(n);
  while (out.size() < n) {
    const auto p = h.next();
    const double r = std::sqrt(r_in * r_in + p[0] * (r_out * r_out - r_in * r_in));
    const double t = theta0 + p[1] * (theta1 - theta0);
    const cplx z = std::polar(r, t);
    // Skip points that land exactly on an excluded edge.
    if (std::abs(z) >= r_out || (theta0 == 0.0 && theta1 == pi && z.imag() <= 0.0)) continue;
    out.push_back(z);
  }
  return out;
}

inline std::vector<cplx> sample_disc(std::size_t n, std::uint64_t seed, double radius = 1.0) {
  return sample_sector(n, seed, 0.0, radius);
}

/// Points of the open upper half disc { |z| < radius, Im z > 0 }.
inline std::vector<cplx> sample_upper_half_disc(std::size_t n, std::uint64_t seed, double radius = 1.0,
                                                double r_in = 0.0) {
  return sample_sector(n, seed, r_in, radius, 0.0, pi);
}

}  // namespace valdist
