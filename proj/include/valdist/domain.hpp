#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "valdist/value.hpp"

namespace valdist {

enum class DomainKind { unit_disc, upper_half_plane, cut_plane, annulus, plane, custom };

/// Where a function is meromorphic. Membership is exact for the named kinds;
/// the cut plane is C minus the real rays |X| >= 2.
class DomainDescriptor {
 public:
  static DomainDescriptor unit_disc() { return DomainDescriptor(DomainKind::unit_disc); }
  static DomainDescriptor upper_half_plane() { return DomainDescriptor(DomainKind::upper_half_plane); }
  static DomainDescriptor cut_plane() { return DomainDescriptor(DomainKind::cut_plane); }
  static DomainDescriptor plane() { return DomainDescriptor(DomainKind::plane); }

  static DomainDescriptor annulus(double inner, double outer) {
    DomainDescriptor d(DomainKind::annulus);
    d.inner_ = inner;
    d.outer_ = outer;
    return d;
  }

  /// `distance` should return the distance to the complement (inf if unknown-large).
  static DomainDescriptor custom(std::function<bool(cplx)> contains,
                                 std::function<double(cplx)> distance, std::string name = "custom") {
    DomainDescriptor d(DomainKind::custom);
    d.contains_ = std::move(contains);
    d.distance_ = std::move(distance);
    d.name_ = std::move(name);
    return d;
  }

  [[nodiscard]] DomainKind kind() const { return kind_; }
  [[nodiscard]] double inner() const { return inner_; }
  [[nodiscard]] double outer() const { return outer_; }

  [[nodiscard]] bool contains(cplx z) const {
    switch (kind_) {
      case DomainKind::unit_disc: return std::abs(z) < 1.0;
      case DomainKind::upper_half_plane: return z.imag() > 0.0;
      case DomainKind::cut_plane: return !(z.imag() == 0.0 && std::abs(z.real()) >= 2.0);
      case DomainKind::annulus: {
        const double m = std::abs(z);
        return m > inner_ && m < outer_;
      }
      case DomainKind::plane: return std::isfinite(z.real()) && std::isfinite(z.imag());
      case DomainKind::custom: return contains_(z);
    }
    return false;
  }

  /// Distance from z (assumed inside) to the boundary of the domain.
  [[nodiscard]] double distance_to_boundary(cplx z) const {
    switch (kind_) {
      case DomainKind::unit_disc: return 1.0 - std::abs(z);
      case DomainKind::upper_half_plane: return z.imag();
      case DomainKind::cut_plane: {
        const double x = std::abs(z.real());
        if (x >= 2.0) return std::abs(z.imag());
        return std::hypot(2.0 - x, z.imag());
      }
      case DomainKind::annulus: {
        const double m = std::abs(z);
        return std::min(m - inner_, outer_ - m);
      }
      case DomainKind::plane: return std::numeric_limits<double>::infinity();
      case DomainKind::custom: return distance_(z);
    }
    return 0.0;
  }

  [[nodiscard]] std::string name() const {
    switch (kind_) {
      case DomainKind::unit_disc: return "unit-disc";
      case DomainKind::upper_half_plane: return "upper-half-plane";
      case DomainKind::cut_plane: return "cut-plane";
      case DomainKind::annulus: return "annulus";
      case DomainKind::plane: return "plane";
      case DomainKind::custom: return name_;
    }
    return "?";
  }

 private:
  explicit DomainDescriptor(DomainKind k) : kind_(k) {}

  DomainKind kind_;
  double inner_ = 0.0;
  double outer_ = 0.0;
  std::function<bool(cplx)> contains_;
  std::function<double(cplx)> distance_;
  std::string name_;
};

}  // namespace valdist
