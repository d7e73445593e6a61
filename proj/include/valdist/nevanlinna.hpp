#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/function.hpp"
#include "valdist/parallel.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/roots.hpp"
#include "valdist/winding.hpp"

namespace valdist {

/// nullopt stands for the value infinity.
using Target = std::optional<cplx>;
inline constexpr std::nullopt_t at_infinity = std::nullopt;

enum class Flavor { nevanlinna, tsuji };

inline const char* flavor_name(Flavor f) { return f == Flavor::nevanlinna ? "nevanlinna" : "tsuji"; }

struct CharacteristicSample {
  double r = 0.0;
  double m = 0.0;
  double N = 0.0;
  double T = 0.0;
  Flavor flavor = Flavor::nevanlinna;
  /// Radius actually used after moving off nearby zeros or poles.
  double perturbed_r = 0.0;
};

/// How a zero or pole at the origin enters N(r).
enum class OriginConvention {
  /// Drop the n(0) log r term, so N >= 0 for r < 1.
  exclude,
  /// N(r) = n(0) log r + integral of (n(t) - n(0))/t.
  standard,
};

struct NevanlinnaOptions {
  QuadratureSpec quad{};
  OriginConvention origin = OriginConvention::exclude;
  /// Zeros or poles closer than this to the circle push the radius outwards.
  double clearance = 1e-8;
  double perturb_step = 2e-8;
  int perturb_steps = 100;
};

namespace detail {

/// Points whose modulus must stay away from the circle: zeros of f - a for
/// finite a, poles for a = infinity. nullopt when they are unknown.
inline std::optional<std::vector<RegistryPoint>> target_points(const FunctionHandle& f, Target a) {
  if (!a) {
    if (f.registry()) return f.registry()->poles;
    return std::nullopt;
  }
  auto reg = f.shifted_registry(*a);
  if (reg && reg->complete) return reg->zeros;
  if (reg) return reg->zeros;
  return std::nullopt;
}

inline double perturb_radius(const std::vector<RegistryPoint>& pts, cplx centre, double r,
                             const NevanlinnaOptions& opt) {
  for (int step = 0; step <= opt.perturb_steps; ++step) {
    bool clear = true;
    for (const auto& p : pts)
      if (std::abs(std::abs(p.at - centre) - r) < opt.clearance) clear = false;
    if (clear) return r;
    r += opt.perturb_step;
  }
  throw PerturbationFailed("no clear radius found near the requested one");
}

inline void check_disc_radius(const FunctionHandle& f, double r) {
  if (f.domain().kind() == DomainKind::unit_disc && !(r >= 0.0 && r < 1.0)) {
    throw DomainError("radius must lie in [0, 1) for a function on the unit disc");
  }
  if (!(r >= 0.0)) throw DomainError("radius must be non-negative");
}

/// log|f - a| (or -log|f| style quantity for the proximity integrand).
inline double log_abs_minus(const FunctionHandle& f, cplx z, Target a) {
  const Value v = f(z);
  if (!a) return v.log_abs();
  return v.minus(*a).log_abs();
}

inline Estimate circle_log_plus(const FunctionHandle& f, double r, Target a, const QuadratureSpec& spec) {
  // Integrand: log+|f| for a = inf, log+ 1/|f - a| otherwise.
  auto g = [&](double t) {
    const double la = log_abs_minus(f, std::polar(r, t), a);
    return a ? -la : la;
  };
  auto integrand = [&](double t) { return std::max(0.0, g(t)); };
  std::vector<double> kinks;
  if (spec.kink_split && r > 0.0) kinks = sign_changes(g, 0.0, two_pi);
  auto e = integrate_1d(integrand, 0.0, two_pi, spec, kinks);
  e.value /= two_pi;
  e.error /= two_pi;
  return e;
}

}  // namespace detail

/// m(r, a, f): the circle mean of log+ 1/|f - a|, or of log+|f| for a = inf.
/// Returns the estimate and the radius actually used.
inline std::pair<Estimate, double> proximity_detail(const FunctionHandle& f, double r, Target a,
                                                    const NevanlinnaOptions& opt = {}) {
  detail::check_disc_radius(f, r);
  if (auto pts = detail::target_points(f, a)) r = detail::perturb_radius(*pts, {}, r, opt);
  detail::check_disc_radius(f, r);
  return {detail::circle_log_plus(f, r, a, opt.quad), r};
}

inline double proximity_m(const FunctionHandle& f, double r, Target a, const NevanlinnaOptions& opt = {}) {
  auto [e, used] = proximity_detail(f, r, a, opt);
  if (!e.converged) throw NoConvergence("proximity quadrature did not reach tolerance");
  return e.value;
}

/// Zeros of f - a (or poles, for a = inf) in the closed disc |z| <= r, from
/// the registry when it is complete and by quad-tree location otherwise.
inline std::vector<RegistryPoint> points_in_disc(const FunctionHandle& f, double r, Target a) {
  std::vector<RegistryPoint> out;
  std::optional<ZeroPoleRegistry> reg;
  if (!a) {
    if (f.has_complete_registry()) reg = f.registry();
  } else {
    reg = f.shifted_registry(*a);
    if (reg && !reg->complete) reg.reset();
  }
  if (reg) {
    const auto& pts = a ? reg->zeros : reg->poles;
    for (const auto& p : pts)
      if (std::abs(p.at) <= r) out.push_back(p);
    return out;
  }
  if (r == 0.0) return out;
  const auto region = Region::disc({}, r);
  if (!a) return locate(f, region).poles;
  return locate(minus(f, *a), region).zeros;
}

/// N(r, a, f) = sum over the counted points of m log(r/|p|), with the origin
/// handled per `origin`.
inline double counting_from_points(const std::vector<RegistryPoint>& pts, double r, OriginConvention origin) {
  double n = 0.0;
  for (const auto& p : pts) {
    const double m = std::abs(p.at);
    if (m > r) continue;
    if (m == 0.0) {
      if (origin == OriginConvention::standard) n += p.multiplicity * std::log(r);
      continue;
    }
    n += p.multiplicity * std::log(r / m);
  }
  return n;
}

inline double counting_N(const FunctionHandle& f, double r, Target a, const NevanlinnaOptions& opt = {}) {
  detail::check_disc_radius(f, r);
  return counting_from_points(points_in_disc(f, r, a), r, opt.origin);
}

/// T(r, f) = m(r, inf, f) + N(r, inf, f).
inline CharacteristicSample characteristic_T(const FunctionHandle& f, double r, const NevanlinnaOptions& opt = {}) {
  CharacteristicSample s;
  s.flavor = Flavor::nevanlinna;
  s.r = r;
  auto [e, used] = proximity_detail(f, r, at_infinity, opt);
  if (!e.converged) throw NoConvergence("proximity quadrature did not reach tolerance at r = " + std::to_string(r));
  s.perturbed_r = used;
  s.m = e.value;
  s.N = counting_N(f, used, at_infinity, opt);
  s.T = s.m + s.N;
  return s;
}

inline std::vector<CharacteristicSample> characteristic_sweep(const FunctionHandle& f, const std::vector<double>& grid,
                                                              const NevanlinnaOptions& opt = {}) {
  return parallel_map<CharacteristicSample>(grid.size(), [&](std::size_t i) { return characteristic_T(f, grid[i], opt); });
}

/// log M(r, f) = max over |z| = r of log|f(z)|, kept in log form.
inline CircleMax log_max_modulus_detail(const FunctionHandle& f, double r) {
  detail::check_disc_radius(f, r);
  for (const auto& p : f.known_poles()) {
    if (std::abs(std::abs(p.at) - r) < 1e-8) throw PoleOnCircle("a pole lies on the circle |z| = r");
  }
  if (r == 0.0) return {0.0, f(cplx{}).log_abs()};
  auto res = maximise_on_circle([&](double t) { return f(std::polar(r, t)).log_abs(); });
  if (res.value == inf) throw PoleOnCircle("the circle passes through a pole");
  return res;
}

inline double log_max_modulus(const FunctionHandle& f, double r) { return log_max_modulus_detail(f, r).value; }

/// Finite-scale stand-in for the deficiency: min of m(r, a, f)/T(r, f) over
/// the upper half of an ascending grid.
inline double deficiency_estimate(const FunctionHandle& f, Target a, const std::vector<double>& grid,
                                  const NevanlinnaOptions& opt = {}) {
  if (grid.size() < 8) throw PreconditionError("deficiency estimate needs at least 8 radii");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("radius grid must be strictly increasing");
  double best = inf;
  for (std::size_t i = grid.size() / 2; i < grid.size(); ++i) {
    const auto T = characteristic_T(f, grid[i], opt);
    if (!(T.T > 0.0)) throw DegenerateT("T(r) is not positive on the grid tail");
    const double m = a ? proximity_m(f, T.perturbed_r, a, opt) : T.m;
    best = std::min(best, m / T.T);
  }
  return best;
}

}  // namespace valdist
