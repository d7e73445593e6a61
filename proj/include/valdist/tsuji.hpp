#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "valdist/contour.hpp"
#include "valdist/errors.hpp"
#include "valdist/function.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/parallel.hpp"
#include "valdist/quadrature.hpp"
#include "valdist/winding.hpp"

namespace valdist {

using TsujiSample = CharacteristicSample;

/// The point r sin(t) e^{it} of the arc J(r).
inline cplx j_point(double r, double theta) { return std::polar(r * std::sin(theta), theta); }

/// The r >= 1 with zeta on J(r), for Im zeta > 0 and |zeta| >= 1:
/// |zeta - ir/2| = r/2 is the same as |zeta|^2 = r Im zeta.
inline double j_radius_through(cplx zeta) {
  if (!(zeta.imag() > 0.0)) throw DomainError("J(r) arcs lie in the open upper half plane");
  return std::norm(zeta) / zeta.imag();
}

/// Radius at which a point enters the lune { |z| >= 1, |z - is/2| <= s/2 };
/// infinite for points that never do.
inline double lune_entry_radius(cplx b) {
  if (!(b.imag() > 0.0) || std::abs(b) < 1.0) return inf;
  return std::norm(b) / b.imag();
}

/// The weight integral over J(r); equals 2 sqrt(1 - 1/r^2).
inline Estimate mu_integral(double r, const QuadratureSpec& spec = {}) {
  if (!(r >= 1.0)) throw DomainError("mu(r) needs r >= 1");
  const double alpha = std::asin(1.0 / r);
  return integrate_1d([r](double t) { return 1.0 / (r * std::sin(t) * std::sin(t)); }, alpha, pi - alpha, spec);
}

namespace detail {

inline std::vector<RegistryPoint> target_or_empty(const FunctionHandle& f, Target a) {
  auto p = target_points(f, a);
  return p ? *p : std::vector<RegistryPoint>{};
}

inline double perturb_j_radius(const std::vector<RegistryPoint>& pts, double r, const NevanlinnaOptions& opt) {
  for (int step = 0; step <= opt.perturb_steps; ++step) {
    bool clear = true;
    if (r > 1.0 && !pts.empty()) {
      const auto arc = Contour::arc_J(r);
      for (const auto& p : pts)
        if (arc.distance_to(p.at) < opt.clearance) clear = false;
    }
    if (clear) return r;
    r += opt.perturb_step;
  }
  throw PerturbationFailed("no clear Tsuji radius found near the requested one");
}

}  // namespace detail

/// Tsuji proximity: (1/2pi) integral over J(r) of log+|f| (a = inf) or
/// log+ 1/|f - a|, with weight 1/(r sin^2 t). The weight is finite (= r) at
/// the endpoints, so no singular treatment is needed.
inline std::pair<Estimate, double> tsuji_m_detail(const FunctionHandle& f, double r, Target a,
                                                  const NevanlinnaOptions& opt = {}) {
  if (!(r >= 1.0)) throw DomainError("Tsuji radius must be >= 1");
  r = detail::perturb_j_radius(detail::target_or_empty(f, a), r, opt);
  if (r == 1.0) return {Estimate{}, r};
  const double alpha = std::asin(1.0 / r);
  auto g = [&](double t) {
    const double la = detail::log_abs_minus(f, j_point(r, t), a);
    return a ? -la : la;
  };
  auto integrand = [&](double t) {
    const double s = std::sin(t);
    return std::max(0.0, g(t)) / (r * s * s);
  };
  std::vector<double> kinks;
  if (opt.quad.kink_split) kinks = sign_changes(g, alpha, pi - alpha);
  auto e = integrate_1d(integrand, alpha, pi - alpha, opt.quad, kinks);
  e.value /= two_pi;
  e.error /= two_pi;
  return {e, r};
}

inline double tsuji_m(const FunctionHandle& f, double r, Target a = at_infinity, const NevanlinnaOptions& opt = {}) {
  auto [e, used] = tsuji_m_detail(f, r, a, opt);
  if (!e.converged) throw NoConvergence("Tsuji proximity quadrature did not reach tolerance");
  return e.value;
}

/// Poles of f that can enter the lune for some s <= r_max: exact from a
/// complete registry, otherwise located in the lune of radius r_max.
inline std::vector<RegistryPoint> lune_poles(const FunctionHandle& f, double r_max) {
  std::vector<RegistryPoint> out;
  if (f.has_complete_registry()) {
    for (const auto& p : f.registry()->poles)
      if (lune_entry_radius(p.at) <= r_max) out.push_back(p);
    return out;
  }
  if (r_max <= 1.0) return out;
  for (const auto& p : locate(f, Region::lune(r_max)).poles)
    if (lune_entry_radius(p.at) <= r_max * (1.0 + 1e-9)) out.push_back(p);
  return out;
}

/// Pole count in the lune of radius s.
inline int tsuji_n(const FunctionHandle& f, double s) {
  if (!(s >= 1.0)) throw DomainError("Tsuji counting radius must be >= 1");
  int n = 0;
  for (const auto& p : lune_poles(f, s)) n += p.multiplicity;
  return n;
}

/// Integral of n(s)/s^2 over [1, r] from pole entry radii: each pole with
/// entry radius s* <= r contributes m (1/s* - 1/r).
inline double tsuji_N_from_poles(const std::vector<RegistryPoint>& poles, double r) {
  double acc = 0.0;
  for (const auto& p : poles) {
    const double s = lune_entry_radius(p.at);
    if (s <= r) acc += p.multiplicity * (1.0 / std::max(1.0, s) - 1.0 / r);
  }
  return acc;
}

inline double tsuji_N(const FunctionHandle& f, double r) {
  if (!(r >= 1.0)) throw DomainError("Tsuji radius must be >= 1");
  return tsuji_N_from_poles(lune_poles(f, r), r);
}

inline TsujiSample tsuji_T(const FunctionHandle& f, double r, const NevanlinnaOptions& opt = {}) {
  TsujiSample s;
  s.flavor = Flavor::tsuji;
  s.r = r;
  auto [e, used] = tsuji_m_detail(f, r, at_infinity, opt);
  if (!e.converged) throw NoConvergence("Tsuji proximity quadrature did not reach tolerance at r = " + std::to_string(r));
  s.perturbed_r = used;
  s.m = e.value;
  s.N = tsuji_N(f, used);
  s.T = s.m + s.N;
  return s;
}

/// Sweep sharing one pole location pass for the whole grid.
inline std::vector<TsujiSample> tsuji_sweep(const FunctionHandle& f, const std::vector<double>& grid,
                                            const NevanlinnaOptions& opt = {}) {
  std::vector<TsujiSample> out;
  if (grid.empty()) return out;
  const double r_max = *std::max_element(grid.begin(), grid.end());
  const auto poles = lune_poles(f, r_max + 1e-6);
  return parallel_map<TsujiSample>(grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    TsujiSample s;
    s.flavor = Flavor::tsuji;
    s.r = r;
    auto [e, used] = tsuji_m_detail(f, r, at_infinity, opt);
    if (!e.converged) throw NoConvergence("Tsuji proximity quadrature did not reach tolerance at r = " + std::to_string(r));
    s.perturbed_r = used;
    s.m = e.value;
    s.N = tsuji_N_from_poles(poles, used);
    s.T = s.m + s.N;
    return s;
  });
}

struct ResidualReport {
  std::vector<double> r;
  std::vector<double> residual;
  double oscillation = 0.0;
};

/// T(r, f) - T(r, 1/(f - a)) along a grid, with its max - min.
inline ResidualReport fft_residual(const FunctionHandle& f, cplx a, const std::vector<double>& grid,
                                   const NevanlinnaOptions& opt = {}) {
  ResidualReport out;
  const auto g = reciprocal_shift(f, a);
  const auto tf = tsuji_sweep(f, grid, opt);
  const auto tg = tsuji_sweep(g, grid, opt);
  double lo = inf, hi = -inf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = tf[i].T - tg[i].T;
    out.r.push_back(grid[i]);
    out.residual.push_back(d);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  out.oscillation = grid.empty() ? 0.0 : hi - lo;
  return out;
}

/// F(zeta) = f(-1/zeta); maps the upper half plane to itself.
inline FunctionHandle zeta_transform(const FunctionHandle& f) {
  Substitution sub;
  sub.map = [](cplx zeta) { return -1.0 / zeta; };
  sub.map_derivative = [](cplx zeta) { return 1.0 / (zeta * zeta); };
  sub.inverse = [](cplx z) { return z == cplx{} ? cplx{std::nan(""), std::nan("")} : -1.0 / z; };
  auto dom = f.domain();
  sub.domain = DomainDescriptor::custom(
      [dom](cplx zeta) { return zeta != cplx{} && dom.contains(-1.0 / zeta); },
      [dom](cplx zeta) {
        const double m = std::abs(zeta);
        const double d = dom.distance_to_boundary(-1.0 / zeta);
        return std::min(m / 2.0, std::isfinite(d) ? 0.5 * m * m * d / (1.0 + m * d) : inf);
      },
      "zeta-" + dom.name());
  sub.label = "F[" + f.label() + "]";
  // z = -1/zeta sends conj to -conj, so real symmetry is not preserved in general.
  sub.preserves_real_symmetry = false;
  auto F = substitute(f, sub);
  // The point zeta = 0 (z = infinity) is invisible to the mapped registry.
  HandleSpec s = F.spec();
  if (s.registry) s.registry->complete = false;
  return FunctionHandle(std::move(s));
}

struct RectangleSample {
  double sigma = 0.0;
  double x = 0.0;
  double m2 = 0.0;
  double N2 = 0.0;
  double T2 = 0.0;
  double T3 = 0.0;
  int n2 = 0;
};

namespace detail {

inline bool clear_of_segment(const std::vector<RegistryPoint>& pts, double sigma, double x, double tol) {
  for (const auto& p : pts)
    if (std::abs(p.at.imag() - sigma) < tol && std::abs(p.at.real()) <= x + tol) return false;
  return true;
}

inline bool clear_of_Lx(const std::vector<RegistryPoint>& pts, double x, double tol) {
  const auto lx = Contour::polyline({{x, 0.0}, {x, x}, {-x, x}, {-x, 0.0}}, false);
  for (const auto& p : pts)
    if (lx.distance_to(p.at) < tol) return false;
  return true;
}

inline std::vector<RegistryPoint> registry_points(const FunctionHandle& F) {
  std::vector<RegistryPoint> pts;
  if (F.registry()) {
    pts = F.registry()->zeros;
    pts.insert(pts.end(), F.registry()->poles.begin(), F.registry()->poles.end());
  }
  return pts;
}

}  // namespace detail

/// Poles of F in the rectangle K(sigma) = [-x, x] x [sigma, x].
inline std::vector<RegistryPoint> rectangle_poles(const FunctionHandle& F, double sigma, double x) {
  std::vector<RegistryPoint> out;
  auto inside = [&](cplx b) { return std::abs(b.real()) <= x && b.imag() >= sigma && b.imag() <= x; };
  if (F.has_complete_registry()) {
    for (const auto& p : F.registry()->poles)
      if (inside(p.at)) out.push_back(p);
    return out;
  }
  for (const auto& p : locate(F, Region::rectangle(-x, x, sigma, x)).poles)
    if (inside(p.at)) out.push_back(p);
  return out;
}

/// m2, N2, T2 and T3 of F on the rectangle K(sigma) of half-size x.
inline RectangleSample rect_characteristics(const FunctionHandle& F, double sigma, double x = 0.9,
                                            const NevanlinnaOptions& opt = {}) {
  if (!(sigma > 0.0 && sigma <= x && x < 1.0)) throw PreconditionError("rectangle needs 0 < sigma <= x < 1");
  const auto pts = detail::registry_points(F);
  // Move x off zeros and poles sitting on the stepwise curve L_x.
  if (x == 0.9) {
    bool found = false;
    for (double cand : {0.9, 0.925, 0.95}) {
      if (detail::clear_of_Lx(pts, cand, opt.clearance)) {
        x = cand;
        found = true;
        break;
      }
    }
    if (!found) throw PerturbationFailed("every candidate x has a zero or pole on L_x");
  }
  const double sigma0 = sigma;
  while (!detail::clear_of_segment(pts, sigma, x, opt.clearance)) {
    sigma += opt.perturb_step;
    if (sigma - sigma0 > 1e-6) throw PerturbationFailed("no clear sigma within 1e-6");
  }
  RectangleSample out;
  out.sigma = sigma;
  out.x = x;
  auto la = [&](double t) { return F(cplx{t, sigma}).log_abs(); };
  std::vector<double> kinks;
  if (opt.quad.kink_split) kinks = sign_changes(la, -x, x);
  auto m2 = integrate_1d([&](double t) { return std::max(0.0, la(t)); }, -x, x, opt.quad, kinks);
  auto s2 = integrate_1d([&](double t) { return log_sqrt_one_plus_sq(la(t)); }, -x, x, opt.quad);
  if (!m2.converged || !s2.converged) throw NoConvergence("rectangle quadrature did not reach tolerance");
  out.m2 = m2.value / two_pi;
  for (const auto& p : rectangle_poles(F, sigma, x)) {
    out.n2 += p.multiplicity;
    out.N2 += p.multiplicity * (p.at.imag() - sigma);
  }
  out.T2 = out.m2 + out.N2;
  out.T3 = s2.value / two_pi + out.N2;
  return out;
}

namespace detail {

inline double spherical_density(const FunctionHandle& F, const FunctionHandle& dF, cplx z) {
  const double lf = F(z).log_abs();
  const double ld = dF(z).log_abs();
  if (ld == -inf) return 0.0;
  if (lf == inf) return 0.0;
  return std::exp(2.0 * ld - 4.0 * log_sqrt_one_plus_sq(lf));
}

}  // namespace detail

/// (1/pi) times the integral over K(sigma) of |F'|^2 / (1 + |F|^2)^2.
inline Estimate spherical_area(const FunctionHandle& F, double sigma, double x = 0.9, const QuadratureSpec& spec = {}) {
  if (!(sigma > 0.0 && sigma <= x)) throw PreconditionError("spherical area needs 0 < sigma <= x");
  const auto dF = derivative(F, 1);
  auto e = integrate_2d([&](double u, double v) { return detail::spherical_density(F, dF, {u, v}); }, -x, x, sigma,
                        x, spec);
  e.value /= pi;
  e.error /= pi;
  return e;
}

/// Integral over lambda in [sigma, x] of spherical_area(F, lambda): the
/// inner integral collapses to the weight (v - sigma).
inline Estimate integrated_spherical_area(const FunctionHandle& F, double sigma, double x = 0.9,
                                          const QuadratureSpec& spec = {}) {
  if (!(sigma > 0.0 && sigma <= x)) throw PreconditionError("spherical area needs 0 < sigma <= x");
  const auto dF = derivative(F, 1);
  auto e = integrate_2d(
      [&](double u, double v) { return (v - sigma) * detail::spherical_density(F, dF, {u, v}); }, -x, x, sigma, x,
      spec);
  e.value /= pi;
  e.error /= pi;
  return e;
}

struct LogDerivBound {
  double bound = 0.0;
  double actual = 0.0;
};

/// Both sides of |g'(u)/g(u)| <= T/(pi (T-t)^2) int |log|g(T e^{ip})|| dp
/// + 2 sum 1/|u - A_j|, the sum over zeros and poles in |v| < T.
inline LogDerivBound logderiv_bound(const FunctionHandle& g, cplx u, double T_rad, const QuadratureSpec& spec = {}) {
  if (!g.has_complete_registry()) throw IncompleteRegistry("log-derivative bound needs a complete registry");
  const double t = std::abs(u);
  if (!(t < T_rad)) throw PreconditionError("need |u| < T");
  const auto& reg = *g.registry();
  double sum = 0.0;
  for (const auto* list : {&reg.zeros, &reg.poles}) {
    for (const auto& p : *list) {
      const double m = std::abs(p.at);
      if (std::abs(m - T_rad) < 1e-8) throw ContourTooClose("zero or pole on the circle |v| = T");
      if (m < T_rad) {
        const double d = std::abs(u - p.at);
        if (d == 0.0) throw DomainError("u is a zero or pole of g");
        sum += p.multiplicity / d;
      }
    }
  }
  auto la = [&](double p) { return g(std::polar(T_rad, p)).log_abs(); };
  const auto kinks = sign_changes(la, 0.0, two_pi);
  auto integral = integrate_1d([&](double p) { return std::abs(la(p)); }, 0.0, two_pi, spec, kinks);
  if (!integral.converged) throw NoConvergence("log-derivative bound quadrature did not converge");
  LogDerivBound out;
  out.bound = T_rad / (pi * (T_rad - t) * (T_rad - t)) * integral.value + 2.0 * sum;
  const Value L = log_derivative(g)(u);
  out.actual = L.is_zero() ? 0.0 : std::exp(L.log_abs());
  return out;
}

/// The double integral of (1 - r^2)^2 log+|f(r e^{it})| over
/// [2 - sqrt 3, r_max] x [0, pi], for f on the unit disc. Done as nested 1-D
/// integrals split at the moduli and arguments of known poles, whose log
/// singularities then sit on panel edges.
inline Estimate lemtsuji1_integral(const FunctionHandle& f, double r_max, const QuadratureSpec& spec = {}) {
  const double r0 = 2.0 - std::sqrt(3.0);
  if (!(r_max > r0 && r_max < 1.0)) throw PreconditionError("need 2 - sqrt(3) < r_max < 1");
  std::vector<double> radii, angles;
  for (const auto& p : f.known_poles()) {
    radii.push_back(std::abs(p.at));
    angles.push_back(std::abs(std::arg(p.at)));
  }
  QuadratureSpec inner = spec;
  inner.rel_tol = spec.rel_tol * 0.1;
  inner.abs_tol = spec.abs_tol * 0.1;
  bool inner_ok = true;
  auto row = [&](double r) {
    auto la = [&](double t) { return f(std::polar(r, t)).log_abs(); };
    std::vector<double> cuts = angles;
    if (spec.kink_split) {
      const auto k = sign_changes(la, 0.0, pi);
      cuts.insert(cuts.end(), k.begin(), k.end());
    }
    const auto e = integrate_1d([&](double t) { return log_plus(la(t)); }, 0.0, pi, inner, cuts);
    inner_ok = inner_ok && e.converged;
    return (1.0 - r * r) * (1.0 - r * r) * e.value;
  };
  auto out = integrate_1d(row, r0, r_max, spec, radii);
  out.converged = out.converged && inner_ok;
  return out;
}

struct ExceedanceReport {
  std::vector<double> r;
  std::vector<double> m_logderiv;
  std::vector<double> threshold;
  std::vector<bool> exceeds;
};

/// Where m(r, f'/f) exceeds K (log r + log+ T(r, f)) on the given grid. Only
/// a report: the exceptional set's measure cannot be certified this way.
inline ExceedanceReport logderiv_exceedance(const FunctionHandle& f, double K, const std::vector<double>& grid,
                                            const NevanlinnaOptions& opt = {}) {
  ExceedanceReport out;
  const auto L = log_derivative(f);
  const auto T = tsuji_sweep(f, grid, opt);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = tsuji_m(L, T[i].perturbed_r, at_infinity, opt);
    const double th = K * (std::log(grid[i]) + std::max(0.0, std::log(std::max(T[i].T, 1e-300))));
    out.r.push_back(grid[i]);
    out.m_logderiv.push_back(m);
    out.threshold.push_back(th);
    out.exceeds.push_back(m > th);
  }
  return out;
}

}  // namespace valdist
