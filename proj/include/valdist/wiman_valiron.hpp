#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/function.hpp"
#include "valdist/nevanlinna.hpp"
#include "valdist/parallel.hpp"
#include "valdist/roots.hpp"

namespace valdist {

struct WVConfig {
  double s0 = 0.5;
  double R = std::exp(3.0);
  double beta = 0.5;
  double delta = 0.5;
  double r0 = 0.5;
  /// Relative slack allowed in |h| < R on |z| = s0, so that a configuration
  /// with equality at an isolated point is still accepted.
  double boundary_slack = 1e-9;
  /// Constant in phi(r) <= C a(r)^{1-beta} eps(r).
  double phi_constant = 1.0;

  void validate() const {
    if (!(s0 > 0.0 && s0 < 1.0)) throw ConfigError("s0 must lie in (0, 1)");
    if (!(R > 0.0)) throw ConfigError("R must be positive");
    if (!(beta > 0.0 && beta <= 0.5)) throw ConfigError("beta must lie in (0, 1/2]");
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (!(r0 > 0.0 && r0 < 1.0)) throw ConfigError("r0 must lie in (0, 1)");
  }
};

/// R = e * max |h| on |z| = s0, which makes |h| < R there strict.
inline double default_R(const FunctionHandle& h, double s0) {
  return std::exp(log_max_modulus(h, s0) + 1.0);
}

/// Throws ConfigError unless the poles lie in D(0, s0) and |h| <= R on |z| = s0.
inline void check_wv_config(const FunctionHandle& h, const WVConfig& cfg) {
  cfg.validate();
  if (h.domain().kind() != DomainKind::unit_disc && h.domain().kind() != DomainKind::plane) {
    throw ConfigError("h must be meromorphic on the unit disc");
  }
  for (const auto& p : h.known_poles())
    if (!(std::abs(p.at) < cfg.s0)) throw ConfigError("a pole of h lies outside D(0, s0)");
  const double lm = log_max_modulus(h, cfg.s0);
  if (lm > std::log(cfg.R) + cfg.boundary_slack) throw ConfigError("|h| >= R somewhere on |z| = s0");
}

/// v = log|h/R| on U = { s0 < |z| < 1, |h| > R } and 0 elsewhere in the disc.
inline std::function<double(cplx)> build_v(const FunctionHandle& h, const WVConfig& cfg) {
  check_wv_config(h, cfg);
  const double logR = std::log(cfg.R);
  const double s0 = cfg.s0;
  return [h, logR, s0](cplx z) {
    const double m = std::abs(z);
    if (!(m > s0 && m < 1.0)) return 0.0;
    return std::max(0.0, h(z).log_abs() - logR);
  };
}

inline double wv_eps(double r, double a, double beta, double delta) {
  const double la = std::pow(std::log(a), 1.0 + delta);
  return std::min((1.0 - r) / (2.0 * std::pow(a, beta) * la), 1.0 / (std::pow(a, 1.0 - beta) * la));
}

struct WVProfile {
  std::vector<double> grid;
  std::vector<double> B;
  std::vector<double> a;
  std::vector<double> eps;
  std::vector<cplx> z_r;
  std::vector<bool> exceptional;
  std::vector<double> phi_bound;
  WVConfig config;

  /// Linear interpolation of a(r) on the grid; NaN outside it.
  [[nodiscard]] double a_at(double r) const {
    if (grid.empty() || r < grid.front() || r > grid.back()) return std::nan("");
    auto it = std::lower_bound(grid.begin(), grid.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());
    if (j == 0) return a.front();
    const double t = (r - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return a[j - 1] + t * (a[j] - a[j - 1]);
  }

  [[nodiscard]] std::size_t index_of(double r) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (std::abs(grid[i] - r) < std::abs(grid[best] - r)) best = i;
    return best;
  }
};

/// r_j = 1 - 2^{-j/per_halving} for rmin <= r_j <= rmax.
inline std::vector<double> wv_grid(double rmin, double rmax, int per_halving = 4) {
  std::vector<double> g;
  for (int j = 0;; ++j) {
    const double r = 1.0 - std::exp2(-static_cast<double>(j) / per_halving);
    if (r > rmax + 1e-15) break;
    if (r >= rmin - 1e-15) g.push_back(r);
    if (j > 4000) break;
  }
  return g;
}

/// Lemma-style exceptional flags: r < r0, or one of
/// a(r + eps) < a + a^{1-beta}, a(r - eps) > a - a^{1-beta}, (1-r) a < B^{1+beta}
/// fails (or cannot be checked on the grid).
inline std::vector<bool> exceptional_flags(const WVProfile& p) {
  std::vector<bool> out(p.grid.size(), true);
  const double beta = p.config.beta;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double r = p.grid[i];
    if (r < p.config.r0 || !(p.eps[i] > 0.0)) continue;
    const double a = p.a[i];
    const double up = p.a_at(r + p.eps[i]);
    const double dn = p.a_at(r - p.eps[i]);
    const double slack = std::pow(a, 1.0 - beta);
    const bool ok = std::isfinite(up) && std::isfinite(dn) && up < a + slack && dn > a - slack &&
                    (1.0 - r) * a < std::pow(p.B[i], 1.0 + beta);
    out[i] = !ok;
  }
  return out;
}

namespace detail {

/// B, a and z_r only. a(r) uses second-order differences in log r,
/// one-sided at the ends.
inline WVProfile raw_profile(const FunctionHandle& h, const WVConfig& cfg, const std::vector<double>& grid) {
  check_wv_config(h, cfg);
  if (grid.size() < 3) throw PreconditionError("profile needs at least 3 radii");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("radius grid must be strictly increasing");
  for (double r : grid)
    if (!(r > 0.0 && r < 1.0)) throw DomainError("profile radii must lie in (0, 1)");
  WVProfile p;
  p.config = cfg;
  p.grid = grid;
  const double logR = std::log(cfg.R);
  const auto maxima = parallel_map<CircleMax>(grid.size(), [&](std::size_t i) {
    if (grid[i] <= cfg.s0) return CircleMax{0.0, logR};
    const auto m = log_max_modulus_detail(h, grid[i]);
    if (!std::isfinite(m.value)) throw NoConvergence("log M(r) is not finite at r = " + std::to_string(grid[i]));
    return m;
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p.B.push_back(std::max(0.0, maxima[i].value - logR));
    p.z_r.push_back(std::polar(grid[i], maxima[i].theta));
  }
  const std::size_t n = grid.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log(grid[i]);
  p.a.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0) {
      p.a[i] = (p.B[1] - p.B[0]) / (x[1] - x[0]);
    } else if (i + 1 == n) {
      p.a[i] = (p.B[i] - p.B[i - 1]) / (x[i] - x[i - 1]);
    } else {
      const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
      p.a[i] = (-h2 / (h1 * (h1 + h2))) * p.B[i - 1] + ((h2 - h1) / (h1 * h2)) * p.B[i] +
               (h1 / (h2 * (h1 + h2))) * p.B[i + 1];
    }
  }
  return p;
}

inline void finish_profile(WVProfile& p) {
  const auto& cfg = p.config;
  p.eps.clear();
  p.phi_bound.clear();
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    if (p.grid[i] >= cfg.r0 && (p.B[i] < 2.0 || p.a[i] < 2.0)) {
      throw ConfigError("B(r) >= 2 and a(r) >= 2 fail at r = " + std::to_string(p.grid[i]) +
                        " >= r0; h looks bounded or r0 is too small");
    }
    const bool usable = p.grid[i] >= cfg.r0 && p.a[i] > 1.0;
    p.eps.push_back(usable ? wv_eps(p.grid[i], p.a[i], cfg.beta, cfg.delta) : 0.0);
    p.phi_bound.push_back(usable ? cfg.phi_constant * std::pow(p.a[i], 1.0 - cfg.beta) * p.eps.back() : 0.0);
  }
  p.exceptional = exceptional_flags(p);
}

}  // namespace detail

/// B, a, eps, z_r and flags on an ascending grid.
inline WVProfile profile(const FunctionHandle& h, const WVConfig& cfg, const std::vector<double>& grid) {
  auto p = detail::raw_profile(h, cfg, grid);
  detail::finish_profile(p);
  return p;
}

/// Same, with r0 set to the smallest grid radius from which B >= 2 and
/// a >= 2 hold for the rest of the grid. Refuses bounded-looking h.
inline WVProfile profile_auto_r0(const FunctionHandle& h, WVConfig cfg, const std::vector<double>& grid) {
  auto p = detail::raw_profile(h, cfg, grid);
  std::size_t i0 = grid.size();
  while (i0 > 0 && p.B[i0 - 1] >= 2.0 && p.a[i0 - 1] >= 2.0) --i0;
  // Leave a couple of radii above r0 so the flags have something to test.
  if (i0 + 2 > grid.size()) {
    throw ConfigError("B(r) >= 2 and a(r) >= 2 never hold on the grid tail; h looks bounded on the disc");
  }
  p.config.r0 = grid[i0];
  p.config.validate();
  detail::finish_profile(p);
  return p;
}

/// Sum of grid spacing / (1 - r) over flagged radii.
inline double exceptional_log_measure(const WVProfile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < p.grid.size(); ++i)
    if (p.exceptional[i]) s += (p.grid[i + 1] - p.grid[i]) / (1.0 - p.grid[i]);
  return s;
}

struct LocalModel {
  double max_rel_err_h = 0.0;
  double max_rel_err_logderiv = 0.0;
  double disc_radius = 0.0;
};

/// Compares h(z) with h(z_r)(z/z_r)^{a(r)} and h'/h with a(r)/z on 64 points
/// of D(z_r, eps(r)/2048) (centre, then rings).
inline LocalModel local_model_check(const FunctionHandle& h, const WVProfile& p, std::size_t i) {
  if (i >= p.grid.size()) throw PreconditionError("profile index out of range");
  if (p.exceptional[i] || p.grid[i] < p.config.r0) throw ExceptionalRadius("radius is flagged exceptional");
  LocalModel out;
  const cplx zr = p.z_r[i];
  const double a = p.a[i];
  out.disc_radius = p.eps[i] / 2048.0;
  const auto L = log_derivative(h);
  const Value hr = h(zr);
  std::vector<cplx> pts{zr};
  for (int ring = 1; ring <= 7 && pts.size() < 64; ++ring) {
    for (int k = 0; k < 9 && pts.size() < 64; ++k) {
      const double rad = out.disc_radius * ring / 8.0;
      pts.push_back(zr + std::polar(rad, two_pi * (k + 0.5 * ring) / 9.0));
    }
  }
  for (cplx z : pts) {
    const Value hz = h(z);
    // log h(z) - log h(z_r), with the factor ratio taken on the principal branch.
    const cplx dlog = (hz.exponent() - hr.exponent()) + std::log(hz.factor() / hr.factor());
    const cplx model = a * std::log(z / zr);
    const cplx d = dlog - model;
    // exp(d) - 1 without cancellation for small d.
    const cplx em1 = std::abs(d) < 1e-4 ? d * (1.0 + d * (0.5 + d / 6.0)) : std::exp(d) - 1.0;
    out.max_rel_err_h = std::max(out.max_rel_err_h, std::abs(em1));
    const cplx ld = L(z).to_complex();
    out.max_rel_err_logderiv = std::max(out.max_rel_err_logderiv, std::abs(ld / (a / z) - 1.0));
  }
  return out;
}

struct PhiCheck {
  double max_u = -inf;
  double bound = 0.0;
  [[nodiscard]] bool holds() const { return max_u <= bound; }
};

/// max of v(z) - B(r) - a(r) log(|z|/r) over sampled points of D(z_r, eps(r))
/// against phi_bound(r).
inline PhiCheck phi_check(const FunctionHandle& h, const WVProfile& p, std::size_t i, int rings = 8, int per_ring = 16) {
  if (p.exceptional[i]) throw ExceptionalRadius("radius is flagged exceptional");
  const auto v = build_v(h, p.config);
  PhiCheck out;
  out.bound = p.phi_bound[i];
  const cplx zr = p.z_r[i];
  const double r = p.grid[i];
  for (int ring = 0; ring <= rings; ++ring) {
    const double rad = p.eps[i] * ring / rings;
    for (int k = 0; k < (ring == 0 ? 1 : per_ring); ++k) {
      const cplx z = zr + std::polar(rad, two_pi * k / per_ring);
      if (!(std::abs(z) < 1.0)) continue;
      out.max_u = std::max(out.max_u, v(z) - p.B[i] - p.a[i] * std::log(std::abs(z) / r));
    }
  }
  return out;
}

}  // namespace valdist
