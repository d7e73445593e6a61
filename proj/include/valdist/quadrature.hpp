#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "valdist/errors.hpp"

namespace valdist {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_depth = 40;
  /// Pre-split log+ integrands where log|f| changes sign.
  bool kink_split = true;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw PreconditionError("quadrature tolerances must be positive");
    if (max_depth < 4) throw PreconditionError("quadrature max_depth must be >= 4");
  }
};

/// Result of a numerical integral. `converged == false` carries the best
/// estimate rather than throwing; callers decide whether that is fatal.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  long evaluations = 0;

  Estimate& operator+=(const Estimate& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    evaluations += o.evaluations;
    return *this;
  }
};

namespace detail {

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod_panel(F& fn, double a, double b, int depth, long& evals) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(fn, a, b, 0, 0.0, &err);
  evals += 15;
  if (!std::isfinite(v)) err = std::numeric_limits<double>::infinity();
  return {a, b, v, err, depth};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration of fn over [a, b].
/// Breakpoints inside (a, b) are used as initial panel edges.
template <class F>
Estimate integrate_1d(F&& fn, double a, double b, const QuadratureSpec& spec = {},
                      std::span<const double> breakpoints = {}) {
  spec.validate();
  Estimate out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto f = [&fn](double x) { return static_cast<double>(fn(x)); };
  std::priority_queue<detail::Panel> queue;
  double total = 0.0;
  double total_err = 0.0;
  std::vector<detail::Panel> done;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto p = detail::kronrod_panel(f, edges[i], edges[i + 1], 0, out.evaluations);
    total += p.value;
    total_err += p.error;
    queue.push(p);
  }
  constexpr long max_panels = 40000;
  long panels = static_cast<long>(queue.size());
  while (!queue.empty()) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= target) break;
    auto p = queue.top();
    if (p.depth >= spec.max_depth || panels >= max_panels || !(p.error > 0.0)) {
      // The worst panel cannot be refined further; others still may be.
      queue.pop();
      done.push_back(p);
      if (panels >= max_panels) break;
      continue;
    }
    queue.pop();
    const double m = 0.5 * (p.a + p.b);
    auto l = detail::kronrod_panel(f, p.a, m, p.depth + 1, out.evaluations);
    auto r = detail::kronrod_panel(f, m, p.b, p.depth + 1, out.evaluations);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    queue.push(l);
    queue.push(r);
    ++panels;
  }
  // Re-sum from panels to avoid drift from the running updates.
  double sum = 0.0;
  double err = 0.0;
  for (const auto& p : done) {
    sum += p.value;
    err += p.error;
  }
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  out.value = sign * sum;
  out.error = err;
  if (!std::isfinite(sum) || err > std::max(spec.abs_tol, spec.rel_tol * std::abs(sum)) * 1.0000001) {
    out.converged = false;
  }
  return out;
}

/// Points in (a, b) where g changes sign, located by bisection on a uniform
/// scan of n cells. Used to split log+ integrands at their kinks.
template <class G>
std::vector<double> sign_changes(G&& g, double a, double b, int n = 256, double tol = 1e-13) {
  std::vector<double> out;
  double x0 = a;
  double g0 = g(a);
  for (int i = 1; i <= n; ++i) {
    const double x1 = a + (b - a) * i / n;
    const double g1 = g(x1);
    if (std::isfinite(g0) && std::isfinite(g1) && ((g0 < 0.0) != (g1 < 0.0))) {
      double lo = x0, hi = x1, glo = g0;
      while (hi - lo > tol * (1.0 + std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (!std::isfinite(gm)) break;
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    g0 = g1;
  }
  return out;
}

/// Iterated adaptive integration over [u0, u1] x [v0, v1] (inner variable u).
template <class F>
Estimate integrate_2d(F&& fn, double u0, double u1, double v0, double v1, const QuadratureSpec& spec = {}) {
  Estimate inner_total;
  inner_total.converged = true;
  QuadratureSpec inner_spec = spec;
  inner_spec.rel_tol = spec.rel_tol * 0.1;
  inner_spec.abs_tol = spec.abs_tol * 0.1;
  auto outer = [&](double v) {
    auto e = integrate_1d([&](double u) { return fn(u, v); }, u0, u1, inner_spec);
    inner_total.converged = inner_total.converged && e.converged;
    inner_total.evaluations += e.evaluations;
    return e.value;
  };
  auto res = integrate_1d(outer, v0, v1, spec);
  res.converged = res.converged && inner_total.converged;
  res.evaluations += inner_total.evaluations;
  return res;
}

}  // namespace valdist
