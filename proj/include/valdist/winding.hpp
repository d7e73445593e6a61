#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <vector>

#include "valdist/contour.hpp"
#include "valdist/errors.hpp"
#include "valdist/function.hpp"

namespace valdist {

struct WindingOptions {
  /// Initial subdivisions of each contour piece.
  int initial_pieces = 16;
  /// Bisection depth below the initial subdivision.
  int max_depth = 48;
  long max_evaluations = 4'000'000;
  /// Registry points closer than this to the contour are rejected.
  double clearance = 1e-8;
};

struct WindingResult {
  int value = 0;
  double raw = 0.0;
  long evaluations = 0;
};

namespace detail {

inline cplx phase_carrier(const Value& v) {
  if (v.is_pole() || v.is_zero()) throw ContourTooClose("contour passes through a zero or pole");
  // Im(exponent) is continuous along the path and is added back from the
  // endpoints, so only the factor's phase needs unwinding.
  return v.factor();
}

class PhaseTracker {
 public:
  PhaseTracker(const FunctionHandle& f, const WindingOptions& opt) : f_(f), opt_(opt) {}

  /// Change of arg(factor) along a piece; `exponent_change` receives the
  /// change of Im(exponent), which telescopes to zero on closed contours.
  double along(const ContourPiece& piece, double* exponent_change = nullptr) {
    const int n = std::max(1, opt_.initial_pieces);
    double total = 0.0;
    double t0 = 0.0;
    Value v0 = at(piece, t0);
    const double e_start = v0.exponent().imag();
    for (int i = 1; i <= n; ++i) {
      const double t1 = static_cast<double>(i) / n;
      Value v1 = at(piece, t1);
      total += refine(piece, t0, v0, t1, v1, 0);
      t0 = t1;
      v0 = v1;
    }
    if (exponent_change) *exponent_change = v0.exponent().imag() - e_start;
    return total;
  }

  [[nodiscard]] long evaluations() const { return evals_; }

 private:
  Value at(const ContourPiece& piece, double t) {
    if (++evals_ > opt_.max_evaluations) throw NoConvergence("winding number evaluation budget exhausted");
    return f_(Contour::point(piece, t));
  }

  static double step(const Value& a, const Value& b) {
    return std::arg(phase_carrier(b) * std::conj(phase_carrier(a)));
  }

  double refine(const ContourPiece& piece, double t0, const Value& v0, double t1, const Value& v1, int depth) {
    const double tm = 0.5 * (t0 + t1);
    const Value vm = at(piece, tm);
    const double d01 = step(v0, v1);
    const double d0m = step(v0, vm);
    const double dm1 = step(vm, v1);
    const double sum = d0m + dm1;
    if (std::abs(d0m) < pi / 4.0 && std::abs(dm1) < pi / 4.0 && std::abs(sum - d01) < 1e-6) return sum;
    if (depth >= opt_.max_depth || tm == t0 || tm == t1) {
      throw ContourTooClose("argument change could not be resolved near the contour");
    }
    return refine(piece, t0, v0, tm, vm, depth + 1) + refine(piece, tm, vm, t1, v1, depth + 1);
  }

  const FunctionHandle& f_;
  const WindingOptions& opt_;
  long evals_ = 0;
};

inline void check_clearance(const FunctionHandle& f, const Contour& c, double clearance) {
  if (!f.registry()) return;
  for (const auto* list : {&f.registry()->zeros, &f.registry()->poles}) {
    for (const auto& p : *list) {
      if (c.distance_to(p.at) < clearance) throw ContourTooClose("registered zero or pole lies on the contour");
    }
  }
}

}  // namespace detail

/// Total argument change of f along the contour in units of 2 pi, by phase
/// unwinding with adaptive bisection. For closed contours this is
/// #zeros - #poles inside.
inline WindingResult winding_detail(const FunctionHandle& f, const Contour& contour, const WindingOptions& opt = {}) {
  detail::check_clearance(f, contour, opt.clearance);
  detail::PhaseTracker tracker(f, opt);
  double total = 0.0;
  for (const auto& piece : contour.pieces()) {
    double de = 0.0;
    total += tracker.along(piece, &de);
    // On a closed path Im(exponent) returns to its start exactly; adding the
    // rounded endpoint differences would only inject noise.
    if (!contour.closed()) total += de;
  }
  WindingResult out;
  out.raw = total / two_pi;
  out.evaluations = tracker.evaluations();
  const double rounded = std::round(out.raw);
  if (std::abs(out.raw - rounded) > 0.25) throw RoundingAmbiguity("winding number is not close to an integer");
  out.value = static_cast<int>(rounded);
  return out;
}

inline int winding_number(const FunctionHandle& f, const Contour& contour, const WindingOptions& opt = {}) {
  return winding_detail(f, contour, opt).value;
}

struct RegionCount {
  int zeros = 0;
  int poles = 0;
};

/// Zeros and poles of f inside `region`, found by quad-tree subdivision of
/// its bounding box with winding numbers on cell boundaries. A zero and a
/// pole that fall in the same finest cell cancel and are not seen.
inline ZeroPoleRegistry locate(const FunctionHandle& f, const Region& region, const WindingOptions& opt = {}) {
  const auto& bb = region.bbox();
  const double scale = std::max({bb.x1 - bb.x0, bb.y1 - bb.y0, 1e-300});
  const double leaf = 1e-10 * std::max(1.0, scale);
  WindingOptions cell_opt = opt;
  cell_opt.initial_pieces = 4;
  cell_opt.clearance = 0.0;

  // Jitter the grid so cell edges avoid symmetric points such as 0 or i.
  static constexpr double jitters[] = {0.0137, 0.0291, 0.0453, 0.0619};
  for (double jitter : jitters) {
    try {
      ZeroPoleRegistry out;
      out.complete = true;
      const double pad = jitter * scale;
      // Asymmetric in x too, or the midline of a symmetric region is Re z = 0.
      const double x0 = bb.x0 - 0.6 * pad;
      const double y0 = bb.y0 - 0.7 * pad;
      const double side = scale + 2.0 * pad;
      constexpr int grid = 8;
      std::deque<Box> cells;
      for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
          cells.push_back({x0 + side * i / grid, x0 + side * (i + 1) / grid, y0 + side * j / grid,
                           y0 + side * (j + 1) / grid});
        }
      }
      while (!cells.empty()) {
        const Box c = cells.front();
        cells.pop_front();
        if (region.classify(c) == CellClass::outside) continue;
        // Corners alone are not enough: an edge can cross a slit.
        const cplx mid{0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1)};
        const double half_diag = 0.5 * std::hypot(c.x1 - c.x0, c.y1 - c.y0);
        const bool in_domain = f.domain().contains(mid) && f.domain().distance_to_boundary(mid) > half_diag;
        if (!in_domain) {
          // Cells poking out of the domain are split a few times; whatever is
          // left within 1e-3 of the scale around the domain edge is not counted.
          if (c.x1 - c.x0 < 1e-3 * scale) continue;
        } else {
          const int w = winding_number(f, Contour::rectangle(c.x0, c.x1, c.y0, c.y1), cell_opt);
          if (w == 0) continue;
          if (c.x1 - c.x0 < leaf) {
            const cplx centre{0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1)};
            if (region.contains(centre, leaf)) {
              if (w > 0) out.zeros.push_back({centre, w});
              else out.poles.push_back({centre, -w});
            }
            continue;
          }
        }
        const double mx = 0.5 * (c.x0 + c.x1);
        const double my = 0.5 * (c.y0 + c.y1);
        cells.push_back({c.x0, mx, c.y0, my});
        cells.push_back({mx, c.x1, c.y0, my});
        cells.push_back({c.x0, mx, my, c.y1});
        cells.push_back({mx, c.x1, my, c.y1});
      }
      return out;
    } catch (const ContourTooClose&) {
      continue;
    } catch (const RoundingAmbiguity&) {
      continue;
    }
  }
  throw NoConvergence("quad-tree location failed for every grid offset");
}

/// (#zeros, #poles) of f in the closed region, with multiplicity.
inline RegionCount count_in_region(const FunctionHandle& f, const Region& region, const WindingOptions& opt = {}) {
  RegionCount out;
  if (f.has_complete_registry()) {
    for (const auto& p : f.registry()->zeros)
      if (region.contains(p.at)) out.zeros += p.multiplicity;
    for (const auto& p : f.registry()->poles)
      if (region.contains(p.at)) out.poles += p.multiplicity;
    return out;
  }
  const auto found = locate(f, region, opt);
  out.zeros = ZeroPoleRegistry::total(found.zeros);
  out.poles = ZeroPoleRegistry::total(found.poles);
  return out;
}

}  // namespace valdist
