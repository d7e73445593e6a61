#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "valdist/value.hpp"

namespace valdist {

struct RootScanOptions {
  double bisect_tol = 1e-13;
  /// A grid value this small counts as a root sitting on a grid node.
  double node_zero = 1e-12;
  /// Local minima of |fn| below this are reported as even-order roots.
  double tangential = 1e-10;
};

/// Real roots of fn on [u, v]: sign changes on a grid of n cells refined by
/// bisection, plus grid nodes where fn vanishes and local minima of |fn|
/// that dip below `tangential`. Tangential roots that the grid does not
/// bracket can still be missed. Sign changes across poles are discarded.
inline std::vector<double> find_real_roots(const std::function<double(double)>& fn, double u, double v, int n,
                                           const RootScanOptions& opt = {}) {
  std::vector<double> out;
  if (!(v > u) || n < 1) return out;
  std::vector<double> xs(static_cast<std::size_t>(n) + 1);
  std::vector<double> fs(xs.size());
  for (int i = 0; i <= n; ++i) {
    xs[i] = i == n ? v : u + (v - u) * i / n;
    fs[i] = fn(xs[i]);
  }
  auto tiny = [&](double y) { return std::abs(y) <= opt.node_zero; };
  for (int i = 0; i <= n; ++i)
    if (tiny(fs[i])) out.push_back(xs[i]);

  for (int i = 0; i < n; ++i) {
    const double f0 = fs[i], f1 = fs[i + 1];
    if (!std::isfinite(f0) || !std::isfinite(f1) || tiny(f0) || tiny(f1)) continue;
    if ((f0 < 0.0) == (f1 < 0.0)) continue;
    double lo = xs[i], hi = xs[i + 1], flo = f0;
    double fmid = f0;
    while (hi - lo > opt.bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      fmid = fn(mid);
      if (fmid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    // A pole flips sign too; there |fn| grows instead of shrinking.
    if (std::abs(fn(root)) <= std::max(std::abs(f0), std::abs(f1))) out.push_back(root);
  }

  // Even-order roots: |fn| has a local minimum at a grid node with no sign change.
  for (int i = 1; i < n; ++i) {
    const double a = std::abs(fs[i - 1]), b = std::abs(fs[i]), c = std::abs(fs[i + 1]);
    if (!(b <= a && b <= c) || tiny(fs[i])) continue;
    if ((fs[i - 1] < 0.0) != (fs[i + 1] < 0.0)) continue;
    const auto res = boost::math::tools::brent_find_minima([&](double x) { return std::abs(fn(x)); }, xs[i - 1],
                                                           xs[i + 1], 50);
    if (res.second < opt.tangential) out.push_back(res.first);
  }

  std::sort(out.begin(), out.end());
  std::vector<double> merged;
  for (double x : out)
    if (merged.empty() || x - merged.back() > 1e-10) merged.push_back(x);
  return merged;
}

struct CircleMax {
  double theta = 0.0;
  double value = -inf;
};

/// Maximum of a real function of the angle over [0, 2 pi): 512-point scan,
/// then a bracketed minimiser around the best few scan points so that a
/// multimodal profile does not trap the search in a side peak.
inline CircleMax maximise_on_circle(const std::function<double(double)>& phi, int scan = 512) {
  std::vector<double> vals(static_cast<std::size_t>(scan));
  for (int k = 0; k < scan; ++k) vals[k] = phi(two_pi * k / scan);
  std::vector<int> peaks;
  for (int k = 0; k < scan; ++k) {
    const double l = vals[(k + scan - 1) % scan], r = vals[(k + 1) % scan];
    if (vals[k] >= l && vals[k] >= r) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return vals[a] > vals[b]; });
  if (peaks.size() > 4) peaks.resize(4);
  CircleMax best;
  const double h = two_pi / scan;
  for (int k : peaks) {
    if (vals[k] > best.value) best = {two_pi * k / scan, vals[k]};
    const double c = two_pi * k / scan;
    const auto res = boost::math::tools::brent_find_minima([&](double t) { return -phi(t); }, c - h, c + h, 52);
    if (-res.second > best.value) {
      double t = std::fmod(res.first, two_pi);
      if (t < 0.0) t += two_pi;
      best = {t, -res.second};
    }
  }
  return best;
}

}  // namespace valdist
