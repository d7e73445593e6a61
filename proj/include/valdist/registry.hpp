#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/value.hpp"

namespace valdist {

struct RegistryPoint {
  cplx at;
  int multiplicity = 1;
};

/// Known zeros and poles of a function. `complete` asserts the lists are
/// exhaustive on the function's domain.
struct ZeroPoleRegistry {
  std::vector<RegistryPoint> zeros;
  std::vector<RegistryPoint> poles;
  bool complete = false;

  /// Throws PreconditionError on bad multiplicities or a point listed as both.
  void validate() const {
    for (const auto* list : {&zeros, &poles}) {
      for (const auto& p : *list) {
        if (p.multiplicity < 1) throw PreconditionError("registry multiplicity must be >= 1");
      }
    }
    for (const auto& z : zeros) {
      for (const auto& p : poles) {
        if (std::abs(z.at - p.at) < 1e-14) {
          throw PreconditionError("registry point listed as both zero and pole");
        }
      }
    }
  }

  [[nodiscard]] ZeroPoleRegistry swapped() const { return {poles, zeros, complete}; }

  /// Image under a map; points the map rejects (returns nullopt-like NaN) are dropped.
  template <class Map>
  [[nodiscard]] ZeroPoleRegistry mapped(Map&& map) const {
    ZeroPoleRegistry out;
    out.complete = complete;
    auto push = [&](const std::vector<RegistryPoint>& in, std::vector<RegistryPoint>& dst) {
      for (const auto& p : in) {
        const cplx w = map(p.at);
        if (std::isfinite(w.real()) && std::isfinite(w.imag())) dst.push_back({w, p.multiplicity});
      }
    };
    push(zeros, out.zeros);
    push(poles, out.poles);
    return out;
  }

  template <class Pred>
  [[nodiscard]] ZeroPoleRegistry filtered(Pred&& keep) const {
    ZeroPoleRegistry out;
    out.complete = complete;
    for (const auto& p : zeros)
      if (keep(p.at)) out.zeros.push_back(p);
    for (const auto& p : poles)
      if (keep(p.at)) out.poles.push_back(p);
    return out;
  }

  [[nodiscard]] static int total(const std::vector<RegistryPoint>& pts) {
    int n = 0;
    for (const auto& p : pts) n += p.multiplicity;
    return n;
  }

  /// Smallest distance from any listed point to `z` (inf if empty).
  [[nodiscard]] double nearest_pole(cplx z) const { return nearest(poles, z); }
  [[nodiscard]] double nearest_point(cplx z) const {
    return std::min(nearest(zeros, z), nearest(poles, z));
  }

 private:
  static double nearest(const std::vector<RegistryPoint>& pts, cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) d = std::min(d, std::abs(p.at - z));
    return d;
  }
};

}  // namespace valdist
