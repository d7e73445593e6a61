#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valdist/domain.hpp"
#include "valdist/errors.hpp"
#include "valdist/registry.hpp"
#include "valdist/value.hpp"

namespace valdist {

using Evaluator = std::function<Value(cplx)>;

enum class DerivSource { closed_form, cauchy_integral };

/// Evaluation within this distance of a registered pole yields a pole marker.
inline constexpr double pole_fusion_radius = 1e-12;

/// Everything needed to build a FunctionHandle. Only `eval` is mandatory.
struct HandleSpec {
  std::string label;
  DomainDescriptor domain = DomainDescriptor::plane();
  Evaluator eval;
  /// Closed-form f', f'', ... (any prefix of the derivative sequence).
  std::vector<Evaluator> derivs;
  /// Closed-form f'/f, used where f itself is too large to form the quotient.
  Evaluator logderiv;
  std::optional<ZeroPoleRegistry> registry;
  /// Registry of f - a for a given a, when it can be computed exactly.
  std::function<std::optional<ZeroPoleRegistry>(cplx)> shifted_registry;
  /// conj(f(conj z)) == f(z).
  bool real_symmetric = false;
  DerivSource source = DerivSource::closed_form;
};

/// Immutable, cheaply copyable evaluation oracle for a meromorphic function.
class FunctionHandle {
 public:
  explicit FunctionHandle(HandleSpec spec) : spec_(std::make_shared<const HandleSpec>(std::move(spec))) {
    if (!spec_->eval) throw PreconditionError("function handle needs an evaluator");
    if (spec_->registry) spec_->registry->validate();
  }

  /// Checked evaluation; throws DomainError outside the domain.
  Value operator()(cplx z) const {
    if (!spec_->domain.contains(z)) {
      throw DomainError(spec_->label + " evaluated outside " + spec_->domain.name());
    }
    if (spec_->registry && !spec_->registry->poles.empty() &&
        spec_->registry->nearest_pole(z) <= pole_fusion_radius) {
      return Value::pole();
    }
    return spec_->eval(z);
  }

  [[nodiscard]] const HandleSpec& spec() const { return *spec_; }
  [[nodiscard]] const std::string& label() const { return spec_->label; }
  [[nodiscard]] const DomainDescriptor& domain() const { return spec_->domain; }
  [[nodiscard]] const std::optional<ZeroPoleRegistry>& registry() const { return spec_->registry; }
  [[nodiscard]] bool has_complete_registry() const { return spec_->registry && spec_->registry->complete; }
  [[nodiscard]] bool real_symmetric() const { return spec_->real_symmetric; }
  [[nodiscard]] DerivSource deriv_source() const { return spec_->source; }
  [[nodiscard]] int closed_form_orders() const { return static_cast<int>(spec_->derivs.size()); }

  /// Registry of f - a when computable; for a = 0 this is the registry itself.
  [[nodiscard]] std::optional<ZeroPoleRegistry> shifted_registry(cplx a) const {
    if (a == cplx{}) return spec_->registry;
    if (spec_->shifted_registry) return spec_->shifted_registry(a);
    return std::nullopt;
  }

  /// Registry with poles only (zeros unknown) when nothing better is available.
  [[nodiscard]] std::vector<RegistryPoint> known_poles() const {
    return spec_->registry ? spec_->registry->poles : std::vector<RegistryPoint>{};
  }

 private:
  std::shared_ptr<const HandleSpec> spec_;
};

inline Value eval(const FunctionHandle& f, cplx z) { return f(z); }

namespace detail {

/// j-th derivative by the trapezoid rule on a circle around z. The radius
/// starts at min(0.1, half the distance to the boundary or nearest known
/// pole) and is halved until log|g| varies by at most 4 over the nodes, which
/// keeps the node sum well conditioned for functions of huge dynamic range.
inline Value cauchy_derivative(const Evaluator& g, const DomainDescriptor& domain,
                               const std::vector<RegistryPoint>& poles, cplx z, int order,
                               int nodes = 64) {
  double dist = domain.distance_to_boundary(z);
  for (const auto& p : poles) dist = std::min(dist, std::abs(p.at - z));
  if (!(dist > 1e-12)) throw DomainError("no differentiation circle fits at this point");
  double rho = std::min(0.1, dist / 2.0);
  std::vector<Value> vals(static_cast<std::size_t>(nodes));
  const double rho_floor = 1e-13 * (1.0 + std::abs(z));
  for (int attempt = 0; attempt < 80; ++attempt) {
    bool hit_pole = false;
    double vmax = -inf;
    double vmin = inf;
    for (int k = 0; k < nodes; ++k) {
      const cplx zk = z + std::polar(rho, two_pi * k / nodes);
      vals[static_cast<std::size_t>(k)] = g(zk);
      const auto& v = vals[static_cast<std::size_t>(k)];
      if (v.is_pole()) {
        hit_pole = true;
        break;
      }
      const double la = v.log_abs();
      if (std::isfinite(la)) {
        vmax = std::max(vmax, la);
        vmin = std::min(vmin, la);
      }
    }
    const bool shrink = hit_pole || (vmax - vmin > 4.0);
    if (shrink && rho / 2.0 > rho_floor) {
      rho /= 2.0;
      continue;
    }
    if (hit_pole) throw DomainError("differentiation circle meets a pole");
    if (vmax == -inf) return Value{};
    cplx sum{};
    for (int k = 0; k < nodes; ++k) {
      const auto& v = vals[static_cast<std::size_t>(k)];
      if (v.is_zero()) continue;
      const cplx e = v.exponent() - vmax;
      sum += std::exp(e) * v.factor() * std::polar(1.0, -two_pi * order * k / nodes);
    }
    return Value::exp_of(vmax + std::lgamma(order + 1.0) - order * std::log(rho),
                         sum / static_cast<double>(nodes));
  }
  throw DomainError("differentiation radius could not be resolved");
}

}  // namespace detail

/// Handle evaluating f^{(j)}, 1 <= j <= 8. Closed-form when the handle
/// supplies it, otherwise Cauchy-integral differentiation of the highest
/// closed-form derivative available.
inline FunctionHandle derivative(const FunctionHandle& f, int order) {
  if (order < 1 || order > 8) throw PreconditionError("derivative order must be in [1, 8]");
  const auto& s = f.spec();
  HandleSpec out;
  out.label = s.label + "^(" + std::to_string(order) + ")";
  out.domain = s.domain;
  out.real_symmetric = s.real_symmetric;
  if (s.registry) {
    ZeroPoleRegistry reg;
    for (const auto& p : s.registry->poles) reg.poles.push_back({p.at, p.multiplicity + order});
    out.registry = reg;
  }
  const int closed = static_cast<int>(s.derivs.size());
  if (order <= closed) {
    out.eval = s.derivs[static_cast<std::size_t>(order - 1)];
    out.derivs.assign(s.derivs.begin() + order, s.derivs.end());
    out.source = DerivSource::closed_form;
    return FunctionHandle(std::move(out));
  }
  Evaluator base = closed == 0 ? s.eval : s.derivs.back();
  const int remaining = order - closed;
  auto domain = s.domain;
  auto poles = f.known_poles();
  out.eval = [base, domain, poles, remaining](cplx z) {
    return detail::cauchy_derivative(base, domain, poles, z, remaining);
  };
  out.source = DerivSource::cauchy_integral;
  return FunctionHandle(std::move(out));
}

/// Same function but with every derivative taken by the Cauchy route; used to
/// cross-check closed forms.
inline FunctionHandle cauchy_derivative_handle(const FunctionHandle& f, int order) {
  HandleSpec s = f.spec();
  s.derivs.clear();
  return derivative(FunctionHandle(std::move(s)), order);
}

/// L = f'/f.
inline FunctionHandle log_derivative(const FunctionHandle& f) {
  const auto& s = f.spec();
  HandleSpec out;
  out.label = "L[" + s.label + "]";
  out.domain = s.domain;
  out.real_symmetric = s.real_symmetric;
  if (s.registry) {
    ZeroPoleRegistry reg;
    for (const auto* list : {&s.registry->zeros, &s.registry->poles})
      for (const auto& p : *list) reg.poles.push_back({p.at, 1});
    out.registry = reg;
  }
  if (s.logderiv) {
    out.eval = s.logderiv;
  } else {
    auto d1 = derivative(f, 1);
    out.eval = [f, d1](cplx z) { return d1(z) / f(z); };
  }
  return FunctionHandle(std::move(out));
}

/// f - a.
inline FunctionHandle minus(const FunctionHandle& f, cplx a) {
  const auto& s = f.spec();
  HandleSpec out = s;
  out.label = "(" + s.label + ")-(" + std::to_string(a.real()) + "," + std::to_string(a.imag()) + ")";
  auto base = s.eval;
  out.eval = [base, a](cplx z) { return base(z).minus(a); };
  out.logderiv = nullptr;
  out.registry = f.shifted_registry(a);
  if (!out.registry && s.registry) out.registry = ZeroPoleRegistry{{}, s.registry->poles, false};
  if (s.shifted_registry) {
    auto sh = s.shifted_registry;
    out.shifted_registry = [sh, a](cplx b) { return sh(a + b); };
  }
  out.real_symmetric = s.real_symmetric && a.imag() == 0.0;
  return FunctionHandle(std::move(out));
}

/// 1/f.
inline FunctionHandle reciprocal(const FunctionHandle& f) {
  const auto& s = f.spec();
  HandleSpec out;
  out.label = "1/(" + s.label + ")";
  out.domain = s.domain;
  out.real_symmetric = s.real_symmetric;
  auto base = s.eval;
  out.eval = [base](cplx z) { return base(z).inverse(); };
  if (!s.derivs.empty()) {
    auto d1 = s.derivs.front();
    out.derivs.push_back([base, d1](cplx z) {
      const Value v = base(z);
      return (d1(z) / (v * v)).times(-1.0);
    });
  }
  if (s.logderiv) {
    auto ld = s.logderiv;
    out.logderiv = [ld](cplx z) { return ld(z).times(-1.0); };
  }
  if (s.registry) out.registry = s.registry->swapped();
  if (s.shifted_registry && s.registry) {
    // zeros of 1/f - b are zeros of f - 1/b; its poles are the zeros of f.
    auto sh = s.shifted_registry;
    auto reg = *s.registry;
    out.shifted_registry = [sh, reg](cplx b) -> std::optional<ZeroPoleRegistry> {
      if (b == cplx{}) return reg.swapped();
      auto r = sh(1.0 / b);
      if (!r) return std::nullopt;
      return ZeroPoleRegistry{r->zeros, reg.zeros, r->complete && reg.complete};
    };
  }
  return FunctionHandle(std::move(out));
}

/// 1/(f - a): the function whose poles the counting functions see for a finite value a.
inline FunctionHandle reciprocal_shift(const FunctionHandle& f, cplx a) { return reciprocal(minus(f, a)); }

/// Change of variable F(zeta) = f(map(zeta)).
struct Substitution {
  std::function<cplx(cplx)> map;
  std::function<cplx(cplx)> map_derivative;
  /// Inverse used to carry registry points over; returns NaN for points with no preimage.
  std::function<cplx(cplx)> inverse;
  DomainDescriptor domain = DomainDescriptor::plane();
  std::string label;
  bool preserves_real_symmetry = false;
};

inline FunctionHandle substitute(const FunctionHandle& f, const Substitution& sub) {
  const auto& s = f.spec();
  HandleSpec out;
  out.label = sub.label;
  out.domain = sub.domain;
  out.real_symmetric = s.real_symmetric && sub.preserves_real_symmetry;
  auto map = sub.map;
  auto dmap = sub.map_derivative;
  out.eval = [f, map](cplx zeta) { return f(map(zeta)); };
  if (!s.derivs.empty()) {
    auto d1 = derivative(f, 1);
    out.derivs.push_back([d1, map, dmap](cplx zeta) { return d1(map(zeta)).times(dmap(zeta)); });
  }
  if (s.logderiv) {
    auto ld = log_derivative(f);
    out.logderiv = [ld, map, dmap](cplx zeta) { return ld(map(zeta)).times(dmap(zeta)); };
  }
  auto inv = sub.inverse;
  auto in_domain = [d = sub.domain](cplx z) { return d.contains(z); };
  if (s.registry) out.registry = s.registry->mapped(inv).filtered(in_domain);
  if (s.shifted_registry) {
    auto sh = s.shifted_registry;
    out.shifted_registry = [sh, inv, in_domain](cplx a) -> std::optional<ZeroPoleRegistry> {
      auto r = sh(a);
      if (!r) return std::nullopt;
      return r->mapped(inv).filtered(in_domain);
    };
  }
  return FunctionHandle(std::move(out));
}

}  // namespace valdist
