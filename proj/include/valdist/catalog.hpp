#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/Polynomials>

#include "valdist/conformal.hpp"
#include "valdist/errors.hpp"
#include "valdist/function.hpp"

namespace valdist {

using json = nlohmann::json;

namespace poly {

/// Coefficients in ascending order.
using Poly = std::vector<cplx>;

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly sub(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

inline Poly scale(const Poly& a, cplx c) {
  Poly out = a;
  for (auto& x : out) x *= c;
  return out;
}

inline Poly diff(const Poly& a) {
  if (a.size() <= 1) return {cplx{}};
  Poly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<double>(i);
  return out;
}

inline cplx eval(const Poly& a, cplx z) {
  cplx acc{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Poly from_roots(const std::vector<RegistryPoint>& pts, cplx lead = 1.0) {
  Poly out{lead};
  for (const auto& p : pts)
    for (int m = 0; m < p.multiplicity; ++m) out = mul(out, Poly{-p.at, 1.0});
  return out;
}

/// Roots with multiplicity; roots closer than `merge` are fused.
inline std::vector<RegistryPoint> roots(Poly a, double merge = 1e-6) {
  double big = 0.0;
  for (auto c : a) big = std::max(big, std::abs(c));
  while (!a.empty() && std::abs(a.back()) <= 1e-14 * big) a.pop_back();
  std::vector<RegistryPoint> out;
  if (a.size() <= 1) return out;
  Eigen::Matrix<cplx, Eigen::Dynamic, 1> c(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) c[static_cast<Eigen::Index>(i)] = a[i];
  Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver;
  solver.compute(c);
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
    const cplx r = solver.roots()[i];
    bool fused = false;
    for (auto& p : out) {
      if (std::abs(p.at - r) < merge) {
        p.at = (p.at * static_cast<double>(p.multiplicity) + r) / static_cast<double>(p.multiplicity + 1);
        ++p.multiplicity;
        fused = true;
        break;
      }
    }
    if (!fused) out.push_back({r, 1});
  }
  return out;
}

}  // namespace poly

namespace detail {

inline cplx w1(cplx z) { return (1.0 + z) / (1.0 - z); }
inline cplx w1p(cplx z) { return 2.0 / ((1.0 - z) * (1.0 - z)); }

inline std::vector<RegistryPoint> points_from_json(const json& arr) {
  std::vector<RegistryPoint> out;
  if (!arr.is_array()) throw CatalogFormatError("registry lists must be arrays");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() < 2) throw CatalogFormatError("registry entry must be [re, im, mult]");
    const int m = e.size() >= 3 ? e[2].get<int>() : 1;
    out.push_back({{e[0].get<double>(), e[1].get<double>()}, m});
  }
  return out;
}

inline json points_to_json(const std::vector<RegistryPoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back({p.at.real(), p.at.imag(), p.multiplicity});
  return arr;
}

inline DomainDescriptor domain_from_name(const std::string& s) {
  if (s == "unit-disc") return DomainDescriptor::unit_disc();
  if (s == "upper-half-plane") return DomainDescriptor::upper_half_plane();
  if (s == "cut-plane") return DomainDescriptor::cut_plane();
  if (s == "plane") return DomainDescriptor::plane();
  throw CatalogFormatError("unknown domain '" + s + "'");
}

/// Rational function scale * prod (z - z_k) / prod (z - p_k) on the plane.
inline HandleSpec rational_spec(cplx scale, const std::vector<RegistryPoint>& zeros,
                                const std::vector<RegistryPoint>& poles) {
  using poly::Poly;
  const Poly num = poly::from_roots(zeros, scale);
  const Poly den = poly::from_roots(poles);
  HandleSpec s;
  s.registry = ZeroPoleRegistry{zeros, poles, true};
  if (scale == cplx{}) s.registry = ZeroPoleRegistry{{}, {}, false};
  // Product form: expanded coefficients cancel to 0 within ~1e-8 of a double root.
  s.eval = [scale, zeros, poles](cplx z) {
    cplx acc = scale;
    for (const auto& p : zeros) acc *= std::pow(z - p.at, p.multiplicity);
    for (const auto& p : poles) acc /= std::pow(z - p.at, p.multiplicity);
    return Value::of(acc);
  };
  // f^(j) = N_j / D^(j+1) with N_{j+1} = N_j' D - (j+1) N_j D'.
  const Poly dd = poly::diff(den);
  Poly nj = num;
  for (int j = 0; j < 8; ++j) {
    nj = poly::sub(poly::mul(poly::diff(nj), den), poly::scale(poly::mul(nj, dd), static_cast<double>(j + 1)));
    const int power = j + 2;
    s.derivs.push_back([nj, den, power](cplx z) {
      const cplx d = poly::eval(den, z);
      return Value::of(poly::eval(nj, z) / std::pow(d, power));
    });
  }
  if (scale != cplx{}) {
    s.logderiv = [zeros, poles](cplx z) {
      cplx acc{};
      for (const auto& p : zeros) acc += static_cast<double>(p.multiplicity) / (z - p.at);
      for (const auto& p : poles) acc -= static_cast<double>(p.multiplicity) / (z - p.at);
      return Value::of(acc);
    };
  }
  s.shifted_registry = [num, den, poles](cplx a) -> std::optional<ZeroPoleRegistry> {
    const auto shifted = poly::sub(num, poly::scale(den, a));
    double big = 0.0;
    for (auto c : shifted) big = std::max(big, std::abs(c));
    if (big == 0.0) return std::nullopt;
    return ZeroPoleRegistry{poly::roots(shifted), poles, true};
  };
  bool real = true;
  auto conj_closed = [](const std::vector<RegistryPoint>& pts) {
    for (const auto& p : pts) {
      bool found = false;
      for (const auto& q : pts)
        if (std::abs(q.at - std::conj(p.at)) < 1e-14 && q.multiplicity == p.multiplicity) found = true;
      if (!found) return false;
    }
    return true;
  };
  real = scale.imag() == 0.0 && conj_closed(zeros) && conj_closed(poles);
  s.real_symmetric = real;
  return s;
}

/// exp(c e^W) * (z - z0)^k with W = (1+z)/(1-z), k in {0, 1}. Derivatives
/// carry exp(c e^W + jW) in the exponent so the factor's phase stays tame.
inline HandleSpec exp_exp_spec(double c, std::optional<double> zero) {
  HandleSpec s;
  s.domain = DomainDescriptor::unit_disc();
  s.real_symmetric = true;
  if (!zero) {
    s.eval = [c](cplx z) { return Value::exp_of(c * std::exp(w1(z))); };
    s.derivs.push_back([c](cplx z) {
      const cplx w = w1(z);
      return Value::exp_of(c * std::exp(w) + w, c * w1p(z));
    });
    s.derivs.push_back([c](cplx z) {
      const cplx w = w1(z);
      const cplx wp = w1p(z);
      return Value::exp_of(c * std::exp(w) + 2.0 * w, c * wp * wp * (c + (2.0 - z) * std::exp(-w)));
    });
    s.logderiv = [c](cplx z) { return Value::exp_of(w1(z), c * w1p(z)); };
    s.registry = ZeroPoleRegistry{{}, {}, true};
    return s;
  }
  const double z0 = *zero;
  s.eval = [c, z0](cplx z) { return Value::exp_of(c * std::exp(w1(z)), z - z0); };
  s.derivs.push_back([c, z0](cplx z) {
    const cplx w = w1(z);
    return Value::exp_of(c * std::exp(w) + w, c * w1p(z) * (z - z0) + std::exp(-w));
  });
  s.derivs.push_back([c, z0](cplx z) {
    const cplx w = w1(z);
    const cplx wp = w1p(z);
    const cplx em = std::exp(-w);
    return Value::exp_of(c * std::exp(w) + 2.0 * w,
                         c * wp * wp * (c + (2.0 - z) * em) * (z - z0) + 2.0 * c * wp * em);
  });
  s.logderiv = [c, z0](cplx z) {
    const cplx w = w1(z);
    return Value::exp_of(w, c * w1p(z) + std::exp(-w) / (z - z0));
  };
  s.registry = ZeroPoleRegistry{{{z0, 1}}, {}, true};
  return s;
}

/// c e^W, W = (1+z)/(1-z).
inline HandleSpec scaled_exp_w_spec(double c) {
  HandleSpec s;
  s.domain = DomainDescriptor::unit_disc();
  s.real_symmetric = true;
  s.eval = [c](cplx z) { return Value::exp_of(w1(z), c); };
  s.derivs.push_back([c](cplx z) { return Value::exp_of(w1(z), c * w1p(z)); });
  s.derivs.push_back([c](cplx z) {
    const cplx wp = w1p(z);
    return Value::exp_of(w1(z), c * wp * wp * (2.0 - z));
  });
  s.logderiv = [](cplx z) { return Value::of(w1p(z)); };
  s.registry = ZeroPoleRegistry{{}, {}, true};
  // c e^W = a has solutions in the disc (Re W > 0) exactly when |a| > |c|.
  s.shifted_registry = [c](cplx a) -> std::optional<ZeroPoleRegistry> {
    if (std::abs(a) <= std::abs(c)) return ZeroPoleRegistry{{}, {}, true};
    return std::nullopt;
  };
  return s;
}

/// sin(pi W), W = (1+z)/(1-z); zeros (n-1)/(n+1), n >= 1.
inline HandleSpec sin_w_spec(int listed_zeros) {
  HandleSpec s;
  s.domain = DomainDescriptor::unit_disc();
  s.real_symmetric = true;
  s.eval = [](cplx z) { return sin_value(pi * w1(z)); };
  s.derivs.push_back([](cplx z) { return cos_value(pi * w1(z)).times(pi * w1p(z)); });
  s.derivs.push_back([](cplx z) {
    const cplx a = pi * w1(z);
    const cplx wp = w1p(z);
    const Value cv = cos_value(a);
    const Value sv = sin_value(a);
    // Both carry the same real exponent |Im a|.
    return Value::exp_of(cv.exponent(), pi * wp * wp * ((1.0 - z) * cv.factor() - pi * sv.factor()));
  });
  s.logderiv = [](cplx z) {
    const cplx a = pi * w1(z);
    return (cos_value(a) / sin_value(a)).times(pi * w1p(z));
  };
  ZeroPoleRegistry reg;
  for (int n = 1; n <= listed_zeros; ++n) reg.zeros.push_back({cplx{(n - 1.0) / (n + 1.0), 0.0}, 1});
  reg.complete = false;
  s.registry = reg;
  return s;
}

inline HandleSpec power_spec(int n) {
  HandleSpec s;
  s.real_symmetric = true;
  s.eval = [n](cplx z) {
    if (n < 0 && z == cplx{}) return Value::pole();
    return Value::of(std::pow(z, n));
  };
  for (int j = 1; j <= 8; ++j) {
    double coef = 1.0;
    for (int i = 0; i < j; ++i) coef *= (n - i);
    s.derivs.push_back([n, j, coef](cplx z) {
      if (coef == 0.0) return Value{};
      if (n - j < 0 && z == cplx{}) return Value::pole();
      return Value::of(coef * std::pow(z, n - j));
    });
  }
  if (n != 0) s.logderiv = [n](cplx z) { return Value::of(static_cast<double>(n) / z); };
  ZeroPoleRegistry reg;
  reg.complete = true;
  if (n > 0) reg.zeros.push_back({0.0, n});
  if (n < 0) reg.poles.push_back({0.0, -n});
  s.registry = reg;
  s.shifted_registry = [n, reg](cplx a) -> std::optional<ZeroPoleRegistry> {
    if (n == 0) return std::nullopt;
    const int k = std::abs(n);
    const cplx target = n > 0 ? a : 1.0 / a;
    ZeroPoleRegistry out{{}, reg.poles, true};
    const double mag = std::pow(std::abs(target), 1.0 / k);
    for (int i = 0; i < k; ++i) out.zeros.push_back({std::polar(mag, (std::arg(target) + two_pi * i) / k), 1});
    return out;
  };
  return s;
}

inline HandleSpec constant_spec(cplx c) {
  HandleSpec s;
  s.real_symmetric = c.imag() == 0.0;
  s.eval = [c](cplx) { return Value::of(c); };
  for (int j = 1; j <= 8; ++j) s.derivs.push_back([](cplx) { return Value{}; });
  if (c != cplx{}) s.logderiv = [](cplx) { return Value{}; };
  s.registry = ZeroPoleRegistry{{}, {}, c != cplx{}};
  s.shifted_registry = [c](cplx a) -> std::optional<ZeroPoleRegistry> {
    if (a == c) return std::nullopt;
    return ZeroPoleRegistry{{}, {}, true};
  };
  return s;
}

inline HandleSpec exp_spec() {
  HandleSpec s;
  s.real_symmetric = true;
  s.eval = [](cplx z) { return Value::exp_of(z); };
  for (int j = 1; j <= 8; ++j) s.derivs.push_back([](cplx z) { return Value::exp_of(z); });
  s.logderiv = [](cplx) { return Value::of(1.0); };
  s.registry = ZeroPoleRegistry{{}, {}, true};
  return s;
}

}  // namespace detail

/// Named meromorphic functions described by JSON entries
/// {name, expression-tag, params, domain, registry}.
class Catalog {
 public:
  /// The built-in entries.
  static const Catalog& builtin() {
    static const Catalog c = Catalog::from_json(json::parse(builtin_text()));
    return c;
  }

  static Catalog from_json(const json& doc) {
    Catalog c;
    const json& entries = doc.is_object() && doc.contains("entries") ? doc.at("entries") : doc;
    if (!entries.is_array()) throw CatalogFormatError("catalog must be an array of entries");
    for (const auto& e : entries) {
      if (!e.contains("name") || !e.contains("expression-tag")) {
        throw CatalogFormatError("catalog entry needs name and expression-tag");
      }
      c.entries_[e.at("name").get<std::string>()] = e;
      c.order_.push_back(e.at("name").get<std::string>());
    }
    return c;
  }

  static Catalog from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogFormatError("cannot read catalog file " + path);
    try {
      return from_json(json::parse(in));
    } catch (const json::exception& ex) {
      throw CatalogFormatError(std::string("catalog JSON: ") + ex.what());
    }
  }

  /// Entries of `extra` replace same-named ones here.
  [[nodiscard]] Catalog merged(const Catalog& extra) const {
    Catalog out = *this;
    for (const auto& name : extra.order_) {
      if (!out.entries_.count(name)) out.order_.push_back(name);
      out.entries_[name] = extra.entries_.at(name);
    }
    return out;
  }

  [[nodiscard]] bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  [[nodiscard]] const std::vector<std::string>& names() const { return order_; }
  [[nodiscard]] const json& entry(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw UnknownCatalogEntry("no catalog entry named '" + name + "'");
    return it->second;
  }

  [[nodiscard]] FunctionHandle get(const std::string& name) const { return build(name, 0); }

 private:
  [[nodiscard]] FunctionHandle build(const std::string& name, int depth) const {
    if (depth > 8) throw CatalogFormatError("catalog transfer chain too deep at '" + name + "'");
    const json& e = entry(name);
    const std::string tag = e.at("expression-tag").get<std::string>();
    const json params = e.value("params", json::object());
    try {
      HandleSpec s;
      if (tag == "power") {
        s = detail::power_spec(params.value("n", 1));
      } else if (tag == "constant") {
        s = detail::constant_spec({params.value("re", 0.0), params.value("im", 0.0)});
      } else if (tag == "exp") {
        s = detail::exp_spec();
      } else if (tag == "rational") {
        const cplx scale{params.value("scale_re", 1.0), params.value("scale_im", 0.0)};
        s = detail::rational_spec(scale, detail::points_from_json(params.value("zeros", json::array())),
                                  detail::points_from_json(params.value("poles", json::array())));
      } else if (tag == "exp-exp") {
        s = detail::exp_exp_spec(params.value("c", 3.0), std::nullopt);
      } else if (tag == "exp-exp-linear") {
        s = detail::exp_exp_spec(params.value("c", 3.0), params.value("zero", 0.3));
      } else if (tag == "scaled-exp-w") {
        s = detail::scaled_exp_w_spec(params.value("c", 1.0));
      } else if (tag == "sin-w") {
        s = detail::sin_w_spec(params.value("listed_zeros", 1999));
      } else if (tag == "transfer") {
        const auto base = build(params.at("base").get<std::string>(), depth + 1);
        s = transfer(base, name).spec();
      } else {
        throw CatalogFormatError("unknown expression-tag '" + tag + "' in entry '" + name + "'");
      }
      s.label = name;
      if (e.contains("domain") && tag != "transfer") s.domain = detail::domain_from_name(e.at("domain").get<std::string>());
      if (e.contains("registry")) {
        const json& r = e.at("registry");
        ZeroPoleRegistry reg;
        reg.zeros = detail::points_from_json(r.value("zeros", json::array()));
        reg.poles = detail::points_from_json(r.value("poles", json::array()));
        reg.complete = r.value("complete", false);
        s.registry = reg;
      }
      if (s.domain.kind() != DomainKind::plane) {
        auto in_domain = [d = s.domain](cplx z) { return d.contains(z); };
        if (s.registry) s.registry = s.registry->filtered(in_domain);
        if (s.shifted_registry) {
          auto sh = s.shifted_registry;
          s.shifted_registry = [sh, in_domain](cplx a) -> std::optional<ZeroPoleRegistry> {
            auto r = sh(a);
            if (!r) return std::nullopt;
            return r->filtered(in_domain);
          };
        }
      }
      return FunctionHandle(std::move(s));
    } catch (const json::exception& ex) {
      throw CatalogFormatError("entry '" + name + "': " + ex.what());
    }
  }

  static const char* builtin_text();

  std::map<std::string, json> entries_;
  std::vector<std::string> order_;
};

inline FunctionHandle catalog_get(const std::string& name) { return Catalog::builtin().get(name); }

inline const char* Catalog::builtin_text() {
  return R"JSON([
  {"name": "identity", "expression-tag": "power", "params": {"n": 1}, "domain": "plane"},
  {"name": "square", "expression-tag": "power", "params": {"n": 2}, "domain": "plane"},
  {"name": "reciprocal", "expression-tag": "power", "params": {"n": -1}, "domain": "plane"},
  {"name": "exp", "expression-tag": "exp", "params": {}, "domain": "plane",
   "registry": {"zeros": [], "poles": [], "complete": true}},
  {"name": "constant-e", "expression-tag": "constant", "params": {"re": 2.718281828459045, "im": 0.0}, "domain": "plane"},
  {"name": "constant-half", "expression-tag": "constant", "params": {"re": 0.5, "im": 0.0}, "domain": "plane"},
  {"name": "poly-two-real", "expression-tag": "rational", "domain": "plane",
   "params": {"zeros": [[-0.3, 0.0, 1], [0.1, 0.0, 1]], "poles": []}},
  {"name": "rational-sample", "expression-tag": "rational", "domain": "plane",
   "params": {"zeros": [[0.5, 0.0, 1]], "poles": [[0.0, 2.0, 1], [0.0, -2.0, 1]]}},
  {"name": "notLP", "expression-tag": "exp-exp", "params": {"c": 3.0}, "domain": "unit-disc",
   "registry": {"zeros": [], "poles": [], "complete": true}},
  {"name": "broken-notLP", "expression-tag": "exp-exp-linear", "params": {"c": 3.0, "zero": 0.3}, "domain": "unit-disc",
   "registry": {"zeros": [[0.3, 0.0, 1]], "poles": [], "complete": true}},
  {"name": "g4ew", "expression-tag": "scaled-exp-w", "params": {"c": 4.0}, "domain": "unit-disc",
   "registry": {"zeros": [], "poles": [], "complete": true}},
  {"name": "h-exp", "expression-tag": "scaled-exp-w", "params": {"c": 1.0}, "domain": "unit-disc",
   "registry": {"zeros": [], "poles": [], "complete": true}},
  {"name": "sin-levy", "expression-tag": "sin-w", "params": {"listed_zeros": 1999}, "domain": "unit-disc"},
  {"name": "disc-rational-1", "expression-tag": "rational", "domain": "unit-disc",
   "params": {"scale_re": 0.5, "zeros": [[0.0, 0.5, 1]], "poles": [[0.0, 0.6, 1]]}},
  {"name": "disc-rational-2", "expression-tag": "rational", "domain": "unit-disc",
   "params": {"zeros": [[0.3, 0.0, 1], [-0.3, 0.0, 1]], "poles": [[0.0, 0.5, 1], [0.0, -0.5, 1]]}},
  {"name": "disc-rational-3", "expression-tag": "rational", "domain": "unit-disc",
   "params": {"zeros": [[0.0, 0.0, 1]], "poles": [[0.4, 0.4, 1], [-0.4, 0.4, 1]], "scale_re": 0.25}},
  {"name": "transferred-rational", "expression-tag": "transfer", "params": {"base": "disc-rational-1"}},
  {"name": "transferred-rational-2", "expression-tag": "transfer", "params": {"base": "disc-rational-2"}},
  {"name": "transferred-rational-3", "expression-tag": "transfer", "params": {"base": "disc-rational-3"}},
  {"name": "transferred-notLP", "expression-tag": "transfer", "params": {"base": "notLP"}}
])JSON";
}

}  // namespace valdist
