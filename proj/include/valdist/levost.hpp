#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "valdist/conformal.hpp"
#include "valdist/errors.hpp"
#include "valdist/function.hpp"
#include "valdist/roots.hpp"
#include "valdist/sampling.hpp"

namespace valdist {

struct LevOstOptions {
  /// Real zeros with |a| above this go to P rather than psi.
  double core_window = 0.999;
  double r_work = 0.95;
  double tail_tol = 1e-8;
  /// Scan cells per gap between consecutive zeros.
  int gap_grid = 64;
};


/// One zero of g' in each gap (a_k, a_{k+1}); the smallest if there are several.
inline std::vector<double> rolle_points(const FunctionHandle& g, const std::vector<double>& a_seq, int gap_grid = 64) {
  std::vector<double> out;
  if (a_seq.size() < 2) return out;
  const auto d1 = derivative(g, 1);
  // g' is real on the real axis; its scaled value keeps the sign and the
  // zeros while staying in double range.
  auto fn = [&](double x) { return d1(cplx{x, 0.0}).scaled().real(); };
  for (std::size_t k = 0; k + 1 < a_seq.size(); ++k) {
    const double lo = a_seq[k], hi = a_seq[k + 1];
    if (!(hi > lo)) throw InterlacingViolation("zeros must be strictly increasing");
    const auto roots = find_real_roots(fn, lo, hi, gap_grid);
    double pick = std::nan("");
    for (double r : roots) {
      if (r > lo && r < hi) {
        pick = r;
        break;
      }
    }
    if (std::isnan(pick)) throw RolleFailure("no zero of g' found between consecutive zeros");
    out.push_back(pick);
  }
  return out;
}

inline void check_interlacing(const std::vector<double>& a, const std::vector<double>& b) {
  if (b.size() > a.size()) throw InterlacingViolation("more Rolle points than zeros");
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!(a[k] < b[k])) throw InterlacingViolation("a_k < b_k fails at k = " + std::to_string(k));
    if (k + 1 < a.size() && !(b[k] < a[k + 1])) {
      throw InterlacingViolation("b_k < a_{k+1} fails at k = " + std::to_string(k));
    }
  }
  for (std::size_t k = 0; k + 1 < a.size(); ++k)
    if (!(a[k] < a[k + 1])) throw InterlacingViolation("zeros must be strictly increasing");
  for (double x : a)
    if (!(std::abs(x) < 1.0)) throw InterlacingViolation("zeros must lie in (-1, 1)");
}

/// sup over |z| <= r of |prod_{k in [from, to)} (b_k - z)/(a_k - z) - 1|,
/// bounded by exp(sum (b_k - a_k)/(|a_k| - r)) - 1. Infinite if some a_k
/// in the range has |a_k| <= r.
inline double product_tail_bound(const std::vector<double>& a, const std::vector<double>& b, std::size_t from,
                                 std::size_t to, double r) {
  double s = 0.0;
  for (std::size_t k = from; k < to; ++k) {
    const double gap = std::abs(a[k]) - r;
    if (!(gap > 0.0)) return inf;
    s += (b[k] - a[k]) / gap;
  }
  return std::expm1(s);
}

/// psi(z) = prod over the first K pairs of (b_k - z)/(a_k - z), with K the
/// smallest count whose certified tail bound on |z| <= r_work is below tail_tol.
inline FunctionHandle psi_product(const std::vector<double>& a, const std::vector<double>& b, std::size_t K) {
  std::vector<double> aa(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(K));
  std::vector<double> bb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(K));
  HandleSpec s;
  s.label = "psi";
  s.domain = DomainDescriptor::unit_disc();
  s.real_symmetric = true;
  s.eval = [aa, bb](cplx z) {
    cplx acc = 1.0;
    double log_scale = 0.0;
    for (std::size_t k = 0; k < aa.size(); ++k) {
      const cplx den = aa[k] - z;
      if (den == cplx{}) return Value::pole();
      acc *= (bb[k] - z) / den;
      const double m = std::abs(acc);
      if (m > 1e100 || (m < 1e-100 && m > 0.0)) {
        log_scale += std::log(m);
        acc /= m;
      }
    }
    return Value::exp_of(log_scale, acc);
  };
  s.logderiv = [aa, bb](cplx z) {
    cplx acc{};
    for (std::size_t k = 0; k < aa.size(); ++k) acc += 1.0 / (z - bb[k]) - 1.0 / (z - aa[k]);
    return Value::of(acc);
  };
  auto ev = s.eval;
  auto ld = s.logderiv;
  s.derivs.push_back([ev, ld](cplx z) { return ev(z) * ld(z); });
  ZeroPoleRegistry reg;
  for (double x : bb) reg.zeros.push_back({x, 1});
  for (double x : aa) reg.poles.push_back({x, 1});
  reg.complete = true;
  s.registry = reg;
  return FunctionHandle(std::move(s));
}

inline FunctionHandle constant_one_on_disc() {
  HandleSpec s;
  s.label = "psi";
  s.domain = DomainDescriptor::unit_disc();
  s.real_symmetric = true;
  s.eval = [](cplx) { return Value::of(1.0); };
  s.derivs.push_back([](cplx) { return Value{}; });
  s.logderiv = [](cplx) { return Value{}; };
  s.registry = ZeroPoleRegistry{{}, {}, true};
  return FunctionHandle(std::move(s));
}

struct LevinOstrovskiiFactorisation {
  std::vector<double> a_seq;
  std::vector<double> b_seq;
  /// Number of (a_k, b_k) pairs kept in the product.
  int truncation_K = 0;
  /// Certified sup of |tail factor - 1| on |z| <= r_work for the pairs
  /// beyond truncation_K.
  double tail_bound = 0.0;
  /// Same kind of bound for the zeros outside the core window, which P absorbs.
  double window_tail_bound = 0.0;
  double r_work = 0.95;
  bool constant_branch = false;
  FunctionHandle psi = constant_one_on_disc();
  FunctionHandle P = constant_one_on_disc();
};

struct PsiBuild {
  FunctionHandle psi;
  std::size_t K = 0;
  double tail_bound = 0.0;
};

inline PsiBuild build_psi(const std::vector<double>& a, const std::vector<double>& b, double r_work = 0.95,
                          double tail_tol = 1e-8) {
  check_interlacing(a, b);
  double total = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) total += b[k] - a[k];
  if (!(total < 2.0)) throw InterlacingViolation("sum of (b_k - a_k) must be below 2");
  const std::size_t n = b.size();
  // Tail sums from the end: the bound is monotone in K.
  std::size_t K = n;
  double bound = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double cand = product_tail_bound(a, b, k, n, r_work);
    if (cand < tail_tol) {
      K = k;
      bound = cand;
    } else {
      break;
    }
  }
  return {psi_product(a, b, K), K, bound};
}

/// g'/g = P psi with psi built from the real zeros of g in the core window.
/// A complete (finite) registry gives psi = 1.
inline LevinOstrovskiiFactorisation factorise(const FunctionHandle& g, const LevOstOptions& opt = {}) {
  LevinOstrovskiiFactorisation out;
  out.r_work = opt.r_work;
  const auto L = log_derivative(g);
  std::vector<double> a;
  if (g.registry()) {
    for (const auto& p : g.registry()->zeros)
      if (p.at.imag() == 0.0 && std::abs(p.at.real()) <= opt.core_window) a.push_back(p.at.real());
  } else {
    auto fn = [&](double x) { return g(cplx{x, 0.0}).scaled().real(); };
    a = find_real_roots(fn, -opt.core_window, opt.core_window, 20000);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  out.a_seq = a;
  out.b_seq = rolle_points(g, a, opt.gap_grid);
  check_interlacing(out.a_seq, out.b_seq);

  if (g.has_complete_registry() || a.size() < 2) {
    out.constant_branch = true;
    out.psi = constant_one_on_disc();
    out.truncation_K = 0;
    out.P = L;
    return out;
  }
  auto built = build_psi(out.a_seq, out.b_seq, opt.r_work, opt.tail_tol);
  out.psi = built.psi;
  out.truncation_K = static_cast<int>(built.K);
  out.tail_bound = built.tail_bound;
  // Zeros beyond the window: their gaps sum to at most 1 - a_last.
  const double a_last = std::max(std::abs(a.front()), std::abs(a.back()));
  out.window_tail_bound = a_last > opt.r_work ? std::expm1((1.0 - a_last) / (a_last - opt.r_work)) : inf;

  HandleSpec p;
  p.label = "P[" + g.label() + "]";
  p.domain = g.domain();
  p.real_symmetric = g.real_symmetric();
  auto psi = out.psi;
  p.eval = [L, psi](cplx z) { return L(z) / psi(z); };
  out.P = FunctionHandle(std::move(p));
  return out;
}

inline nlohmann::json to_json(const LevinOstrovskiiFactorisation& f) {
  nlohmann::json j;
  j["a_seq"] = f.a_seq;
  j["b_seq"] = f.b_seq;
  j["truncation_K"] = f.truncation_K;
  j["tail_bound"] = f.tail_bound;
  j["window_tail_bound"] = f.window_tail_bound;
  j["r_work"] = f.r_work;
  j["constant_branch"] = f.constant_branch;
  return j;
}

struct HerglotzReport {
  std::size_t samples = 0;
  double min_im = inf;
  /// Largest |arg psi - sum (arg(b_k - z) - arg(a_k - z))| modulo 2 pi.
  double max_arg_residual = 0.0;
  bool pass = false;
  bool constant_branch = false;
};

/// Im psi > 0 on quasi-random points of the upper half disc, plus the
/// argument-sum identity for product-form psi.
inline HerglotzReport herglotz_check(const FunctionHandle& psi, std::size_t n_samples, std::uint64_t seed = 1) {
  HerglotzReport rep;
  rep.samples = n_samples;
  const bool product = psi.registry() && psi.has_complete_registry() && !psi.registry()->poles.empty();
  if (!product && psi(cplx{0.0, 0.5}).to_complex() == cplx{1.0, 0.0}) {
    rep.constant_branch = true;
    rep.pass = true;
    rep.min_im = 0.0;
    return rep;
  }
  for (const auto& z : sample_upper_half_disc(n_samples, seed)) {
    const Value v = psi(z);
    const double im = std::sin(v.phase()) * std::exp(std::min(v.log_abs(), 700.0));
    rep.min_im = std::min(rep.min_im, im);
    if (product) {
      double s = 0.0;
      const auto& reg = *psi.registry();
      for (std::size_t k = 0; k < reg.poles.size(); ++k)
        s += std::arg(reg.zeros[k].at - z) - std::arg(reg.poles[k].at - z);
      rep.max_arg_residual = std::max(rep.max_arg_residual, std::abs(std::remainder(s - v.phase(), two_pi)));
    }
  }
  rep.pass = rep.min_im > 0.0;
  return rep;
}

struct Sandwich {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  [[nodiscard]] bool holds() const { return lower <= value && value <= upper; }
};

inline cplx sandwich_base() { return {0.0, std::sqrt(5.0) - 2.0}; }

/// (1-|z|^2) Im z/(20|z|^2) <= |psi(z)/psi(base)| <= 20|z|^2/((1-|z|^2) Im z)
/// for 2 - sqrt 3 <= |z| < 1, Im z > 0.
inline Sandwich psi_sandwich_check(const FunctionHandle& psi, cplx z, cplx base = sandwich_base()) {
  const double m = std::abs(z);
  if (!(z.imag() > 0.0 && m >= 2.0 - std::sqrt(3.0) && m < 1.0)) {
    throw DomainError("sandwich needs 2 - sqrt(3) <= |z| < 1 and Im z > 0");
  }
  Sandwich s;
  const double q = (1.0 - m * m) * z.imag() / (m * m);
  s.lower = q / 20.0;
  s.upper = 20.0 / q;
  s.value = std::exp(psi(z).log_abs() - psi(base).log_abs());
  return s;
}

/// The half-plane form: Im w/(5|w|^2) <= |Psi(w)/Psi(i)| <= 5|w|^2/Im w for
/// Psi = psi o z(w), |w| >= 1, Im w > 0.
inline Sandwich halfplane_levin_check(const FunctionHandle& psi, cplx w) {
  if (!(w.imag() > 0.0 && std::abs(w) >= 1.0)) throw DomainError("need |w| >= 1 and Im w > 0");
  Sandwich s;
  const double q = w.imag() / std::norm(w);
  s.lower = q / 5.0;
  s.upper = 5.0 / q;
  s.value = std::exp(psi(z_of_w(w)).log_abs() - psi(z_of_w(cplx{0.0, 1.0})).log_abs());
  return s;
}

}  // namespace valdist
