#pragma once

#include <cmath>

#include "valdist/errors.hpp"
#include "valdist/function.hpp"

namespace valdist {

/// w = 4z/(z^2+1): maps the unit disc one-to-one onto the plane cut along
/// the real rays |X| >= 2, the upper half disc into the upper half plane,
/// and (-1, 1) increasingly onto (-2, 2).
inline cplx w_of_z(cplx z) { return 4.0 * z / (z * z + 1.0); }

/// dw/dz = 4(1 - z^2)/(1 + z^2)^2.
inline cplx w_jacobian(cplx z) {
  const cplx q = 1.0 + z * z;
  return 4.0 * (1.0 - z * z) / (q * q);
}

inline bool on_branch_cut(cplx w) { return std::abs(w.imag()) < 1e-14 && std::abs(w.real()) >= 2.0; }

/// The root of z^2 - (4/w) z + 1 = 0 inside the unit disc. The larger root is
/// formed first and the small one taken as its reciprocal, since the roots
/// multiply to 1; this stays accurate as w -> 0.
inline cplx z_of_w(cplx w) {
  if (on_branch_cut(w)) throw BranchCut("w lies on the cut |Re w| >= 2, Im w = 0");
  if (w == cplx{}) return {};
  const cplx p = 2.0 / w;
  cplx s = std::sqrt(p * p - 1.0);
  if ((std::conj(p) * s).real() < 0.0) s = -s;
  const cplx big = p + s;
  return 1.0 / big;
}

struct HalfplaneWitness {
  double im_w = 0.0;
  double abs_w = 0.0;
  /// |Im w/|w|^2 - (1-|z|^2) Im z/(4|z|^2)|
  double identity_residual = 0.0;
  /// Whether 2 - sqrt(3) <= |z| < 1, where |w| >= 1 is claimed.
  bool in_annulus = false;
  bool abs_w_at_least_one = false;
};

inline HalfplaneWitness halfplane_witness(cplx z) {
  if (!(std::abs(z) < 1.0) || !(z.imag() >= 0.0)) throw DomainError("witness needs z in the closed upper half disc");
  HalfplaneWitness out;
  const cplx w = w_of_z(z);
  out.im_w = w.imag();
  out.abs_w = std::abs(w);
  if (z != cplx{}) {
    const double lhs = w.imag() / std::norm(w);
    const double rhs = (1.0 - std::norm(z)) * z.imag() / (4.0 * std::norm(z));
    out.identity_residual = std::abs(lhs - rhs);
  }
  const double m = std::abs(z);
  out.in_annulus = m >= 2.0 - std::sqrt(3.0) && m < 1.0;
  out.abs_w_at_least_one = out.abs_w >= 1.0 - 1e-12;
  return out;
}

namespace detail {

inline cplx nan_c() { return {std::nan(""), std::nan("")}; }

}  // namespace detail

/// G*(w) = G(z(w)) for G on the unit disc; the result lives on the cut plane.
inline FunctionHandle transfer(const FunctionHandle& g, const std::string& label = {}) {
  if (g.domain().kind() != DomainKind::unit_disc) throw PreconditionError("transfer expects a function on the unit disc");
  Substitution sub;
  sub.map = [](cplx w) { return z_of_w(w); };
  sub.map_derivative = [](cplx w) { return 1.0 / w_jacobian(z_of_w(w)); };
  sub.inverse = [](cplx z) { return std::abs(z) < 1.0 ? w_of_z(z) : detail::nan_c(); };
  sub.domain = DomainDescriptor::cut_plane();
  sub.label = label.empty() ? g.label() + "*" : label;
  sub.preserves_real_symmetry = true;
  return substitute(g, sub);
}

/// F(z) = H(w(z)) for H on the cut plane; the result lives on the unit disc.
inline FunctionHandle pullback(const FunctionHandle& h, const std::string& label = {}) {
  Substitution sub;
  sub.map = [](cplx z) { return w_of_z(z); };
  sub.map_derivative = [](cplx z) { return w_jacobian(z); };
  sub.inverse = [](cplx w) { return on_branch_cut(w) ? detail::nan_c() : z_of_w(w); };
  sub.domain = DomainDescriptor::unit_disc();
  sub.label = label.empty() ? h.label() + "@w" : label;
  sub.preserves_real_symmetry = true;
  return substitute(h, sub);
}

}  // namespace valdist
