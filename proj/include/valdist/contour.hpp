#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <variant>
#include <vector>

#include "valdist/errors.hpp"
#include "valdist/value.hpp"

namespace valdist {

struct Segment {
  cplx a, b;
};

/// Arc of the circle |z - center| = radius from angle theta0 to theta1
/// (counter-clockwise when theta1 > theta0).
struct Arc {
  cplx center;
  double radius;
  double theta0, theta1;
};

using ContourPiece = std::variant<Segment, Arc>;

enum class ContourKind { circle, arc_j, polyline, lune_boundary };

namespace detail {

inline double distance_to_segment(cplx p, const Segment& s) {
  const cplx d = s.b - s.a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - s.a);
  const double t = std::clamp(((p - s.a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (s.a + t * d));
}

inline double distance_to_arc(cplx p, const Arc& arc) {
  const double lo = std::min(arc.theta0, arc.theta1);
  const double hi = std::max(arc.theta0, arc.theta1);
  const cplx rel = p - arc.center;
  double ang = std::arg(rel);
  // Bring the angle into [lo, lo + 2 pi).
  while (ang < lo) ang += two_pi;
  while (ang >= lo + two_pi) ang -= two_pi;
  if (ang <= hi) return std::abs(std::abs(rel) - arc.radius);
  const cplx e0 = arc.center + std::polar(arc.radius, arc.theta0);
  const cplx e1 = arc.center + std::polar(arc.radius, arc.theta1);
  return std::min(std::abs(p - e0), std::abs(p - e1));
}

}  // namespace detail

/// A piecewise path made of segments and circular arcs, parametrised piece by
/// piece over t in [0, 1]. Closed contours are oriented counter-clockwise
/// around the region they bound.
class Contour {
 public:
  static Contour circle(cplx center, double radius) {
    return Contour(ContourKind::circle, {Arc{center, radius, 0.0, two_pi}}, true);
  }

  /// The arc J(r) = { r sin(t) e^{it} : asin(1/r) <= t <= pi - asin(1/r) }, r >= 1.
  /// It lies on |z - ir/2| = r/2; in that circle's own angle it runs from
  /// 2 asin(1/r) - pi/2 to 3 pi/2 - 2 asin(1/r).
  static Contour arc_J(double r) {
    if (!(r >= 1.0)) throw PreconditionError("arc J(r) requires r >= 1");
    const double alpha = std::asin(1.0 / r);
    return Contour(ContourKind::arc_j,
                   {Arc{cplx{0.0, r / 2.0}, r / 2.0, 2.0 * alpha - pi / 2.0, 1.5 * pi - 2.0 * alpha}}, false);
  }

  static Contour polyline(const std::vector<cplx>& pts, bool closed) {
    if (pts.size() < 2) throw PreconditionError("polyline needs at least two points");
    std::vector<ContourPiece> pieces;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) pieces.emplace_back(Segment{pts[i], pts[i + 1]});
    if (closed) pieces.emplace_back(Segment{pts.back(), pts.front()});
    return Contour(ContourKind::polyline, std::move(pieces), closed);
  }

  static Contour rectangle(double x0, double x1, double y0, double y1) {
    return polyline({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, true);
  }

  /// Boundary of { |z| >= 1, |z - ir/2| <= r/2 }: J(r) followed by the unit
  /// circle traversed clockwise back through i.
  static Contour lune_boundary(double r) {
    if (!(r > 1.0)) throw PreconditionError("lune boundary requires r > 1");
    const double alpha = std::asin(1.0 / r);
    return Contour(ContourKind::lune_boundary,
                   {Arc{cplx{0.0, r / 2.0}, r / 2.0, 2.0 * alpha - pi / 2.0, 1.5 * pi - 2.0 * alpha},
                    Arc{cplx{}, 1.0, pi - alpha, alpha}},
                   true);
  }

  /// Boundary of the half disc { |z| < radius, Im(z e^{-i angle}) > 0 }.
  static Contour half_disc(double radius, double angle) {
    const cplx start = std::polar(radius, angle + pi);
    const cplx end = std::polar(radius, angle);
    return Contour(ContourKind::polyline, {Segment{start, end}, Arc{cplx{}, radius, angle, angle + pi}}, true);
  }

  [[nodiscard]] ContourKind kind() const { return kind_; }
  [[nodiscard]] bool closed() const { return closed_; }
  [[nodiscard]] const std::vector<ContourPiece>& pieces() const { return pieces_; }

  [[nodiscard]] static cplx point(const ContourPiece& piece, double t) {
    if (const auto* s = std::get_if<Segment>(&piece)) return s->a + t * (s->b - s->a);
    const auto& a = std::get<Arc>(piece);
    return a.center + std::polar(a.radius, a.theta0 + t * (a.theta1 - a.theta0));
  }

  [[nodiscard]] double distance_to(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_) {
      if (const auto* s = std::get_if<Segment>(&piece)) {
        d = std::min(d, detail::distance_to_segment(p, *s));
      } else {
        d = std::min(d, detail::distance_to_arc(p, std::get<Arc>(piece)));
      }
    }
    return d;
  }

 private:
  Contour(ContourKind kind, std::vector<ContourPiece> pieces, bool closed)
      : kind_(kind), pieces_(std::move(pieces)), closed_(closed) {}

  ContourKind kind_;
  std::vector<ContourPiece> pieces_;
  bool closed_;
};

/// |z - c| <= r
struct InsideDisc {
  cplx c;
  double r;
};
/// |z - c| >= r
struct OutsideDisc {
  cplx c;
  double r;
};
/// Re(z conj(n)) >= offset
struct HalfPlane {
  cplx n;
  double offset;
};
struct Box {
  double x0, x1, y0, y1;
};

using Constraint = std::variant<InsideDisc, OutsideDisc, HalfPlane, Box>;

enum class CellClass { inside, outside, straddle };

/// A closed region given as an intersection of simple constraints, together
/// with its positively oriented boundary contour.
class Region {
 public:
  static Region disc(cplx c, double r) {
    return Region({InsideDisc{c, r}}, Contour::circle(c, r), {c.real() - r, c.real() + r, c.imag() - r, c.imag() + r});
  }

  /// Tsuji's counting region { |z| >= 1, |z - ir/2| <= r/2 }; empty for r <= 1
  /// apart from the point i at r = 1.
  static Region lune(double r) {
    const Contour boundary = r > 1.0 ? Contour::lune_boundary(r) : Contour::circle(cplx{0.0, 1.0}, 0.0);
    return Region({OutsideDisc{cplx{}, 1.0}, InsideDisc{cplx{0.0, r / 2.0}, r / 2.0}}, boundary,
                  {-r / 2.0, r / 2.0, 0.0, r});
  }

  static Region rectangle(double x0, double x1, double y0, double y1) {
    return Region({Box{x0, x1, y0, y1}}, Contour::rectangle(x0, x1, y0, y1), {x0, x1, y0, y1});
  }

  static Region half_disc(double radius, double angle) {
    const cplx n = std::polar(1.0, angle + pi / 2.0);
    return Region({InsideDisc{cplx{}, radius}, HalfPlane{n, 0.0}}, Contour::half_disc(radius, angle),
                  {-radius, radius, -radius, radius});
  }

  [[nodiscard]] const Contour& boundary() const { return boundary_; }
  [[nodiscard]] const Box& bbox() const { return bbox_; }

  /// Closed-set membership with an absolute slack.
  [[nodiscard]] bool contains(cplx z, double slack = 1e-14) const {
    for (const auto& c : constraints_) {
      const bool ok = std::visit(
          [&](const auto& k) -> bool {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, InsideDisc>) return std::abs(z - k.c) <= k.r + slack;
            if constexpr (std::is_same_v<K, OutsideDisc>) return std::abs(z - k.c) >= k.r - slack;
            if constexpr (std::is_same_v<K, HalfPlane>) return (z * std::conj(k.n)).real() >= k.offset - slack;
            if constexpr (std::is_same_v<K, Box>)
              return z.real() >= k.x0 - slack && z.real() <= k.x1 + slack && z.imag() >= k.y0 - slack &&
                     z.imag() <= k.y1 + slack;
          },
          c);
      if (!ok) return false;
    }
    return true;
  }

  /// Conservative classification of an axis-aligned cell.
  [[nodiscard]] CellClass classify(const Box& cell) const {
    bool all_inside = true;
    const std::array<cplx, 4> corners{cplx{cell.x0, cell.y0}, cplx{cell.x1, cell.y0}, cplx{cell.x1, cell.y1},
                                      cplx{cell.x0, cell.y1}};
    auto dist_to_box = [&](cplx p) {
      const double dx = std::max({cell.x0 - p.real(), 0.0, p.real() - cell.x1});
      const double dy = std::max({cell.y0 - p.imag(), 0.0, p.imag() - cell.y1});
      return std::hypot(dx, dy);
    };
    for (const auto& c : constraints_) {
      CellClass k = std::visit(
          [&](const auto& con) -> CellClass {
            using K = std::decay_t<decltype(con)>;
            if constexpr (std::is_same_v<K, InsideDisc>) {
              if (dist_to_box(con.c) > con.r) return CellClass::outside;
              for (auto z : corners)
                if (std::abs(z - con.c) > con.r) return CellClass::straddle;
              return CellClass::inside;
            } else if constexpr (std::is_same_v<K, OutsideDisc>) {
              bool all_in_disc = true;
              for (auto z : corners)
                if (std::abs(z - con.c) >= con.r) all_in_disc = false;
              if (all_in_disc) return CellClass::outside;
              return dist_to_box(con.c) >= con.r ? CellClass::inside : CellClass::straddle;
            } else if constexpr (std::is_same_v<K, HalfPlane>) {
              int in = 0;
              for (auto z : corners)
                if ((z * std::conj(con.n)).real() >= con.offset) ++in;
              return in == 4 ? CellClass::inside : (in == 0 ? CellClass::outside : CellClass::straddle);
            } else {
              if (cell.x1 < con.x0 || cell.x0 > con.x1 || cell.y1 < con.y0 || cell.y0 > con.y1)
                return CellClass::outside;
              if (cell.x0 >= con.x0 && cell.x1 <= con.x1 && cell.y0 >= con.y0 && cell.y1 <= con.y1)
                return CellClass::inside;
              return CellClass::straddle;
            }
          },
          c);
      if (k == CellClass::outside) return CellClass::outside;
      if (k == CellClass::straddle) all_inside = false;
    }
    return all_inside ? CellClass::inside : CellClass::straddle;
  }

 private:
  Region(std::vector<Constraint> constraints, Contour boundary, Box bbox)
      : constraints_(std::move(constraints)), boundary_(std::move(boundary)), bbox_(bbox) {}

  std::vector<Constraint> constraints_;
  Contour boundary_;
  Box bbox_;
};

}  // namespace valdist
