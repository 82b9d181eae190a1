#pragma once

// Set-valued quantiles: per-direction quantile halfspaces, cone-quantile
// membership, the four-way verdict, and planar region polygons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "conerank/cones.hpp"
#include "conerank/distribution.hpp"
#include "conerank/model.hpp"

namespace conerank {

enum class QuantileSide { lower, upper };

/// lower: {z : direction^T z >= threshold}; upper: {z : direction^T z <= threshold}.
/// An upper halfspace with threshold +inf is all of R^d.
struct QuantileHalfspace {
  Vector direction;
  double threshold = 0.0;
  QuantileSide side = QuantileSide::lower;

  bool is_whole_space() const { return std::isinf(threshold); }

  bool contains(const Vector& z, double tol = tolerance()) const {
    if (is_whole_space()) return true;
    const double s = direction.dot(z) - threshold;
    const double slack = tol * std::max({1.0, std::abs(threshold), direction.norm() * z.norm()});
    return side == QuantileSide::lower ? s >= -slack : s <= slack;
  }
};

namespace detail {

inline void check_order(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in the open interval (0, 1)");
}

// Smallest integer count k with k >= m p.
inline std::size_t lower_order(std::size_t m, double p) {
  const double mp = static_cast<double>(m) * p;
  const auto k = static_cast<std::size_t>(std::ceil(mp - 1e-9));
  return std::clamp<std::size_t>(k, 1, m);
}

// Largest integer count j with j <= m p.
inline std::size_t upper_count(std::size_t m, double p) {
  const double mp = static_cast<double>(m) * p;
  return static_cast<std::size_t>(std::floor(mp + 1e-9));
}

inline std::vector<double> sorted_projections(const EvaluationMatrix& x, const Vector& v) {
  std::vector<double> s;
  s.reserve(x.alternatives());
  for (std::size_t i = 0; i < x.alternatives(); ++i) s.push_back(v.dot(x.column(i)));
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

/// Order-statistic closed form: threshold is the ceil(m p)-th smallest v^T x_i.
/// The direction is kept as given so thresholds stay in the caller's units.
inline QuantileHalfspace lower_v_quantile(const EvaluationMatrix& x, const Vector& v, double p) {
  detail::check_order(p);
  detail::check_dims(x, v.size(), "direction");
  if (v.norm() == 0.0) throw InvalidArgument("zero direction");
  const auto s = detail::sorted_projections(x, v);
  return {v, s[detail::lower_order(s.size(), p) - 1], QuantileSide::lower};
}

/// Threshold is the (floor(m p) + 1)-th smallest v^T x_i, or +inf when
/// floor(m p) >= m.
inline QuantileHalfspace upper_v_quantile(const EvaluationMatrix& x, const Vector& v, double p) {
  detail::check_order(p);
  detail::check_dims(x, v.size(), "direction");
  if (v.norm() == 0.0) throw InvalidArgument("zero direction");
  const auto s = detail::sorted_projections(x, v);
  const std::size_t j = detail::upper_count(s.size(), p);
  const double t = j >= s.size() ? std::numeric_limits<double>::infinity() : s[j];
  return {v, t, QuantileSide::upper};
}

inline bool lower_quantile_membership(const EvaluationMatrix& x, const ConvexCone& k_i, double p, const Vector& z) {
  detail::check_order(p);
  return cone_distribution(x, k_i, z).rank.count >= detail::lower_order(x.alternatives(), p);
}

inline bool upper_quantile_membership(const EvaluationMatrix& x, const ConvexCone& k_i, double p, const Vector& z) {
  detail::check_order(p);
  return strict_exceedance_sup(x, k_i, z).rank.count <= detail::upper_count(x.alternatives(), p);
}

enum class Verdict { recommended, non_advisable, neutral, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::recommended: return "recommended";
    case Verdict::non_advisable: return "non_advisable";
    case Verdict::neutral: return "neutral";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

inline std::ostream& operator<<(std::ostream& os, Verdict v) { return os << to_string(v); }

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "recommended") return Verdict::recommended;
  if (s == "non_advisable") return Verdict::non_advisable;
  if (s == "neutral") return Verdict::neutral;
  if (s == "indeterminate") return Verdict::indeterminate;
  throw InvalidArgument("unknown verdict label '" + s + "'");
}

inline Verdict verdict_of(bool in_lower, bool in_upper) {
  if (in_lower && in_upper) return Verdict::neutral;
  if (in_lower) return Verdict::recommended;
  if (in_upper) return Verdict::non_advisable;
  return Verdict::indeterminate;
}

struct QuantileVerdict {
  std::string alternative_id;
  bool in_lower = false;
  bool in_upper = false;
  Verdict label = Verdict::indeterminate;
  friend bool operator==(const QuantileVerdict&, const QuantileVerdict&) = default;
};

/// One verdict per alternative, in alternative order. ids may be empty, in
/// which case alternatives are named a1..am.
inline std::vector<QuantileVerdict> classify(const EvaluationMatrix& x, const ConvexCone& k_i, double p,
                                             std::span<const std::string> ids = {}) {
  detail::check_order(p);
  if (!ids.empty() && ids.size() != x.alternatives())
    throw InvalidArgument("alternative id count does not match the evaluation matrix");
  std::vector<QuantileVerdict> out;
  out.reserve(x.alternatives());
  for (std::size_t i = 0; i < x.alternatives(); ++i) {
    const Vector z = x.column(i);
    QuantileVerdict v;
    v.alternative_id = ids.empty() ? "a" + std::to_string(i + 1) : ids[i];
    v.in_lower = lower_quantile_membership(x, k_i, p, z);
    v.in_upper = upper_quantile_membership(x, k_i, p, z);
    v.label = verdict_of(v.in_lower, v.in_upper);
    out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Planar regions

struct Box {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  friend bool operator==(const Box&, const Box&) = default;
};

using Point2 = Eigen::Vector2d;
using Polygon = std::vector<Point2>;

/// Halfplane {q : normal^T q >= offset}.
struct Halfplane {
  Point2 normal;
  double offset = 0.0;
};

inline Polygon box_polygon(const Box& b) {
  return {Point2(b.x0, b.y0), Point2(b.x1, b.y0), Point2(b.x1, b.y1), Point2(b.x0, b.y1)};
}

/// Sutherland-Hodgman clip of a convex polygon; points within tol of the
/// boundary are kept so that touching sets survive as points or segments.
inline Polygon clip(const Polygon& poly, const Halfplane& h, double tol = tolerance()) {
  if (poly.empty()) return {};
  const double scale = std::max(1.0, std::abs(h.offset));
  auto side = [&](const Point2& q) { return h.normal.dot(q) - h.offset; };
  auto inside = [&](double s) { return s >= -tol * scale; };
  Polygon out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    const double sa = side(a), sb = side(b);
    if (inside(sa)) out.push_back(a);
    if (inside(sa) != inside(sb)) {
      const double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  // Drop consecutive duplicates.
  Polygon clean;
  for (const auto& q : out)
    if (clean.empty() || (q - clean.back()).norm() > 1e-12 * std::max(1.0, q.norm())) clean.push_back(q);
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-12 * std::max(1.0, clean.front().norm()))
    clean.pop_back();
  return clean;
}

inline double area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

inline bool polygon_contains(const Polygon& poly, const Point2& q, double tol = 1e-9) {
  if (poly.empty()) return false;
  if (poly.size() == 1) return (poly[0] - q).norm() <= tol;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % poly.size()];
    const Point2 e = b - a;
    const double cross = e.x() * (q.y() - a.y()) - e.y() * (q.x() - a.x());
    if (cross < -tol * std::max(1.0, e.norm())) return false;
  }
  if (poly.size() == 2) {
    const Point2 e = poly[1] - poly[0];
    const double t = e.dot(q - poly[0]) / std::max(e.squaredNorm(), 1e-300);
    return t >= -tol && t <= 1.0 + tol;
  }
  return true;
}

enum class Overlap { empty, point, segment, area };

inline const char* to_string(Overlap o) {
  switch (o) {
    case Overlap::empty: return "empty";
    case Overlap::point: return "point";
    case Overlap::segment: return "segment";
    case Overlap::area: return "area";
  }
  return "empty";
}

inline std::ostream& operator<<(std::ostream& os, Overlap o) { return os << to_string(o); }

/// Dimension of a (possibly degenerate) convex polygon.
inline Overlap overlap_kind(const Polygon& poly, double tol = 1e-7) {
  if (poly.empty()) return Overlap::empty;
  double diameter = 0.0;
  for (const auto& a : poly)
    for (const auto& b : poly) diameter = std::max(diameter, (a - b).norm());
  if (diameter <= tol) return Overlap::point;
  if (area(poly) <= tol * std::max(1.0, diameter)) return Overlap::segment;
  return Overlap::area;
}

struct QuantileRegion2D {
  double p = 0.5;
  Box bbox;
  Polygon lower_polygon;
  Polygon upper_polygon;
  std::vector<Halfplane> lower_halfplanes;
  std::vector<Halfplane> upper_halfplanes;

  /// Both quantile sets intersected within the box.
  Polygon intersection() const {
    Polygon poly = box_polygon(bbox);
    for (const auto& h : lower_halfplanes) poly = clip(poly, h);
    for (const auto& h : upper_halfplanes) poly = clip(poly, h);
    return poly;
  }
};

/// Directions at which the order statistics of {v^T x_i} over the planar cone
/// can change: the cone's extreme rays and every normal of x_i - x_j inside
/// the cone. Between consecutive directions the sorted order is fixed, so a
/// quantile set is exactly the intersection of its halfspaces at these
/// directions. Gaps wider than a quarter turn are subdivided.
inline std::vector<Vector> region_directions(const EvaluationMatrix& x, const ConvexCone& k_i,
                                             double tol = tolerance()) {
  const detail::Arc arc = detail::planar_arc(k_i.generators(), tol);
  std::vector<double> ts{0.0, arc.span};
  if (arc.span > tol) {
    for (std::size_t i = 0; i < x.alternatives(); ++i) {
      for (std::size_t j = i + 1; j < x.alternatives(); ++j) {
        const Vector y = x.column(i) - x.column(j);
        if (y.norm() <= tol * std::max(1.0, x.column(i).norm())) continue;
        const double a = angle_of(y(0), y(1));
        for (const double normal : {a + kPi / 2.0, a - kPi / 2.0}) {
          const double t = wrap_angle(normal - arc.start);
          if (t > tol && t < arc.span - tol) ts.push_back(t);
        }
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(), [tol](double a, double b) { return b - a <= tol; }), ts.end());
  std::vector<double> refined;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    refined.push_back(ts[i]);
    if (i + 1 < ts.size()) {
      const double gap = ts[i + 1] - ts[i];
      const int pieces = static_cast<int>(std::ceil(gap / (kPi / 2.0)));
      for (int k = 1; k < pieces; ++k) refined.push_back(ts[i] + gap * k / pieces);
    }
  }
  std::vector<Vector> out;
  for (double t : refined) out.push_back(direction_at(arc.start + t));
  return out;
}

inline QuantileRegion2D quantile_region_2d(const EvaluationMatrix& x, const ConvexCone& k_i, double p,
                                           const Box& bbox) {
  detail::check_order(p);
  if (k_i.dim() != 2) throw InvalidArgument("unsupported dimension: quantile regions are planar only");
  detail::check_dims(x, 2, "cone");
  if (k_i.is_trivial()) throw InvalidArgument("invalid importance cone: trivial cone {0}");
  if (!(bbox.x1 > bbox.x0 && bbox.y1 > bbox.y0)) throw InvalidArgument("empty bounding box");

  QuantileRegion2D r;
  r.p = p;
  r.bbox = bbox;
  for (const auto& v : region_directions(x, k_i)) {
    const auto lo = lower_v_quantile(x, v, p);
    r.lower_halfplanes.push_back({Point2(v(0), v(1)), lo.threshold});
    const auto up = upper_v_quantile(x, v, p);
    if (!up.is_whole_space()) r.upper_halfplanes.push_back({Point2(-v(0), -v(1)), -up.threshold});
  }
  r.lower_polygon = box_polygon(bbox);
  for (const auto& h : r.lower_halfplanes) r.lower_polygon = clip(r.lower_polygon, h);
  r.upper_polygon = box_polygon(bbox);
  for (const auto& h : r.upper_halfplanes) r.upper_polygon = clip(r.upper_polygon, h);
  return r;
}

}  // namespace conerank
