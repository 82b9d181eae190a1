#pragma once

// Empirical scalarized CDFs and the empirical cone distribution function.
//
// For fixed z, the weak count #{i : v^T (x_i - z) <= 0} is piecewise constant
// on the arrangement of the hyperplanes {v : v^T (x_i - z) = 0} and upper
// semicontinuous, so its infimum over the importance cone is attained in an
// open cell. The strict count #{i : v^T (x_i - z) < 0} is lower
// semicontinuous, so its supremum is attained in an open cell too. Both are
// evaluated exactly by visiting one direction per cell.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "conerank/cones.hpp"
#include "conerank/linalg.hpp"
#include "conerank/model.hpp"

namespace conerank {

/// A rank k/m on the probability scale.
struct Rank {
  std::size_t count = 0;
  std::size_t of = 1;

  double value() const { return of == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(of); }

  friend bool operator==(const Rank& a, const Rank& b) { return a.count * b.of == b.count * a.of; }
  friend std::strong_ordering operator<=>(const Rank& a, const Rank& b) {
    return a.count * b.of <=> b.count * a.of;
  }
};

struct DirectionWitness {
  Vector direction;
  std::size_t count = 0;
};

struct RankedValue {
  Rank rank;
  DirectionWitness witness;
};

namespace detail {

inline void check_dims(const EvaluationMatrix& x, Eigen::Index d_other, const char* what) {
  if (x.alternatives() == 0) throw InvalidArgument("empty evaluation matrix");
  if (static_cast<Eigen::Index>(x.criteria()) != d_other)
    throw InvalidArgument(std::string("dimension mismatch between evaluations and ") + what);
}

/// Sample points shifted to z; points equal to z are tallied separately
/// because they count for every direction under weak inequality and never
/// under strict inequality.
struct Centered {
  std::vector<Vector> diffs;
  std::vector<double> slack;
  std::size_t coincident = 0;
  std::size_t m = 0;
};

inline Centered center(const EvaluationMatrix& x, const Vector& z, double tol = tolerance()) {
  Centered c;
  c.m = x.alternatives();
  for (std::size_t i = 0; i < c.m; ++i) {
    const Vector xi = x.column(i);
    const Vector y = xi - z;
    const double scale = std::max({1.0, xi.norm(), z.norm()});
    if (y.norm() <= tol * scale) {
      ++c.coincident;
      continue;
    }
    c.diffs.push_back(y);
    c.slack.push_back(tol * std::max(1.0, y.norm()));
  }
  return c;
}

// v is a unit vector in both counters.
inline std::size_t weak_count(const Centered& c, const Vector& v) {
  std::size_t n = c.coincident;
  for (std::size_t i = 0; i < c.diffs.size(); ++i)
    if (v.dot(c.diffs[i]) <= c.slack[i]) ++n;
  return n;
}

inline std::size_t strict_count(const Centered& c, const Vector& v) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < c.diffs.size(); ++i)
    if (v.dot(c.diffs[i]) < -c.slack[i]) ++n;
  return n;
}

/// Offsets t in [0, arc.span] (directions arc.start + t) hitting every open
/// cell of the planar arrangement {v : v^T y = 0} inside the arc, plus the
/// two extreme rays. Sorted ascending.
inline std::vector<double> arc_offsets(const Arc& arc, const std::vector<Vector>& ys,
                                       double tol = tolerance()) {
  if (arc.span <= tol) return {0.0};
  const bool full = arc.span >= 2.0 * kPi - tol;
  std::vector<double> interior;
  bool clamp_start = false, clamp_end = false;
  for (const auto& y : ys) {
    const double a = angle_of(y(0), y(1));
    for (const double normal : {a + kPi / 2.0, a - kPi / 2.0}) {
      const double t = wrap_angle(normal - arc.start);
      if (full) {
        if (t <= tol || t >= 2.0 * kPi - tol) {
          clamp_start = clamp_end = true;
        } else {
          interior.push_back(t);
        }
      } else if (t > tol && t < arc.span - tol) {
        interior.push_back(t);
      } else {
        // Outside the arc (or on an endpoint): clamp to the nearest endpoint.
        const double to_start = std::min(t, 2.0 * kPi - t);
        const double to_end = std::abs(t - arc.span);
        const double to_end_wrapped = std::min(to_end, 2.0 * kPi - to_end);
        (to_start <= to_end_wrapped ? clamp_start : clamp_end) = true;
      }
    }
  }
  std::sort(interior.begin(), interior.end());
  interior.erase(std::unique(interior.begin(), interior.end(),
                             [tol](double p, double q) { return q - p <= tol; }),
                 interior.end());

  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), interior.begin(), interior.end());
  breaks.push_back(arc.span);
  double min_gap = arc.span;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double gap = breaks[i + 1] - breaks[i];
    if (gap > tol) min_gap = std::min(min_gap, gap);
  }
  const double delta = 0.5 * min_gap;

  std::vector<double> out{0.0, arc.span};
  for (double t : interior) {
    out.push_back(t - delta);
    out.push_back(t + delta);
  }
  if (clamp_start) out.push_back(delta);
  if (clamp_end) out.push_back(arc.span - delta);
  for (auto& t : out) t = std::clamp(t, 0.0, arc.span);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double p, double q) { return q - p <= 1e-15; }), out.end());
  return out;
}

/// One unit direction inside every open cell of the central arrangement
/// {u : n^T u = 0, n in normals} in R^k. Cells are reached from their extreme
/// rays: at each vertex ray the local arrangement of the tight hyperplanes is
/// enumerated recursively one dimension lower.
inline std::vector<Vector> central_cell_points(const std::vector<Vector>& raw_normals, Eigen::Index k,
                                               double tol = tolerance()) {
  std::vector<Vector> normals;
  for (const auto& n : raw_normals)
    if (n.norm() > tol) normals.push_back(n / n.norm());

  if (k == 1) return {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  if (normals.empty()) return {basis_vector(k, 0)};

  if (k == 2) {
    std::vector<double> lines;
    for (const auto& n : normals) {
      const double a = angle_of(-n(1), n(0));
      lines.push_back(a);
      lines.push_back(wrap_angle(a + kPi));
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end(), [tol](double p, double q) { return q - p <= tol; }),
                lines.end());
    if (lines.size() > 1 && lines.back() - lines.front() >= 2.0 * kPi - tol) lines.pop_back();
    std::vector<Vector> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const double next = i + 1 < lines.size() ? lines[i + 1] : lines[0] + 2.0 * kPi;
      out.push_back(direction_at(0.5 * (lines[i] + next)));
    }
    return out;
  }

  const SpanSplit split = split_span(normals, k);
  if (split.rank() < k) {
    // Cells are products of cells inside span(normals) with the complement.
    std::vector<Vector> projected;
    for (const auto& n : normals) projected.push_back(split.span.transpose() * n);
    std::vector<Vector> out;
    for (const auto& u : central_cell_points(projected, split.rank(), tol)) out.push_back(split.span * u);
    return out;
  }

  std::vector<Vector> rays;
  for_each_combination(normals.size(), static_cast<std::size_t>(k - 1), [&](const std::vector<std::size_t>& idx) {
    std::vector<Vector> rows;
    for (auto i : idx) rows.push_back(normals[i]);
    const SpanSplit s = split_span(rows, k);
    if (s.complement.cols() != 1) return;
    rays.push_back(s.complement.col(0));
    rays.push_back(-s.complement.col(0));
  });
  std::sort(rays.begin(), rays.end(), lex_less);
  rays.erase(std::unique(rays.begin(), rays.end(), [](const Vector& a, const Vector& b) { return approx_equal(a, b, 1e-9); }),
             rays.end());

  std::vector<Vector> out;
  const double tight_tol = 1e-9;
  for (const auto& rho : rays) {
    std::vector<Vector> tight;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& n : normals) {
      const double s = std::abs(n.dot(rho));
      if (s <= tight_tol) tight.push_back(n);
      else nearest = std::min(nearest, s);
    }
    const double delta = std::isfinite(nearest) ? 0.25 * nearest : 0.5;
    const Matrix w = split_span({rho}, k).complement;  // k x (k-1)
    std::vector<Vector> local;
    for (const auto& n : tight) local.push_back(w.transpose() * n);
    for (const auto& u : central_cell_points(local, k - 1, tol)) {
      const Vector p = rho + delta * (w * u.normalized());
      out.push_back(p.normalized());
    }
  }
  return out;
}

struct CandidateSet {
  std::vector<Vector> directions;  // in tie-break priority order
};

inline CandidateSet candidate_directions(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z,
                                         double tol = tolerance()) {
  const Eigen::Index d = k_i.dim();
  const Centered c = center(x, z, tol);
  CandidateSet out;

  if (d == 2) {
    const Arc arc = planar_arc(k_i.generators(), tol);
    for (double t : arc_offsets(arc, c.diffs, tol)) out.directions.push_back(direction_at(arc.start + t));
    return out;
  }

  const SpanSplit split = split_span(k_i.generators(), d);
  const Eigen::Index r = split.rank();
  const Matrix& b = split.span;  // d x r
  std::vector<Vector> cands = k_i.generators();
  std::vector<Vector> gens_r, ys_r;
  for (const auto& g : k_i.generators()) gens_r.push_back(b.transpose() * g);
  for (const auto& y : c.diffs) {
    const Vector yr = b.transpose() * y;
    if (yr.norm() > tol * std::max(1.0, y.norm())) ys_r.push_back(yr);
  }

  if (r == 2) {
    const Arc arc = planar_arc(gens_r, tol);
    for (double t : arc_offsets(arc, ys_r, tol)) cands.push_back((b * direction_at(arc.start + t)).normalized());
  } else if (r >= 3) {
    const auto facets_r = facets_of(gens_r, r, tol);
    std::vector<Vector> normals = ys_r;
    normals.insert(normals.end(), facets_r.begin(), facets_r.end());
    for (const auto& u : central_cell_points(normals, r, tol)) {
      const bool inside = std::all_of(facets_r.begin(), facets_r.end(), [&](const Vector& f) { return f.dot(u) > tol; });
      if (inside) cands.push_back((b * u).normalized());
    }
  }
  std::sort(cands.begin(), cands.end(), lex_less);
  cands.erase(std::unique(cands.begin(), cands.end(), [](const Vector& p, const Vector& q) { return approx_equal(p, q, 1e-12); }),
              cands.end());
  out.directions = std::move(cands);
  return out;
}

inline void check_cone_query(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z) {
  if (k_i.is_trivial()) throw InvalidArgument("invalid importance cone: trivial cone {0}");
  check_dims(x, k_i.dim(), "cone");
  if (z.size() != k_i.dim()) throw InvalidArgument("dimension mismatch between query point and cone");
}

}  // namespace detail

/// (1/m) #{i : v^T x_i <= v^T z}.
inline Rank scalarized_cdf(const EvaluationMatrix& x, const Vector& v, const Vector& z) {
  detail::check_dims(x, v.size(), "direction");
  if (z.size() != v.size()) throw InvalidArgument("dimension mismatch between query point and direction");
  if (v.norm() == 0.0) throw InvalidArgument("zero direction");
  const auto c = detail::center(x, z);
  return {detail::weak_count(c, v.normalized()), x.alternatives()};
}

/// Directions sufficient to evaluate the infimum / supremum exactly: the
/// extreme rays of the cone plus one perturbed direction per open cell.
inline std::vector<Vector> critical_directions(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z) {
  detail::check_cone_query(x, k_i, z);
  return detail::candidate_directions(x, k_i, z).directions;
}

/// inf over v in K_I \ {0} of the scalarized CDF at z, with a minimizing
/// direction. Ties go to the first candidate (smallest angle from the first
/// extreme ray in the plane, lexicographically smallest otherwise).
inline RankedValue cone_distribution(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z) {
  detail::check_cone_query(x, k_i, z);
  const auto c = detail::center(x, z);
  const auto cands = detail::candidate_directions(x, k_i, z);
  RankedValue best{{x.alternatives() + 1, x.alternatives()}, {}};
  for (const auto& v : cands.directions) {
    const std::size_t n = detail::weak_count(c, v);
    if (n < best.rank.count) best = {{n, x.alternatives()}, {v, n}};
  }
  return best;
}

/// sup over v in K_I \ {0} of (1/m) #{i : v^T x_i < v^T z}. z lies in the
/// upper cone quantile of order p iff this is <= p.
inline RankedValue strict_exceedance_sup(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z) {
  detail::check_cone_query(x, k_i, z);
  const auto c = detail::center(x, z);
  const auto cands = detail::candidate_directions(x, k_i, z);
  RankedValue best{{0, x.alternatives()}, {}};
  bool first = true;
  for (const auto& v : cands.directions) {
    const std::size_t n = detail::strict_count(c, v);
    if (first || n > best.rank.count) best = {{n, x.alternatives()}, {v, n}};
    first = false;
  }
  return best;
}

/// Brute-force reference for planar cones: minimum of the scalarized CDF over
/// `resolution` directions spaced evenly in angle across the cone, endpoints
/// included.
inline Rank oracle_cone_distribution(const EvaluationMatrix& x, const ConvexCone& k_i, const Vector& z,
                                     int resolution) {
  if (k_i.dim() != 2) throw InvalidArgument("unsupported dimension: the grid oracle is planar only");
  if (resolution < 3) throw InvalidArgument("resolution must be at least 3");
  detail::check_cone_query(x, k_i, z);
  const detail::Arc arc = detail::planar_arc(k_i.generators());
  const auto c = detail::center(x, z);
  std::size_t best = x.alternatives();
  for (int i = 0; i < resolution; ++i) {
    const double angle = arc.start + arc.span * static_cast<double>(i) / static_cast<double>(resolution - 1);
    const double cs = std::cos(angle), sn = std::sin(angle);
    std::size_t n = c.coincident;
    for (std::size_t j = 0; j < c.diffs.size(); ++j)
      if (cs * c.diffs[j](0) + sn * c.diffs[j](1) <= c.slack[j]) ++n;
    best = std::min(best, n);
  }
  return {best, x.alternatives()};
}

}  // namespace conerank
