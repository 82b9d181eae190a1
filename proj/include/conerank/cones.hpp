#pragma once

// Polyhedral convex cones held in both representations: a canonical list of
// extreme rays (generators) and a list of inward facet normals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <vector>

#include "conerank/linalg.hpp"

namespace conerank {

/// The closed homogeneous halfspace {z : normal^T z >= 0}.
struct Halfspace {
  Vector normal;
  bool contains(const Vector& z, double tol = tolerance()) const {
    return normal.dot(z) >= -tol * std::max(1.0, z.norm()) * normal.norm();
  }
};

namespace detail {

inline void canonicalize(std::vector<Vector>& rays) {
  std::sort(rays.begin(), rays.end(), lex_less);
}

/// Unit-normalizes, drops positive duplicates, then removes every vector that
/// is a nonnegative combination of the remaining ones.
inline std::vector<Vector> reduce_rays(const std::vector<Vector>& input, double tol = tolerance()) {
  std::vector<Vector> rays;
  for (const auto& v : input) {
    const Vector u = unit(v);
    const bool dup = std::any_of(rays.begin(), rays.end(),
                                 [&](const Vector& r) { return approx_equal(r, u, 1e3 * tol); });
    if (!dup) rays.push_back(u);
  }
  canonicalize(rays);
  for (std::size_t i = rays.size(); i-- > 0;) {
    std::vector<Vector> others;
    others.reserve(rays.size() - 1);
    for (std::size_t j = 0; j < rays.size(); ++j)
      if (j != i) others.push_back(rays[j]);
    if (!others.empty() && in_conic_hull(rays[i], others, 1e3 * tol)) rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return rays;
}

inline std::vector<Vector> orthant_pair_normals(Eigen::Index dim) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < dim; ++i) {
    out.push_back(basis_vector(dim, i));
    out.push_back(-basis_vector(dim, i));
  }
  canonicalize(out);
  return out;
}

inline Vector rotate_ccw(const Vector& v) {
  Vector r(2);
  r << -v(1), v(0);
  return r;
}

inline Vector rotate_cw(const Vector& v) {
  Vector r(2);
  r << v(1), -v(0);
  return r;
}

/// Angular arc swept by a planar cone: directions start + t, t in [0, span].
/// span is 0 for a ray, < pi for a pointed wedge, pi for a halfplane and
/// 2 pi for the whole plane.
struct Arc {
  double start = 0.0;
  double span = 0.0;
};

inline Arc planar_arc(const std::vector<Vector>& generators, double tol = tolerance()) {
  std::vector<double> angles;
  for (const auto& g : generators) angles.push_back(angle_of(g(0), g(1)));
  std::sort(angles.begin(), angles.end());
  if (angles.size() == 1) return {angles[0], 0.0};
  double max_gap = -1.0;
  std::size_t after = 0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double next = i + 1 < angles.size() ? angles[i + 1] : angles[0] + 2.0 * kPi;
    const double gap = next - angles[i];
    if (gap > max_gap) {
      max_gap = gap;
      after = (i + 1) % angles.size();
    }
  }
  if (max_gap < kPi - 1e3 * tol) return {angles[0], 2.0 * kPi};
  return {angles[after], 2.0 * kPi - max_gap};
}

/// Inward facet normals of cone(generators); generic supporting-hyperplane
/// enumeration over (r-1)-subsets of generators within their span.
inline std::vector<Vector> facets_generic(const std::vector<Vector>& gens, Eigen::Index dim,
                                          double tol = tolerance()) {
  if (gens.empty()) return orthant_pair_normals(dim);
  SpanSplit split = split_span(gens, dim);
  split.complement = canonical_basis(split.complement);
  const Eigen::Index r = split.rank();
  std::vector<Vector> normals;
  for (Eigen::Index k = 0; k < split.complement.cols(); ++k) {
    normals.push_back(split.complement.col(k));
    normals.push_back(-split.complement.col(k));
  }
  const double slack = 1e3 * tol;
  for_each_combination(gens.size(), static_cast<std::size_t>(r - 1), [&](const std::vector<std::size_t>& idx) {
    std::vector<Vector> rows;
    for (auto i : idx) rows.push_back(gens[i]);
    for (Eigen::Index k = 0; k < split.complement.cols(); ++k) rows.push_back(split.complement.col(k));
    const SpanSplit local = split_span(rows, dim);
    if (local.complement.cols() != 1) return;
    const Vector n = local.complement.col(0);
    bool all_pos = true, all_neg = true;
    for (const auto& g : gens) {
      const double s = n.dot(g);
      if (s < -slack) all_pos = false;
      if (s > slack) all_neg = false;
    }
    if (all_pos) normals.push_back(n);
    else if (all_neg) normals.push_back(-n);
  });
  if (normals.empty()) return normals;
  return reduce_rays(normals, tol);
}

/// Facet normals; planar pointed wedges use the rotation fast path.
inline std::vector<Vector> facets_of(const std::vector<Vector>& gens, Eigen::Index dim,
                                     double tol = tolerance()) {
  if (dim == 2 && gens.size() >= 2) {
    const Arc arc = planar_arc(gens, tol);
    if (arc.span > 1e3 * tol && arc.span < kPi - 1e3 * tol) {
      std::vector<Vector> normals{rotate_ccw(direction_at(arc.start)),
                                  rotate_cw(direction_at(arc.start + arc.span))};
      canonicalize(normals);
      return normals;
    }
  }
  return facets_generic(gens, dim, tol);
}

}  // namespace detail

class ConvexCone {
 public:
  ConvexCone() = default;

  Eigen::Index dim() const { return dim_; }
  const std::vector<Vector>& generators() const { return generators_; }
  const std::vector<Vector>& facet_normals() const { return facet_normals_; }

  bool is_trivial() const { return generators_.empty(); }
  bool is_whole_space() const { return facet_normals_.empty(); }

  /// {0}: no generators; facet normals +-e_i.
  static ConvexCone trivial(Eigen::Index dim) {
    return ConvexCone(dim, {}, detail::orthant_pair_normals(dim));
  }

  static ConvexCone whole_space(Eigen::Index dim) {
    return ConvexCone(dim, detail::orthant_pair_normals(dim), {});
  }

  static ConvexCone nonnegative_orthant(Eigen::Index dim) {
    std::vector<Vector> e;
    for (Eigen::Index i = 0; i < dim; ++i) e.push_back(basis_vector(dim, i));
    detail::canonicalize(e);
    return ConvexCone(dim, e, e);
  }

  /// Cone {z : u^T z >= 0 for all u in normals}.
  static ConvexCone from_facets(const std::vector<Vector>& normals, Eigen::Index dim);

  static ConvexCone from_generators(const std::vector<Vector>& vectors, Eigen::Index dim) {
    for (const auto& v : vectors) {
      if (v.size() != dim) throw InvalidArgument("generator has wrong dimension");
      if (!v.allFinite()) throw InvalidArgument("generator has non-finite entries");
      if (v.norm() == 0.0) throw InvalidArgument("zero generator");
    }
    auto gens = detail::reduce_rays(vectors);
    auto facets = detail::facets_of(gens, dim);
    return ConvexCone(dim, std::move(gens), std::move(facets));
  }

  friend ConvexCone dual_cone(const ConvexCone& c);

  friend bool operator==(const ConvexCone& a, const ConvexCone& b) {
    auto same = [](const std::vector<Vector>& x, const std::vector<Vector>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (!approx_equal(x[i], y[i], 1e-7)) return false;
      return true;
    };
    return a.dim_ == b.dim_ && same(a.generators_, b.generators_) && same(a.facet_normals_, b.facet_normals_);
  }

 private:
  ConvexCone(Eigen::Index dim, std::vector<Vector> gens, std::vector<Vector> facets)
      : dim_(dim), generators_(std::move(gens)), facet_normals_(std::move(facets)) {}

  Eigen::Index dim_ = 0;
  std::vector<Vector> generators_;
  std::vector<Vector> facet_normals_;
};

inline std::ostream& operator<<(std::ostream& os, const ConvexCone& c) {
  auto list = [&](const char* name, const std::vector<Vector>& rays) {
    os << name << "[";
    for (std::size_t i = 0; i < rays.size(); ++i) {
      os << (i ? " (" : "(");
      for (Eigen::Index k = 0; k < rays[i].size(); ++k) os << (k ? "," : "") << rays[i](k);
      os << ")";
    }
    os << "]";
  };
  list("gens", c.generators());
  list(" facets", c.facet_normals());
  return os;
}

/// Conic hull of nonzero vectors, reduced to unit extreme rays in
/// lexicographic order.
inline ConvexCone conic_hull(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw InvalidArgument("conic hull of an empty set");
  const Eigen::Index dim = vectors.front().size();
  if (dim == 0) throw InvalidArgument("zero-dimensional vectors");
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InvalidArgument("vectors have different dimensions");
    if (v.norm() == 0.0) throw InvalidArgument("zero vector in conic hull");
  }
  return ConvexCone::from_generators(vectors, dim);
}

/// {w : z^T w >= 0 for all z in c}. Generators and facet normals swap roles.
inline ConvexCone dual_cone(const ConvexCone& c) {
  auto gens = c.facet_normals_.empty() ? std::vector<Vector>{} : detail::reduce_rays(c.facet_normals_);
  return ConvexCone(c.dim_, std::move(gens), c.generators_);
}

inline ConvexCone ConvexCone::from_facets(const std::vector<Vector>& normals, Eigen::Index dim) {
  if (normals.empty()) return whole_space(dim);
  return dual_cone(from_generators(normals, dim));
}

inline bool contains(const ConvexCone& c, const Vector& z, double tol = tolerance()) {
  if (z.size() != c.dim()) throw InvalidArgument("dimension mismatch in cone membership");
  const double slack = tol * std::max(1.0, z.norm());
  return std::all_of(c.facet_normals().begin(), c.facet_normals().end(),
                     [&](const Vector& u) { return u.dot(z) >= -slack; });
}

/// x <=_K y  iff  y - x in K.
inline bool leq_cone(const Vector& x, const Vector& y, const ConvexCone& k) {
  if (x.size() != y.size()) throw InvalidArgument("dimension mismatch in cone order");
  return contains(k, y - x);
}

/// Set inclusion tested on generators.
inline bool is_subcone(const ConvexCone& inner, const ConvexCone& outer, double tol = tolerance()) {
  return std::all_of(inner.generators().begin(), inner.generators().end(),
                     [&](const Vector& g) { return contains(outer, g, 1e3 * tol); });
}

inline bool same_set(const ConvexCone& a, const ConvexCone& b) {
  return a.dim() == b.dim() && is_subcone(a, b) && is_subcone(b, a);
}

/// {0} != K, K inside the nonnegative orthant.
inline bool validate_importance_cone(const ConvexCone& c, double tol = tolerance()) {
  if (c.is_trivial()) return false;
  return std::all_of(c.generators().begin(), c.generators().end(),
                     [&](const Vector& g) { return g.minCoeff() >= -tol; });
}

/// Nonnegative orthant inside K, K != R^d.
inline bool validate_acceptance_cone(const ConvexCone& c) {
  if (c.is_whole_space()) return false;
  for (Eigen::Index i = 0; i < c.dim(); ++i)
    if (!contains(c, basis_vector(c.dim(), i))) return false;
  return true;
}

/// Image of the cone under an invertible linear map.
inline ConvexCone linear_image(const Matrix& a, const ConvexCone& c) {
  if (c.is_trivial()) return ConvexCone::trivial(c.dim());
  std::vector<Vector> gens;
  for (const auto& g : c.generators()) gens.push_back(a * g);
  return ConvexCone::from_generators(gens, c.dim());
}

}  // namespace conerank
