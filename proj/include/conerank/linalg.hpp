#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace conerank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Absolute tolerance used by membership, extremality and counting tests.
/// Defaults to 1e-9; the CONERANK_TOLERANCE environment variable overrides it.
inline double tolerance() {
  static const double eps = [] {
    if (const char* env = std::getenv("CONERANK_TOLERANCE")) {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end != env && std::isfinite(v) && v > 0.0) return v;
    }
    return 1e-9;
  }();
  return eps;
}

inline Vector unit(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize a zero vector");
  return v / n;
}

inline bool is_zero(const Vector& v, double tol = tolerance()) {
  return v.lpNorm<Eigen::Infinity>() <= tol;
}

inline bool approx_equal(const Vector& a, const Vector& b, double tol = tolerance()) {
  return a.size() == b.size() && (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

inline bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

inline Vector basis_vector(Eigen::Index dim, Eigen::Index i) {
  Vector e = Vector::Zero(dim);
  e(i) = 1.0;
  return e;
}

/// Stacks vectors as the columns of a dim x n matrix.
inline Matrix as_columns(const std::vector<Vector>& vs, Eigen::Index dim) {
  Matrix m(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

/// Orthonormal bases of the span of a set of vectors and of its orthogonal
/// complement, from one SVD.
struct SpanSplit {
  Matrix span;        // dim x rank
  Matrix complement;  // dim x (dim - rank)
  Eigen::Index rank() const { return span.cols(); }
};

inline SpanSplit split_span(const std::vector<Vector>& vs, Eigen::Index dim,
                            double tol = 1e-10) {
  SpanSplit out;
  if (vs.empty()) {
    out.span = Matrix(dim, 0);
    out.complement = Matrix::Identity(dim, dim);
    return out;
  }
  // Rows are the vectors; right singular vectors split R^dim.
  Matrix rows = as_columns(vs, dim).transpose();
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol * scale) ++r;
  out.span = svd.matrixV().leftCols(r);
  out.complement = svd.matrixV().rightCols(dim - r);
  return out;
}

/// Basis of the column space of `basis` that depends only on the subspace:
/// reduced row echelon form of its orthogonal projector.
inline Matrix canonical_basis(const Matrix& basis, double tol = 1e-9) {
  const Eigen::Index dim = basis.rows(), k = basis.cols();
  if (k == 0) return Matrix(dim, 0);
  Matrix m = basis * basis.transpose();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < dim && row < k; ++col) {
    Eigen::Index piv = row;
    for (Eigen::Index i = row + 1; i < dim; ++i)
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    if (std::abs(m(piv, col)) <= tol) continue;
    m.row(row).swap(m.row(piv));
    m.row(row) /= m(row, col);
    for (Eigen::Index i = 0; i < dim; ++i)
      if (i != row) m.row(i) -= m(i, col) * m.row(row);
    ++row;
  }
  return m.topRows(k).transpose();
}

/// Nonnegative least squares min ||A x - b|| s.t. x >= 0 (Lawson-Hanson
/// active set method).
inline Vector nnls(const Matrix& a, const Vector& b, double tol = 1e-12) {
  const Eigen::Index n = a.cols();
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Vector w = a.transpose() * (b - a * x);
  const int max_outer = static_cast<int>(3 * n + 10);

  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
      const Vector zp = ap.colPivHouseholderQr().solve(b);
      Vector z = Vector::Zero(n);
      for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));

      bool feasible = true;
      for (auto j : idx)
        if (z(j) <= tol) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (auto j : idx) {
        if (z(j) <= tol) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (auto j : idx) {
        if (x(j) <= tol) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

/// True when b is a nonnegative combination of the given columns.
inline bool in_conic_hull(const Vector& b, const std::vector<Vector>& columns,
                          double tol = tolerance()) {
  if (columns.empty()) return is_zero(b, tol);
  const Matrix a = as_columns(columns, b.size());
  const Vector x = nnls(a, b);
  return (a * x - b).norm() <= tol * std::max(1.0, b.norm());
}

/// Calls fn with every k-subset of {0,...,n-1}, in lexicographic order.
inline void for_each_combination(std::size_t n, std::size_t k,
                                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    fn(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

constexpr double kPi = 3.14159265358979323846;

/// Angle of a 2D vector in [0, 2*pi).
inline double angle_of(double x, double y) {
  double a = std::atan2(y, x);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

inline Vector direction_at(double angle) {
  Vector v(2);
  v << std::cos(angle), std::sin(angle);
  return v;
}

}  // namespace conerank
