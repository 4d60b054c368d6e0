#pragma once

#include "packlim/linalg.hpp"
#include "packlim/rational.hpp"

#include <cmath>

namespace packlim {

/// A rigid motion x -> xi + theta * x on R^n. The rotation part is expected
/// orthogonal: signed permutations in exact arithmetic, within 1e-9 of
/// orthogonal in floating arithmetic (see ORTHOGONALITY_TOL).
template <class S>
struct Motion {
  Mat<S> theta;
  Vec<S> xi;

  int dim() const { return theta.n; }
  bool operator==(const Motion&) const = default;

  /// sigma(x) = xi + theta x
  Vec<S> operator()(const Vec<S>& x) const {
    if (dim() != static_cast<int>(x.size()))
      throw std::invalid_argument("motion: dimension mismatch");
    return vadd(xi, matvec(theta, x));
  }

  static Motion identity(int n) { return {Mat<S>::identity(n), Vec<S>(n, S(0))}; }
};

inline constexpr double ORTHOGONALITY_TOL = 1e-9;

template <class S>
Vec<S> apply(const Motion<S>& m, const Vec<S>& x) {
  return m(x);
}

/// sigma then tau_outer: apply(compose(a,b), x) == apply(a, apply(b, x)).
template <class S>
Motion<S> compose(const Motion<S>& a, const Motion<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return {matmul(a.theta, b.theta), vadd(a.xi, matvec(a.theta, b.xi))};
}

/// Inverse (theta^-1, -theta^-1 xi); theta^-1 = theta^T for orthogonal theta.
template <class S>
Motion<S> invert(const Motion<S>& m) {
  Mat<S> ti = transpose(m.theta);
  Vec<S> xi = matvec(ti, m.xi);
  for (S& v : xi) v = -v;
  return {std::move(ti), std::move(xi)};
}

/// Squared distance (|theta'-theta|_F^2 + |xi'-xi|^2); exact for rational motions.
template <class S>
S distance_sq(const Motion<S>& a, const Motion<S>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("distance_sq: dimension mismatch");
  S s(0);
  for (size_t i = 0; i < a.theta.a.size(); ++i) {
    S d = a.theta.a[i] - b.theta.a[i];
    s += d * d;
  }
  for (size_t i = 0; i < a.xi.size(); ++i) {
    S d = a.xi[i] - b.xi[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Motion<double>& a, const Motion<double>& b) {
  return std::sqrt(distance_sq(a, b));
}
inline double distance(const Motion<Rat>& a, const Motion<Rat>& b) {
  return std::sqrt(to_double(distance_sq(a, b)));
}

/// n^{3/2} |y| + 1: how far a point at norm |y| can move per unit of motion distance.
inline double lipschitz_constant(double y_norm, int n) {
  if (y_norm < 0) throw std::invalid_argument("lipschitz_constant: negative norm");
  if (n < 1) throw std::invalid_argument("lipschitz_constant: dimension < 1");
  return std::pow(static_cast<double>(n), 1.5) * y_norm + 1.0;
}

/// Motion radius within which the image of a point at norm |y| moves by < epsilon.
inline double delta_for_point(double epsilon, double y_norm, int n) {
  if (epsilon <= 0) throw std::invalid_argument("delta_for_point: epsilon must be positive");
  return epsilon / lipschitz_constant(y_norm, n);
}

/// Orthogonal polar factor of a nonsingular matrix (nearest orthogonal matrix
/// in Frobenius norm). Newton iteration X <- (X + X^-T)/2; idempotent on
/// orthogonal input. Throws on singular input.
Mat<double> project_to_orthogonal(const Mat<double>& m);

/// Nearest signed permutation matrix in Frobenius norm (the exact-arithmetic
/// counterpart of the polar projection; exhaustive over assignments, n <= 8).
Mat<Rat> nearest_signed_permutation(const Mat<Rat>& m);

double max_orthogonality_defect(const Mat<double>& theta);

template <class S>
S det3(const Mat<S>& m); // determinant for n <= 3

} // namespace packlim
