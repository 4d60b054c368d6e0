#pragma once

#include <stdexcept>
#include <vector>

namespace packlim {

template <class S>
using Vec = std::vector<S>;

/// Dense square matrix, row-major.
template <class S>
struct Mat {
  int n = 0;
  std::vector<S> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, S(0)) {}

  S& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

  bool operator==(const Mat& o) const = default;

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = S(1);
    return m;
  }
};

template <class S>
Mat<S> transpose(const Mat<S>& m) {
  Mat<S> t(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) t(j, i) = m(i, j);
  return t;
}

template <class S>
Mat<S> matmul(const Mat<S>& x, const Mat<S>& y) {
  if (x.n != y.n) throw std::invalid_argument("matmul: dimension mismatch");
  Mat<S> r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const S& v = x(i, k);
      if (v == S(0)) continue;
      for (int j = 0; j < x.n; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

template <class S>
Vec<S> matvec(const Mat<S>& m, const Vec<S>& x) {
  if (m.n != static_cast<int>(x.size())) throw std::invalid_argument("matvec: dimension mismatch");
  Vec<S> r(x.size(), S(0));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[i] += m(i, j) * x[j];
  return r;
}

template <class S>
Vec<S> vadd(const Vec<S>& x, const Vec<S>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vadd: dimension mismatch");
  Vec<S> r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

template <class S>
Vec<S> vsub(const Vec<S>& x, const Vec<S>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vsub: dimension mismatch");
  Vec<S> r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

template <class S>
S norm_sq(const Vec<S>& x) {
  S s(0);
  for (const S& v : x) s += v * v;
  return s;
}

template <class S>
S frobenius_sq(const Mat<S>& m) {
  S s(0);
  for (const S& v : m.a) s += v * v;
  return s;
}

/// True iff every row and column has exactly one entry of value +-1 and zeros elsewhere.
template <class S>
bool is_signed_permutation(const Mat<S>& m) {
  std::vector<int> col_used(m.n, 0);
  for (int i = 0; i < m.n; ++i) {
    int hits = 0;
    for (int j = 0; j < m.n; ++j) {
      const S& v = m(i, j);
      if (v == S(0)) continue;
      if (v != S(1) && v != S(-1)) return false;
      ++hits;
      if (++col_used[j] > 1) return false;
    }
    if (hits != 1) return false;
  }
  return true;
}

/// Determinant of a signed permutation matrix: permutation parity times the
/// product of the entry signs. Precondition: is_signed_permutation(m).
template <class S>
int signed_permutation_det(const Mat<S>& m) {
  std::vector<int> perm(m.n);
  int sign = 1;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m(i, j) != S(0)) {
        perm[i] = j;
        if (m(i, j) == S(-1)) sign = -sign;
      }
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      if (perm[i] > perm[j]) sign = -sign;
  return sign;
}

template <class S>
bool is_identity(const Mat<S>& m) {
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m(i, j) != (i == j ? S(1) : S(0))) return false;
  return true;
}

} // namespace packlim
