#include "packlim/motion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace packlim {

namespace {

// Gaussian elimination with partial pivoting; throws on (near-)singular input.
Mat<double> inverse(const Mat<double>& m) {
  int n = m.n;
  Mat<double> a = m;
  Mat<double> inv = Mat<double>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) throw std::domain_error("singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    double d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

} // namespace

Mat<double> project_to_orthogonal(const Mat<double>& m) {
  Mat<double> x = m;
  for (int iter = 0; iter < 100; ++iter) {
    Mat<double> xit = transpose(inverse(x));
    double diff = 0;
    for (size_t i = 0; i < x.a.size(); ++i) {
      double next = 0.5 * (x.a[i] + xit.a[i]);
      diff = std::max(diff, std::abs(next - x.a[i]));
      x.a[i] = next;
    }
    if (diff < 1e-15) break;
  }
  return x;
}

double max_orthogonality_defect(const Mat<double>& theta) {
  Mat<double> g = matmul(transpose(theta), theta);
  double worst = 0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

Mat<Rat> nearest_signed_permutation(const Mat<Rat>& m) {
  int n = m.n;
  if (n > 8) throw std::domain_error("nearest_signed_permutation: n > 8 unsupported");
  // Maximize sum_i |m(i, p(i))| over permutations p; pick the sign of each entry.
  std::vector<int> perm(n), best(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rat best_score(-1);
  do {
    Rat score(0);
    for (int i = 0; i < n; ++i) score += abs(m(i, perm[i]));
    if (score > best_score) {
      best_score = score;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Mat<Rat> r(n);
  for (int i = 0; i < n; ++i) r(i, best[i]) = m(i, best[i]) < 0 ? Rat(-1) : Rat(1);
  return r;
}

template <class S>
S det3(const Mat<S>& m) {
  switch (m.n) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      throw std::domain_error("det3: n > 3");
  }
}

template Rat det3<Rat>(const Mat<Rat>&);
template double det3<double>(const Mat<double>&);

} // namespace packlim
