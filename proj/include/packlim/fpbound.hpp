#pragma once

#include "packlim/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace packlim {

enum class Trit { yes, no, unknown };

/// Double with a certified absolute error radius. Sums and products track the
/// exact IEEE rounding residual (TwoSum / fma), so computations that happen to
/// be exact in double arithmetic keep a radius of zero and zero margins can be
/// certified. Radius accumulation itself is inflated to stay conservative.
struct FpBound {
  double v = 0;
  double r = 0;

  FpBound() = default;
  explicit FpBound(double value, double radius = 0) : v(value), r(radius) {}
};

namespace detail {
inline double up(double x) { return x == 0 ? 0 : x * (1.0 + 0x1p-48); }
inline double two_sum_err(double a, double b, double s) {
  double bp = s - a;
  double ap = s - bp;
  return (b - bp) + (a - ap);
}
} // namespace detail

inline FpBound operator+(FpBound a, FpBound b) {
  double s = a.v + b.v;
  double err = detail::two_sum_err(a.v, b.v, s);
  return FpBound(s, detail::up(a.r + b.r + std::abs(err)));
}

inline FpBound operator-(FpBound a) { return FpBound(-a.v, a.r); }
inline FpBound operator-(FpBound a, FpBound b) { return a + (-b); }

inline FpBound operator*(FpBound a, FpBound b) {
  double p = a.v * b.v;
  double err = std::fma(a.v, b.v, -p);
  double rad = std::abs(a.v) * b.r + std::abs(b.v) * a.r + a.r * b.r + std::abs(err);
  return FpBound(p, detail::up(rad));
}

inline FpBound fp_abs(FpBound a) { return FpBound(std::abs(a.v), a.r); }

inline Trit certified_nonneg(const FpBound& x) {
  if (x.v - x.r >= 0) return Trit::yes;
  if (x.v + x.r < 0) return Trit::no;
  return Trit::unknown;
}

inline Trit certified_pos(const FpBound& x) {
  if (x.v - x.r > 0) return Trit::yes;
  if (x.v + x.r <= 0) return Trit::no;
  return Trit::unknown;
}

// --- the exact counterparts, so margin kernels can be written generically ---

inline Trit certified_nonneg(const Rat& x) { return x >= 0 ? Trit::yes : Trit::no; }
inline Trit certified_pos(const Rat& x) { return x > 0 ? Trit::yes : Trit::no; }

inline Rat fp_abs(const Rat& x) { return abs(x); }

/// Certified scalar for a motion-scalar type: exact stays exact, floating
/// carries an error radius.
template <class S>
struct certified_of;
template <>
struct certified_of<Rat> {
  using type = Rat;
};
template <>
struct certified_of<double> {
  using type = FpBound;
};
template <class S>
using certified_t = typename certified_of<S>::type;

inline Rat certified_from_rat(const Rat& q, const Rat*) { return q; }
inline FpBound certified_from_rat(const Rat& q, const FpBound*) {
  double v = to_double(q);
  Rat err = abs(q - rat_of_double(v));
  if (err == 0) return FpBound(v);
  double r = to_double(err);
  if (r == 0) r = std::numeric_limits<double>::denorm_min();
  return FpBound(v, detail::up(r));
}
template <class C>
C certified_from_rat(const Rat& q) {
  return certified_from_rat(q, static_cast<const C*>(nullptr));
}

inline Rat certified_from_scalar(const Rat& s, const Rat*) { return s; }
inline FpBound certified_from_scalar(double s, const FpBound*) { return FpBound(s); }
template <class C, class S>
C certified_from_scalar(const S& s) {
  return certified_from_scalar(s, static_cast<const C*>(nullptr));
}

inline double approx_value(const Rat& x) { return to_double(x); }
inline double approx_value(const FpBound& x) { return x.v; }

inline double radius_of(const Rat&) { return 0; }
inline double radius_of(const FpBound& x) { return x.r; }

// min(x, 0) and max(x, 0); both 1-Lipschitz, so radii carry over unchanged.
inline Rat clamp_nonpos(const Rat& x) { return x < 0 ? x : Rat(0); }
inline Rat clamp_nonneg(const Rat& x) { return x > 0 ? x : Rat(0); }
inline FpBound clamp_nonpos(const FpBound& x) { return FpBound(std::min(x.v, 0.0), x.r); }
inline FpBound clamp_nonneg(const FpBound& x) { return FpBound(std::max(x.v, 0.0), x.r); }

inline Rat cert_max(const Rat& a, const Rat& b) { return a > b ? a : b; }
inline FpBound cert_max(const FpBound& a, const FpBound& b) {
  return FpBound(std::max(a.v, b.v), std::max(a.r, b.r));
}

} // namespace packlim
