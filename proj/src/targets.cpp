#include "packlim/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace packlim {

int Target::dim() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BrickShape>) return static_cast<int>(s.dims.size());
        if constexpr (std::is_same_v<T, BallShape>) return s.dim;
        if constexpr (std::is_same_v<T, HomothetShape>) return s.base->dim();
        return 2; // funnel
      },
      shape);
}

bool Target::bounded() const {
  return std::visit(
      [](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HomothetShape>) return s.base->bounded();
        return !std::is_same_v<T, FunnelShape>;
      },
      shape);
}

Target brick_target(std::vector<Rat> dims) {
  if (dims.empty()) throw std::invalid_argument("brick_target: empty dims");
  for (const Rat& d : dims)
    if (d <= 0) throw std::invalid_argument("brick_target: extents must be positive");
  return {BrickShape{std::move(dims)}};
}

Target ball_target(int dim, Rat radius) {
  if (dim < 1) throw std::invalid_argument("ball_target: dim >= 1");
  if (radius <= 0) throw std::invalid_argument("ball_target: radius must be positive");
  return {BallShape{dim, std::move(radius)}};
}

Target homothet_target(Target base, Rat lambda) {
  if (lambda <= 0) throw std::invalid_argument("homothet_target: lambda must be positive");
  return {HomothetShape{std::make_shared<Target>(std::move(base)), std::move(lambda)}};
}

Target funnel_target() { return {FunnelShape{}}; }

bool target_equal(const Target& a, const Target& b) {
  if (a.shape.index() != b.shape.index()) return false;
  if (const auto* x = std::get_if<BrickShape>(&a.shape))
    return x->dims == std::get<BrickShape>(b.shape).dims;
  if (const auto* x = std::get_if<BallShape>(&a.shape)) {
    const auto& y = std::get<BallShape>(b.shape);
    return x->dim == y.dim && x->radius == y.radius;
  }
  if (const auto* x = std::get_if<HomothetShape>(&a.shape)) {
    const auto& y = std::get<HomothetShape>(b.shape);
    return x->lambda == y.lambda && target_equal(*x->base, *y.base);
  }
  return true; // funnel
}

ResolvedTarget resolve(const Target& t) {
  if (const auto* s = std::get_if<BrickShape>(&t.shape)) {
    ResolvedTarget r;
    r.kind = ResolvedTarget::Kind::brick;
    r.dim = static_cast<int>(s->dims.size());
    r.dims = s->dims;
    return r;
  }
  if (const auto* s = std::get_if<BallShape>(&t.shape)) {
    ResolvedTarget r;
    r.kind = ResolvedTarget::Kind::ball;
    r.dim = s->dim;
    r.radius = s->radius;
    return r;
  }
  if (const auto* s = std::get_if<HomothetShape>(&t.shape))
    return scale_resolved(resolve(*s->base), s->lambda);
  ResolvedTarget r;
  r.kind = ResolvedTarget::Kind::funnel;
  r.dim = 2;
  r.scale = 1;
  return r;
}

ResolvedTarget scale_resolved(ResolvedTarget r, const Rat& lambda) {
  switch (r.kind) {
    case ResolvedTarget::Kind::brick:
      for (Rat& d : r.dims) d *= lambda;
      break;
    case ResolvedTarget::Kind::ball:
      r.radius *= lambda;
      break;
    case ResolvedTarget::Kind::funnel:
      r.scale *= lambda;
      break;
  }
  return r;
}

namespace {

void check_dim(const ResolvedTarget& r, size_t n) {
  if (r.dim != static_cast<int>(n)) throw std::invalid_argument("target: dimension mismatch");
}

bool membership_resolved(const ResolvedTarget& r, const std::vector<Rat>& x) {
  check_dim(r, x.size());
  switch (r.kind) {
    case ResolvedTarget::Kind::brick:
      for (size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0 || x[i] > r.dims[i]) return false;
      return true;
    case ResolvedTarget::Kind::ball: {
      Rat s(0);
      for (const Rat& v : x) s += v * v;
      return s <= r.radius * r.radius;
    }
    case ResolvedTarget::Kind::funnel: {
      // x >= s and |y| <= s - s^2/x, cleared of the division: |y| x <= s x - s^2.
      const Rat& s = r.scale;
      if (x[0] < s) return false;
      return abs(x[1]) * x[0] <= s * x[0] - s * s;
    }
  }
  return false;
}

} // namespace

bool membership(const Target& t, const std::vector<Rat>& x) {
  return membership_resolved(resolve(t), x);
}

bool membership(const Target& t, const std::vector<double>& x) {
  std::vector<Rat> rx;
  rx.reserve(x.size());
  for (double v : x) rx.push_back(rat_of_double(v));
  return membership(t, rx);
}

ClearanceResult clearance_resolved(const ResolvedTarget& r, const std::vector<double>& x) {
  check_dim(r, x.size());
  switch (r.kind) {
    case ResolvedTarget::Kind::brick: {
      double s = 0;
      bool inside = true;
      for (size_t i = 0; i < x.size(); ++i) {
        double lo = -x[i];
        double hi = x[i] - to_double(r.dims[i]);
        double d = std::max({lo, hi, 0.0});
        if (d > 0) inside = false;
        s += d * d;
      }
      return {inside ? 0 : std::sqrt(s), inside};
    }
    case ResolvedTarget::Kind::ball: {
      double n = std::sqrt(norm_sq(x));
      double d = n - to_double(r.radius);
      return {std::max(d, 0.0), d <= 0};
    }
    case ResolvedTarget::Kind::funnel: {
      double s = to_double(r.scale);
      double px = x[0], py = std::abs(x[1]);
      auto width = [&](double t) { return s - s * s / t; };
      if (px >= s && py <= width(px)) return {0, true};
      // Distance to the slice [-(s - s^2/t), s - s^2/t] at abscissa t >= s,
      // minimized over t; the region is convex so this is a convex profile.
      auto f = [&](double t) {
        double dy = std::max(0.0, py - width(t));
        double dx = px - t;
        return dx * dx + dy * dy;
      };
      double lo = s, hi = std::max(s + 1.0, px + py + 1.0);
      for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3;
        double m2 = hi - (hi - lo) / 3;
        if (f(m1) <= f(m2))
          hi = m2;
        else
          lo = m1;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
      }
      return {std::sqrt(f((lo + hi) / 2)), false};
    }
  }
  return {0, false};
}

ClearanceResult clearance(const Target& t, const std::vector<double>& x) {
  return clearance_resolved(resolve(t), x);
}

ExclusionIndex homothet_exclusion_index(const Target& t, const std::vector<double>& x) {
  if (!t.bounded()) throw std::domain_error("homothet_exclusion_index: unbounded target");
  ClearanceResult c = clearance(t, x);
  if (c.inside) throw std::domain_error("homothet_exclusion_index: point inside target");
  double xn = std::sqrt(norm_sq(x));
  int k = static_cast<int>(std::floor(2.0 * xn / c.value)) + 1;
  return {k, c.value};
}

bool exclusion_holds(const Target& t, const std::vector<double>& x, double eps, long long j) {
  ResolvedTarget r = scale_resolved(resolve(t), Rat(BigInt(j + 1), BigInt(j)));
  ClearanceResult c = clearance_resolved(r, x);
  if (c.inside) return false;
  return c.value >= eps / 2;
}

bool has_finite_volume(const Target& t) { return t.bounded(); }

std::optional<Rat> exact_volume(const Target& t) {
  ResolvedTarget r = resolve(t);
  if (r.kind != ResolvedTarget::Kind::brick) return std::nullopt;
  Rat v(1);
  for (const Rat& d : r.dims) v *= d;
  return v;
}

double approx_volume(const Target& t) {
  ResolvedTarget r = resolve(t);
  switch (r.kind) {
    case ResolvedTarget::Kind::brick: {
      double v = 1;
      for (const Rat& d : r.dims) v *= to_double(d);
      return v;
    }
    case ResolvedTarget::Kind::ball: {
      double rr = to_double(r.radius);
      double n = r.dim;
      return std::pow(std::numbers::pi, n / 2) * std::pow(rr, n) / std::tgamma(n / 2 + 1);
    }
    case ResolvedTarget::Kind::funnel:
      throw std::domain_error("approx_volume: funnel has infinite volume");
  }
  return 0;
}

Box bounding_box(const Target& t) {
  if (!t.bounded()) throw std::domain_error("bounding_box: unbounded target");
  ResolvedTarget r = resolve(t);
  Box b;
  b.lo.assign(r.dim, Rat(0));
  b.hi.assign(r.dim, Rat(0));
  if (r.kind == ResolvedTarget::Kind::brick) {
    b.hi = r.dims;
  } else { // ball
    for (int i = 0; i < r.dim; ++i) {
      b.lo[i] = -r.radius;
      b.hi[i] = r.radius;
    }
  }
  return b;
}

namespace {

// Interval hull of sigma(piece) per coordinate, for axis-aligned images
// (theta a signed permutation). Image interval m: xi_m + [min,max] of
// theta(m,k) * d_k over the box.
template <class C, class S>
void image_intervals(const Motion<S>& sigma, const Piece& piece, std::vector<C>& lo,
                     std::vector<C>& hi) {
  int n = sigma.dim();
  lo.assign(n, C(0));
  hi.assign(n, C(0));
  for (int m = 0; m < n; ++m) {
    C a = certified_from_scalar<C>(sigma.xi[m]);
    C b = a;
    for (int k = 0; k < n; ++k) {
      C c = certified_from_scalar<C>(sigma.theta(m, k)) * certified_from_rat<C>(piece.dims[k]);
      a = a + clamp_nonpos(c);
      b = b + clamp_nonneg(c);
    }
    lo[m] = a;
    hi[m] = b;
  }
}

template <class C>
void fold_margin(Trit& ok, double& margin, double& radius, const C& m) {
  Trit t = certified_nonneg(m);
  if (t == Trit::no)
    ok = Trit::no;
  else if (t == Trit::unknown && ok == Trit::yes)
    ok = Trit::unknown;
  margin = std::min(margin, approx_value(m));
  radius = std::max(radius, radius_of(m));
}

// Membership margins of one point; all must be >= 0.
template <class C>
void point_margins(const ResolvedTarget& r, const std::vector<C>& x, Trit& ok, double& margin,
                   double& radius) {
  switch (r.kind) {
    case ResolvedTarget::Kind::brick:
      for (int i = 0; i < r.dim; ++i) {
        fold_margin(ok, margin, radius, x[i]);
        fold_margin(ok, margin, radius, certified_from_rat<C>(r.dims[i]) - x[i]);
      }
      break;
    case ResolvedTarget::Kind::ball: {
      C s = certified_from_rat<C>(r.radius * r.radius);
      for (const C& v : x) s = s - v * v;
      fold_margin(ok, margin, radius, s);
      break;
    }
    case ResolvedTarget::Kind::funnel: {
      C s = certified_from_rat<C>(r.scale);
      fold_margin(ok, margin, radius, x[0] - s);
      fold_margin(ok, margin, radius, s * x[0] - s * s - fp_abs(x[1]) * x[0]);
      break;
    }
  }
}

} // namespace

template <class S>
CheckResult<S> contains_piece(const Target& t, const Motion<S>& sigma, const Piece& piece) {
  using C = certified_t<S>;
  ResolvedTarget r = resolve(t);
  int n = sigma.dim();
  if (piece.dim() != n || r.dim != n)
    throw std::invalid_argument("contains_piece: dimension mismatch");

  CheckResult<S> res;
  res.ok = Trit::yes;
  res.margin = std::numeric_limits<double>::infinity();

  bool axis_aligned = is_signed_permutation(sigma.theta);
  if (axis_aligned && r.kind != ResolvedTarget::Kind::funnel) {
    std::vector<C> lo, hi;
    image_intervals<C>(sigma, piece, lo, hi);
    if (r.kind == ResolvedTarget::Kind::brick) {
      if constexpr (std::is_same_v<S, Rat>) {
        // verdict by comparison (no gcd-normalizing subtractions)
        for (int i = 0; i < n; ++i) {
          if (lo[i] < 0 || hi[i] > r.dims[i]) res.ok = Trit::no;
          res.margin = std::min({res.margin, to_double(lo[i]),
                                 to_double(r.dims[i]) - to_double(hi[i])});
        }
        return res;
      }
      for (int i = 0; i < n; ++i) {
        fold_margin(res.ok, res.margin, res.radius, lo[i]);
        fold_margin(res.ok, res.margin, res.radius, certified_from_rat<C>(r.dims[i]) - hi[i]);
      }
    } else { // ball: farthest corner of the interval hull
      C s = certified_from_rat<C>(r.radius * r.radius);
      for (int i = 0; i < n; ++i) {
        C m = cert_max(fp_abs(lo[i]), fp_abs(hi[i]));
        s = s - m * m;
      }
      fold_margin(res.ok, res.margin, res.radius, s);
    }
    return res;
  }

  if (n > 3) throw std::domain_error("contains_piece: rotated pieces unsupported for n > 3");

  // Enumerate the 2^n image vertices.
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<C> v(n);
    for (int m = 0; m < n; ++m) {
      C acc = certified_from_scalar<C>(sigma.xi[m]);
      for (int k = 0; k < n; ++k)
        if (mask & (1u << k))
          acc = acc +
                certified_from_scalar<C>(sigma.theta(m, k)) * certified_from_rat<C>(piece.dims[k]);
      v[m] = acc;
    }
    point_margins(r, v, res.ok, res.margin, res.radius);
  }
  return res;
}

template CheckResult<Rat> contains_piece<Rat>(const Target&, const Motion<Rat>&, const Piece&);
template CheckResult<double> contains_piece<double>(const Target&, const Motion<double>&,
                                                    const Piece&);

} // namespace packlim
