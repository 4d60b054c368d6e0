#include "packlim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>
#include <stdexcept>

namespace packlim {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::general: return "general";
    case Mode::oriented: return "oriented";
    case Mode::translated: return "translated";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid: return "invalid";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

// Projection interval of sigma(piece) onto an axis: a . xi + sum over k of
// the clamped contributions of (a^T theta)_k * d_k.
template <class C, class S>
void project_onto_axis(const std::vector<C>& axis, const Motion<S>& sigma, const Piece& piece,
                       C& lo, C& hi) {
  int n = sigma.dim();
  C base(0);
  for (int m = 0; m < n; ++m) base = base + axis[m] * certified_from_scalar<C>(sigma.xi[m]);
  lo = base;
  hi = base;
  for (int k = 0; k < n; ++k) {
    C dir(0);
    for (int m = 0; m < n; ++m)
      dir = dir + axis[m] * certified_from_scalar<C>(sigma.theta(m, k));
    C c = dir * certified_from_rat<C>(piece.dims[k]);
    lo = lo + clamp_nonpos(c);
    hi = hi + clamp_nonneg(c);
  }
}

// Interval overlap length min(hi1,hi2) - max(lo1,lo2); interiors of boxes meet
// iff it is positive in every coordinate.
template <class C>
C overlap_amount(const C& lo1, const C& hi1, const C& lo2, const C& hi2) {
  C a = hi1 - lo2;
  C b = hi2 - lo1;
  // min(a, b): 1-Lipschitz in both, so take min of values and max of radii.
  if constexpr (std::is_same_v<C, Rat>) {
    return a < b ? a : b;
  } else {
    return FpBound(std::min(a.v, b.v), std::max(a.r, b.r));
  }
}

template <class C>
struct DisjointState {
  bool found_separation = false;
  bool all_overlap_certain = true;
  double best_margin = -std::numeric_limits<double>::infinity();
  double radius = 0;

  void fold_axis(const C& ov) {
    Trit pos = certified_pos(ov);
    if (pos != Trit::yes) {
      if (pos == Trit::no)
        found_separation = true;
      else
        all_overlap_certain = false;
    }
    best_margin = std::max(best_margin, -approx_value(ov));
    radius = std::max(radius, radius_of(ov));
  }
};

template <class S>
std::vector<certified_t<S>> column_of(const Mat<S>& m, int k) {
  using C = certified_t<S>;
  std::vector<C> c(m.n);
  for (int i = 0; i < m.n; ++i) c[i] = certified_from_scalar<C>(m(i, k));
  return c;
}

template <class C>
std::vector<C> cross3(const std::vector<C>& u, const std::vector<C>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

struct PairCheck {
  Trit disjoint = Trit::unknown;
  double margin = 0;
  double radius = 0;
};

template <class S>
PairCheck disjoint_check(const Motion<S>& sigma1, const Piece& piece1, const Motion<S>& sigma2,
                         const Piece& piece2) {
  using C = certified_t<S>;
  int n = sigma1.dim();
  if (sigma2.dim() != n || piece1.dim() != n || piece2.dim() != n)
    throw std::invalid_argument("interiors_disjoint: dimension mismatch");

  if (piece1.volume() == 0 || piece2.volume() == 0) return {Trit::yes, 0, 0};

  bool axis_aligned = is_signed_permutation(sigma1.theta) && is_signed_permutation(sigma2.theta);

  std::vector<std::vector<C>> axes;
  if (axis_aligned) {
    for (int m = 0; m < n; ++m) {
      std::vector<C> e(n, C(0));
      e[m] = C(1);
      axes.push_back(std::move(e));
    }
  } else if (n == 2) {
    for (const Motion<S>* s : {&sigma1, &sigma2})
      for (int k = 0; k < 2; ++k) {
        auto c = column_of(s->theta, k);
        axes.push_back({-c[1], c[0]});
      }
  } else if (n == 3) {
    std::vector<std::vector<C>> e1, e2;
    for (int k = 0; k < 3; ++k) {
      e1.push_back(column_of(sigma1.theta, k));
      e2.push_back(column_of(sigma2.theta, k));
    }
    for (int k = 0; k < 3; ++k) {
      axes.push_back(cross3(e1[k], e1[(k + 1) % 3]));
      axes.push_back(cross3(e2[k], e2[(k + 1) % 3]));
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) axes.push_back(cross3(e1[a], e2[b]));
  } else {
    throw std::domain_error("interiors_disjoint: rotated pieces unsupported for n > 3");
  }

  DisjointState<C> st;
  bool skipped_axis = false;
  for (const auto& axis : axes) {
    C len2(0);
    for (const C& a : axis) len2 = len2 + a * a;
    Trit nonzero = certified_pos(len2);
    if (nonzero != Trit::yes) {
      // Degenerate axis (parallel edges). Skipping it can only hide a
      // separation witness, never invent one.
      if (nonzero == Trit::unknown) skipped_axis = true;
      continue;
    }
    C lo1, hi1, lo2, hi2;
    project_onto_axis(axis, sigma1, piece1, lo1, hi1);
    project_onto_axis(axis, sigma2, piece2, lo2, hi2);
    st.fold_axis(overlap_amount(lo1, hi1, lo2, hi2));
    if (st.found_separation) break;
  }

  PairCheck res;
  res.margin = st.best_margin;
  res.radius = st.radius;
  if (st.found_separation)
    res.disjoint = Trit::yes;
  else if (st.all_overlap_certain && !skipped_axis)
    res.disjoint = Trit::no;
  else
    res.disjoint = Trit::unknown;
  return res;
}

// Unreduced fraction: comparisons cross-multiply, so no gcd normalization of
// the big packing denominators ever happens in the pair loop.
struct UQ {
  BigInt num;
  BigInt den; // > 0

  void add(const Rat& q) {
    const BigInt& qn = numerator(q);
    const BigInt& qd = denominator(q);
    num = num * qd + qn * den;
    den *= qd;
  }
};

inline int uq_cmp(const UQ& x, const UQ& y) {
  BigInt lhs = x.num * y.den;
  BigInt rhs = y.num * x.den;
  return lhs.compare(rhs);
}

// num/den in double with a few ulp of relative error, overflow-safe.
inline double uq_approx(const UQ& q) {
  if (q.num == 0) return 0;
  BigInt n = abs(q.num);
  auto top = [](const BigInt& x) {
    unsigned bits = msb(x);
    unsigned shift = bits > 62 ? bits - 62 : 0;
    BigInt t = x >> shift;
    return std::make_pair(t.convert_to<double>(), static_cast<int>(shift));
  };
  auto [tn, sn] = top(n);
  auto [td, sd] = top(q.den);
  double v = std::ldexp(tn / td, sn - sd);
  return q.num < 0 ? -v : v;
}

template <class S>
struct hull_scalar_of;
template <>
struct hull_scalar_of<Rat> {
  using type = UQ;
};
template <>
struct hull_scalar_of<double> {
  using type = FpBound;
};

// Coordinate interval hull of sigma(piece) with two-sided double bounds:
// lo_out <= true lo <= lo_in and hi_in <= true hi <= hi_out. Pair checks
// between axis-aligned placements reduce to these cached hulls; the double
// bounds decide all but near-equal coordinates, which fall back to exact
// cross-multiplied comparisons.
template <class S>
struct ImageHull {
  std::vector<typename hull_scalar_of<S>::type> lo, hi;
  std::vector<double> lo_out, lo_in, hi_in, hi_out;
  bool axis_aligned = false;
};

inline void hull_bounds(const UQ& q, double& below, double& above) {
  double v = uq_approx(q);
  if (!std::isfinite(v)) { // out of double range: no certainty either way
    below = -std::numeric_limits<double>::infinity();
    above = std::numeric_limits<double>::infinity();
    return;
  }
  double slack = 1e-13 * (std::abs(v) + 1);
  below = v - slack;
  above = v + slack;
}
inline void hull_bounds(const FpBound& q, double& below, double& above) {
  below = q.v - q.r - 1e-12;
  above = q.v + q.r + 1e-12;
}

template <class S>
ImageHull<S> image_hull(const Motion<S>& sigma, const Piece& piece) {
  int n = sigma.dim();
  ImageHull<S> h;
  h.axis_aligned = is_signed_permutation(sigma.theta);
  h.lo.resize(n);
  h.hi.resize(n);
  h.lo_out.resize(n);
  h.lo_in.resize(n);
  h.hi_in.resize(n);
  h.hi_out.resize(n);
  for (int m = 0; m < n; ++m) {
    if constexpr (std::is_same_v<S, Rat>) {
      UQ a{numerator(sigma.xi[m]), denominator(sigma.xi[m])};
      UQ b = a;
      for (int k = 0; k < n; ++k) {
        const Rat& t = sigma.theta(m, k);
        if (t == 0) continue;
        Rat c = t * piece.dims[k];
        if (c < 0)
          a.add(c);
        else
          b.add(c);
      }
      h.lo[m] = std::move(a);
      h.hi[m] = std::move(b);
    } else {
      FpBound a = certified_from_scalar<FpBound>(sigma.xi[m]);
      FpBound b = a;
      for (int k = 0; k < n; ++k) {
        FpBound c = certified_from_scalar<FpBound>(sigma.theta(m, k)) *
                    certified_from_rat<FpBound>(piece.dims[k]);
        a = a + clamp_nonpos(c);
        b = b + clamp_nonneg(c);
      }
      h.lo[m] = a;
      h.hi[m] = b;
    }
    hull_bounds(h.lo[m], h.lo_out[m], h.lo_in[m]);
    hull_bounds(h.hi[m], h.hi_in[m], h.hi_out[m]);
  }
  return h;
}

template <class S>
PairCheck disjoint_check_hulls(const ImageHull<S>& h1, const ImageHull<S>& h2) {
  if constexpr (std::is_same_v<S, Rat>) {
    // exact verdict; doubles decide except on near-equal coordinates
    PairCheck res;
    res.disjoint = Trit::no;
    res.margin = -std::numeric_limits<double>::infinity();
    auto separated = [](const ImageHull<Rat>& x, const ImageHull<Rat>& y, size_t m) {
      if (x.hi_out[m] <= y.lo_out[m]) return true;   // certainly hi <= lo
      if (x.hi_in[m] > y.lo_in[m]) return false;     // certainly hi > lo
      return uq_cmp(x.hi[m], y.lo[m]) <= 0;
    };
    for (size_t m = 0; m < h1.lo.size(); ++m) {
      if (separated(h1, h2, m) || separated(h2, h1, m)) res.disjoint = Trit::yes;
      double gap = std::max(h2.lo_in[m] - h1.hi_in[m], h1.lo_in[m] - h2.hi_in[m]);
      res.margin = std::max(res.margin, gap);
      if (res.disjoint == Trit::yes) break;
    }
    return res;
  } else {
    DisjointState<certified_t<S>> st;
    for (size_t m = 0; m < h1.lo.size(); ++m) {
      st.fold_axis(overlap_amount(h1.lo[m], h1.hi[m], h2.lo[m], h2.hi[m]));
      if (st.found_separation) break;
    }
    PairCheck res;
    res.margin = st.best_margin;
    res.radius = st.radius;
    res.disjoint = st.found_separation ? Trit::yes
                   : st.all_overlap_certain ? Trit::no
                                            : Trit::unknown;
    return res;
  }
}

template <class S>
Trit mode_check(const Motion<S>& m, Mode mode) {
  if constexpr (std::is_same_v<S, Rat>) {
    if (!is_signed_permutation(m.theta)) return Trit::no;
    if (mode == Mode::translated && !is_identity(m.theta)) return Trit::no;
    if (mode == Mode::oriented && signed_permutation_det(m.theta) != 1) return Trit::no;
    return Trit::yes;
  } else {
    if (max_orthogonality_defect(m.theta) > ORTHOGONALITY_TOL) return Trit::no;
    if (mode == Mode::translated && !is_identity(m.theta)) return Trit::no;
    if (mode == Mode::oriented) {
      double det = is_signed_permutation(m.theta) ? signed_permutation_det(m.theta)
                                                  : det3(m.theta);
      if (det < 0) return Trit::no;
    }
    return Trit::yes;
  }
}

} // namespace

template <class S>
Trit interiors_disjoint(const Motion<S>& sigma1, const Piece& piece1, const Motion<S>& sigma2,
                        const Piece& piece2) {
  return disjoint_check(sigma1, piece1, sigma2, piece2).disjoint;
}

template Trit interiors_disjoint<Rat>(const Motion<Rat>&, const Piece&, const Motion<Rat>&,
                                      const Piece&);
template Trit interiors_disjoint<double>(const Motion<double>&, const Piece&,
                                         const Motion<double>&, const Piece&);

template <class S>
VerificationReport verify_packing_as(const Certificate<S>& cert, Mode mode) {
  VerificationReport rep;
  rep.partial = cert.partial();
  int n = cert.dim;

  // Deterministic order: placements by piece id.
  std::vector<const Placement<S>*> order;
  order.reserve(cert.placements.size());
  for (const auto& p : cert.placements) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->piece_id < b->piece_id; });

  bool any_unknown = false;

  std::vector<const Piece*> pieces(order.size());
  std::vector<bool> zero_volume(order.size());
  for (size_t idx = 0; idx < order.size(); ++idx) {
    const auto* p = order[idx];
    const Piece* piece = cert.collection.find(p->piece_id);
    if (!piece) throw std::invalid_argument("verify: unknown piece id");
    if (p->motion.dim() != n) throw std::invalid_argument("verify: motion dimension mismatch");
    pieces[idx] = piece;
    zero_volume[idx] = piece->volume() == 0;

    if (mode_check(p->motion, mode) != Trit::yes) {
      rep.violations.push_back({Violation::Kind::mode, p->piece_id, 0, 0});
      continue;
    }

    auto chk = contains_piece(cert.target, p->motion, *piece);
    rep.slack_used = std::max(rep.slack_used, chk.radius);
    if (chk.ok == Trit::no)
      rep.violations.push_back({Violation::Kind::containment, p->piece_id, 0, chk.margin});
    else if (chk.ok == Trit::unknown)
      any_unknown = true;
  }

  // Broad phase: uniform grid with cell size = median max piece extent.
  std::vector<double> maxdims;
  for (const Piece* piece : pieces) {
    double m = 0;
    for (const Rat& d : piece->dims) m = std::max(m, to_double(d));
    maxdims.push_back(m);
  }
  double cell = 1;
  if (!maxdims.empty()) {
    std::vector<double> s = maxdims;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    cell = s[s.size() / 2];
    if (!(cell > 0)) cell = 1;
  }

  // Pieces spanning many cells would flood the grid; they are few, so they
  // get paired against everything through the bbox prefilter instead.
  constexpr long long MAX_CELL_SPAN = 256;
  std::unordered_map<uint64_t, std::vector<size_t>> grid;
  std::vector<size_t> oversized;
  std::vector<ImageHull<S>> hulls(order.size());
  grid.reserve(order.size() * 2);
  for (size_t idx = 0; idx < order.size(); ++idx) {
    hulls[idx] = image_hull(order[idx]->motion, *pieces[idx]);
    std::vector<long long> lo_cell(n), hi_cell(n);
    long long span = 1;
    for (int m = 0; m < n; ++m) {
      double lc = std::floor(hulls[idx].lo_out[m] / cell);
      double hc = std::floor(hulls[idx].hi_out[m] / cell);
      if (!(lc >= -1e15 && hc <= 1e15)) {
        span = MAX_CELL_SPAN + 1;
        break;
      }
      lo_cell[m] = static_cast<long long>(lc);
      hi_cell[m] = static_cast<long long>(hc);
      span *= hi_cell[m] - lo_cell[m] + 1;
      if (span > MAX_CELL_SPAN) break;
    }
    if (span > MAX_CELL_SPAN) {
      oversized.push_back(idx);
      continue;
    }
    std::vector<long long> key(n);
    std::function<void(int)> fill = [&](int d) {
      if (d == n) {
        // splitmix64 chain; bucket collisions only add candidate pairs
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (long long c : key) {
          uint64_t z = static_cast<uint64_t>(c) + 0x9e3779b97f4a7c15ull + h;
          z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
          z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
          h = z ^ (z >> 31);
        }
        grid[h].push_back(idx);
        return;
      }
      for (long long c = lo_cell[d]; c <= hi_cell[d]; ++c) {
        key[d] = c;
        fill(d + 1);
      }
    };
    fill(0);
  }

  auto bbox_overlap = [&](size_t a, size_t b) {
    for (int m = 0; m < n; ++m)
      if (hulls[a].hi_out[m] <= hulls[b].lo_out[m] || hulls[b].hi_out[m] <= hulls[a].lo_out[m])
        return false;
    return true;
  };

  std::vector<std::pair<size_t, size_t>> candidates;
  for (const auto& [key, members] : grid)
    for (size_t a = 0; a < members.size(); ++a)
      for (size_t b = a + 1; b < members.size(); ++b)
        if (members[a] != members[b] && bbox_overlap(members[a], members[b]))
          candidates.emplace_back(std::min(members[a], members[b]),
                                  std::max(members[a], members[b]));
  for (size_t a : oversized)
    for (size_t b = 0; b < order.size(); ++b)
      if (b != a && bbox_overlap(a, b)) candidates.emplace_back(std::min(a, b), std::max(a, b));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  for (auto [a, b] : candidates) {
    if (zero_volume[a] || zero_volume[b]) continue;
    PairCheck chk = hulls[a].axis_aligned && hulls[b].axis_aligned
                        ? disjoint_check_hulls(hulls[a], hulls[b])
                        : disjoint_check(order[a]->motion, *pieces[a], order[b]->motion,
                                         *pieces[b]);
    rep.slack_used = std::max(rep.slack_used, chk.radius);
    if (chk.disjoint == Trit::no)
      rep.violations.push_back(
          {Violation::Kind::overlap, order[a]->piece_id, order[b]->piece_id, chk.margin});
    else if (chk.disjoint == Trit::unknown)
      any_unknown = true;
  }

  // Coverage.
  Rat placed(0);
  for (const Piece* piece : pieces) placed += piece->volume();
  if (!has_finite_volume(cert.target)) {
    rep.infinite_volume = true;
    rep.coverage = 0;
  } else if (auto v = exact_volume(cert.target)) {
    rep.coverage_exact = placed / *v;
    rep.coverage = to_double(*rep.coverage_exact);
  } else {
    rep.coverage = to_double(placed) / approx_volume(cert.target);
  }

  if (!rep.violations.empty())
    rep.verdict = Verdict::invalid;
  else if (any_unknown)
    rep.verdict = Verdict::indeterminate;
  else
    rep.verdict = Verdict::valid;
  return rep;
}

template <class S>
VerificationReport verify_packing(const Certificate<S>& cert) {
  return verify_packing_as(cert, cert.mode);
}

template VerificationReport verify_packing<Rat>(const Certificate<Rat>&);
template VerificationReport verify_packing<double>(const Certificate<double>&);
template VerificationReport verify_packing_as<Rat>(const Certificate<Rat>&, Mode);
template VerificationReport verify_packing_as<double>(const Certificate<double>&, Mode);

VerificationReport verify_packing(const AnyCertificate& cert) {
  return std::visit([](const auto& c) { return verify_packing(c); }, cert);
}

bool is_tiling(const VerificationReport& report) {
  if (report.infinite_volume) throw std::domain_error("is_tiling: infinite-volume target");
  return report.verdict == Verdict::valid && report.coverage_exact &&
         *report.coverage_exact == 1;
}

} // namespace packlim
