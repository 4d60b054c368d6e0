#include "packlim/limit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace packlim {

namespace {

inline double to_double_generic(const Rat& x) { return to_double(x); }
inline double to_double_generic(double x) { return x; }

template <class S>
S scalar_of(const Rat& q) {
  if constexpr (std::is_same_v<S, Rat>)
    return q;
  else
    return to_double(q);
}

// Squared clustering tolerance at stage t; exact in rational mode so cluster
// membership is decided without rounding.
template <class S>
S level_sq(double tol, int t) {
  if constexpr (std::is_same_v<S, Rat>) {
    Rat level = rat_of_double(tol) * pow_rat(Rat(2), t);
    return level * level;
  } else {
    double level = tol * std::pow(2.0, t);
    return level * level;
  }
}

template <class S>
Mat<S> reproject(const Mat<S>& m) {
  if constexpr (std::is_same_v<S, Rat>)
    return nearest_signed_permutation(m);
  else
    return project_to_orthogonal(m);
}

template <class S>
void sort_placements(Certificate<S>& c) {
  std::sort(c.placements.begin(), c.placements.end(),
            [](const auto& a, const auto& b) { return a.piece_id < b.piece_id; });
}

template <class S>
Box targets_bound(const std::vector<Certificate<S>>& entries) {
  Box hull = bounding_box(entries.front().target);
  for (size_t e = 1; e < entries.size(); ++e) {
    Box b = bounding_box(entries[e].target);
    for (size_t m = 0; m < hull.lo.size(); ++m) {
      if (b.lo[m] < hull.lo[m]) hull.lo[m] = b.lo[m];
      if (b.hi[m] > hull.hi[m]) hull.hi[m] = b.hi[m];
    }
  }
  return hull;
}

} // namespace

template <class S>
PackingSequence<S> make_sequence(std::vector<Certificate<S>> entries) {
  if (entries.empty()) throw std::invalid_argument("sequence: no entries");
  const auto& first = entries.front();
  for (auto& e : entries) {
    if (e.dim != first.dim || e.mode != first.mode || !(e.collection == first.collection))
      throw std::invalid_argument("sequence: entries must share collection, mode and dimension");
    sort_placements(e);
  }
  for (auto& e : entries) {
    if (e.placements.size() != first.placements.size())
      throw std::invalid_argument("sequence: entries place different piece sets");
    for (size_t i = 0; i < e.placements.size(); ++i)
      if (e.placements[i].piece_id != first.placements[i].piece_id)
        throw std::invalid_argument("sequence: entries place different piece sets");
  }
  PackingSequence<S> seq;
  bool all_bounded = std::all_of(entries.begin(), entries.end(),
                                 [](const auto& e) { return e.target.bounded(); });
  if (all_bounded) seq.bound = targets_bound(entries);
  seq.entries = std::move(entries);
  return seq;
}

template PackingSequence<Rat> make_sequence<Rat>(std::vector<Certificate<Rat>>);
template PackingSequence<double> make_sequence<double>(std::vector<Certificate<double>>);

Target limit_target_homothet(const Target& base) {
  if (!base.bounded()) throw std::domain_error("limit_target_homothet: unbounded base");
  return base;
}

namespace {

Target infer_limit_target(const std::vector<Target>& targets, int window) {
  bool all_equal = true;
  for (size_t i = 1; i < targets.size(); ++i)
    if (!target_equal(targets[i], targets.front())) {
      all_equal = false;
      break;
    }
  if (all_equal) return targets.front();

  // Shrinking homothets of a common base: the base itself is the limit.
  bool all_homothet = true;
  const Target* base = nullptr;
  for (const Target& t : targets) {
    const auto* h = std::get_if<HomothetShape>(&t.shape);
    if (!h) {
      all_homothet = false;
      break;
    }
    if (!base)
      base = h->base.get();
    else if (!target_equal(*base, *h->base)) {
      all_homothet = false;
      break;
    }
  }
  if (all_homothet && base) return limit_target_homothet(*base);

  // Bricks of varying dimensions: limsup brick.
  bool all_brick = std::all_of(targets.begin(), targets.end(), [](const Target& t) {
    return std::holds_alternative<BrickShape>(t.shape);
  });
  if (all_brick) {
    std::vector<std::vector<Rat>> dims;
    for (const Target& t : targets) dims.push_back(std::get<BrickShape>(t.shape).dims);
    BrickLimit bl = brick_limit(dims, window);
    return brick_target(bl.dims);
  }

  throw std::invalid_argument("limit: cannot infer a limit target; pass one explicitly");
}

template <class S>
struct DistanceTable {
  // Squared product-metric distances, exact for rational motions.
  std::vector<S> d2;
  size_t k = 0;
  S& at(size_t a, size_t b) { return d2[a * k + b]; }
  const S& at(size_t a, size_t b) const { return d2[a * k + b]; }
};

template <class S>
DistanceTable<S> distance_table(const std::vector<Certificate<S>>& entries) {
  DistanceTable<S> t;
  t.k = entries.size();
  t.d2.assign(t.k * t.k, S(0));
  for (size_t a = 0; a < t.k; ++a)
    for (size_t b = a + 1; b < t.k; ++b) {
      S worst(0);
      for (size_t i = 0; i < entries[a].placements.size(); ++i) {
        S d = distance_sq(entries[a].placements[i].motion, entries[b].placements[i].motion);
        if (d > worst) worst = d;
      }
      t.at(a, b) = worst;
      t.at(b, a) = worst;
    }
  return t;
}

} // namespace

template <class S>
LimitReport<S> extract_convergent_subsequence(const PackingSequence<S>& seq, double tol,
                                              int min_keep,
                                              std::optional<Target> declared_target) {
  if (tol <= 0) throw std::invalid_argument("limit: tol must be positive");
  if (min_keep < 1) throw std::invalid_argument("limit: min_keep must be >= 1");
  const auto& entries = seq.entries;
  if (static_cast<int>(entries.size()) < min_keep)
    throw std::invalid_argument("limit: fewer entries than min_keep");

  for (size_t e = 0; e < entries.size(); ++e) {
    VerificationReport r = verify_packing(entries[e]);
    if (r.verdict != Verdict::valid)
      throw std::invalid_argument("limit: entry " + std::to_string(e) +
                                  " is not valid for its own target");
  }

  DistanceTable<S> dist = distance_table(entries);

  double spread = 0;
  for (const S& d : dist.d2) spread = std::max(spread, std::sqrt(to_double_generic(d)));
  if (seq.bound) {
    Rat diag(0);
    for (size_t m = 0; m < seq.bound->lo.size(); ++m) {
      Rat e = seq.bound->hi[m] - seq.bound->lo[m];
      diag += e * e;
    }
    spread = std::max(spread, std::sqrt(to_double(diag)));
  }

  int t_max = 0;
  while (tol * std::pow(2.0, t_max) < spread && t_max < 200) ++t_max;

  std::vector<int> kept(entries.size());
  for (size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<int>(i);

  for (int t = t_max; t >= 0; --t) {
    S level2 = level_sq<S>(tol, t);
    std::vector<std::vector<int>> clusters;
    for (int idx : kept) {
      bool joined = false;
      for (auto& c : clusters)
        if (dist.at(c.front(), idx) <= level2) {
          c.push_back(idx);
          joined = true;
          break;
        }
      if (!joined) clusters.push_back({idx});
    }
    size_t best = 0;
    for (size_t c = 1; c < clusters.size(); ++c)
      if (clusters[c].size() > clusters[best].size()) best = c;
    kept = clusters[best];
  }

  if (static_cast<int>(kept.size()) < min_keep)
    throw DivergenceError("limit: no cluster of size " + std::to_string(min_keep) +
                          " at tolerance " + std::to_string(tol) +
                          " (largest: " + std::to_string(kept.size()) + ")");

  // Centroid limit with rotations re-projected onto the orthogonal group.
  const auto& proto = entries[kept.front()];
  Certificate<S> limit;
  limit.dim = proto.dim;
  limit.mode = proto.mode;
  limit.collection = proto.collection;

  for (size_t i = 0; i < proto.placements.size(); ++i) {
    Motion<S> mean;
    mean.theta = Mat<S>(proto.dim);
    mean.xi.assign(proto.dim, S(0));
    bool theta_constant = true;
    for (int idx : kept) {
      const Motion<S>& m = entries[idx].placements[i].motion;
      if (!(m.theta == entries[kept.front()].placements[i].motion.theta)) theta_constant = false;
      for (size_t q = 0; q < mean.theta.a.size(); ++q) mean.theta.a[q] += m.theta.a[q];
      for (int q = 0; q < proto.dim; ++q) mean.xi[q] += m.xi[q];
    }
    S count(static_cast<int>(kept.size()));
    for (auto& v : mean.theta.a) v /= count;
    for (auto& v : mean.xi) v /= count;
    if (theta_constant)
      mean.theta = entries[kept.front()].placements[i].motion.theta;
    else
      mean.theta = reproject<S>(mean.theta);
    limit.placements.push_back({proto.placements[i].piece_id, std::move(mean)});
  }

  LimitReport<S> rep;
  rep.kept_indices = kept;

  double diam = 0;
  for (int idx : kept)
    for (size_t i = 0; i < limit.placements.size(); ++i)
      diam = std::max(diam, std::sqrt(to_double_generic(distance_sq(
                                limit.placements[i].motion, entries[idx].placements[i].motion))));
  rep.cluster_diameter = diam;

  double lip = 0;
  for (const auto& pl : limit.placements)
    lip = std::max(lip, lipschitz_constant(proto.collection.find(pl.piece_id)->diameter(),
                                           proto.dim));
  rep.certified_slack = lip * diam;

  rep.limit_target = declared_target
                         ? *declared_target
                         : [&] {
                             std::vector<Target> ts;
                             for (const auto& e : entries) ts.push_back(e.target);
                             return infer_limit_target(ts, 50);
                           }();
  limit.target = rep.limit_target;

  rep.xi_in_bound = true;
  if (seq.bound) {
    for (const auto& pl : limit.placements)
      for (int m = 0; m < proto.dim; ++m) {
        double slack = std::is_same_v<S, Rat> ? 0.0 : 1e-9;
        double v = to_double_generic(pl.motion.xi[m]);
        if (v < to_double(seq.bound->lo[m]) - slack || v > to_double(seq.bound->hi[m]) + slack)
          rep.xi_in_bound = false;
      }
  }

  rep.verdict = verify_packing(limit);
  rep.limit = std::move(limit);
  return rep;
}

template LimitReport<Rat> extract_convergent_subsequence<Rat>(const PackingSequence<Rat>&, double,
                                                              int, std::optional<Target>);
template LimitReport<double> extract_convergent_subsequence<double>(const PackingSequence<double>&,
                                                                    double, int,
                                                                    std::optional<Target>);

BrickLimit brick_limit(const std::vector<std::vector<Rat>>& dims_seq, int window) {
  if (dims_seq.empty()) throw std::invalid_argument("brick_limit: empty input");
  if (window < 1) throw std::invalid_argument("brick_limit: window must be >= 1");
  size_t n = dims_seq.front().size();
  if (n == 0) throw std::invalid_argument("brick_limit: zero-dimensional bricks");
  for (const auto& d : dims_seq)
    if (d.size() != n) throw std::invalid_argument("brick_limit: mixed dimensions");

  auto volume = [](const std::vector<Rat>& d) {
    Rat v(1);
    for (const Rat& x : d) v *= x;
    return v;
  };

  // Pass to the subsequence along which the volume is a running minimum, so
  // that volumes are non-increasing and end at the smallest observed one.
  std::vector<size_t> kept;
  Rat best_vol;
  for (size_t j = 0; j < dims_seq.size(); ++j) {
    Rat v = volume(dims_seq[j]);
    if (kept.empty() || v <= best_vol) {
      kept.push_back(j);
      best_vol = v;
    }
  }

  int w = std::min<int>(window, static_cast<int>(kept.size()));
  BrickLimit out;
  out.volume = best_vol;
  out.window = w;
  out.dims.assign(n, Rat(0));
  for (size_t t = kept.size() - w; t < kept.size(); ++t)
    for (size_t m = 0; m < n; ++m)
      if (dims_seq[kept[t]][m] > out.dims[m]) out.dims[m] = dims_seq[kept[t]][m];
  return out;
}

double case1_dim_bound(double eta, double vol_b1, int n) {
  if (eta <= 0) throw std::invalid_argument("case1_dim_bound: eta must be positive");
  if (n < 1) throw std::invalid_argument("case1_dim_bound: n >= 1");
  return vol_b1 / std::pow(eta, n - 1);
}

std::vector<double> clip_brick(std::vector<double> dims, double diam_b1) {
  if (diam_b1 <= 0) throw std::invalid_argument("clip_brick: diameter must be positive");
  for (double& d : dims) {
    if (d <= 0) throw std::invalid_argument("clip_brick: extents must be positive");
    d = std::min(d, diam_b1);
  }
  return dims;
}

template <class S>
Motion<S> orthant_shift(const Motion<S>& sigma, const Piece& piece) {
  int n = sigma.dim();
  if (piece.dim() != n) throw std::invalid_argument("orthant_shift: dimension mismatch");
  Motion<S> out;
  out.theta = sigma.theta;
  out.xi.assign(n, S(0));
  for (int m = 0; m < n; ++m) {
    S inf(0); // inf over theta(piece) of coordinate m; <= 0 since 0 is a vertex
    for (int k = 0; k < n; ++k) {
      S c = sigma.theta(m, k) * scalar_of<S>(piece.dims[k]);
      if (c < S(0)) inf += c;
    }
    out.xi[m] = -inf;
  }
  return out;
}

template Motion<Rat> orthant_shift<Rat>(const Motion<Rat>&, const Piece&);
template Motion<double> orthant_shift<double>(const Motion<double>&, const Piece&);

} // namespace packlim
