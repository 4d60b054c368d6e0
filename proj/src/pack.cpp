#include "packlim/pack.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace packlim {

GuillotinePacker::GuillotinePacker(Rat width, Rat height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("packer: target must be positive");
  gaps_.emplace_back(Rat(0), Rat(0), std::move(width), std::move(height));
}

std::optional<std::pair<Rat, Rat>> GuillotinePacker::place(const Rat& w, const Rat& h) {
  // Double prefilters pick the fitting gap with the smallest leftover area;
  // only near-ties (within EPS) fall back to exact comparisons, so the result
  // is identical to the all-exact scan.
  constexpr double EPS = 1e-9;
  const double wd = to_double(w), hd = to_double(h);
  const double piece_area = wd * hd;

  std::vector<size_t> near;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < gaps_.size(); ++i) {
    const Gap& g = gaps_[i];
    if (wd > g.wd + EPS || hd > g.hd + EPS) continue;                  // certainly too small
    if ((wd > g.wd - EPS && w > g.w) || (hd > g.hd - EPS && h > g.h)) continue;
    double leftover = g.wd * g.hd - piece_area;
    if (leftover < best_d - EPS) {
      best_d = leftover;
      near.clear();
      near.push_back(i);
    } else if (leftover < best_d + EPS) {
      best_d = std::min(best_d, leftover);
      near.push_back(i);
    }
  }
  if (near.empty()) return std::nullopt;

  size_t best = near.front();
  if (near.size() > 1) {
    Rat piece = w * h;
    Rat best_leftover = gaps_[best].area() - piece;
    for (size_t q = 1; q < near.size(); ++q) {
      Rat leftover = gaps_[near[q]].area() - piece;
      if (leftover < best_leftover) {
        best = near[q];
        best_leftover = leftover;
      }
    }
  }

  Gap g = gaps_[best];
  gaps_.erase(gaps_.begin() + best);
  Rat lw = g.w - w;
  Rat lh = g.h - h;
  Gap right, top;
  if (lw > lh) {
    // vertical cut: right strip keeps full height
    right = Gap(g.x + w, g.y, lw, g.h);
    top = Gap(g.x, g.y + h, w, lh);
  } else {
    // horizontal cut: top strip keeps full width
    top = Gap(g.x, g.y + h, g.w, lh);
    right = Gap(g.x + w, g.y, lw, h);
  }
  if (right.w > 0 && right.h > 0) gaps_.push_back(right);
  if (top.w > 0 && top.h > 0) gaps_.push_back(top);
  return std::make_pair(g.x, g.y);
}

Rat GuillotinePacker::total_gap_area() const {
  Rat s(0);
  for (const Gap& g : gaps_) s += g.area();
  return s;
}

namespace {

ExactCertificate pack_collection(PieceCollection collection, Target target, Rat width,
                                 Rat height) {
  GuillotinePacker packer(std::move(width), std::move(height));
  ExactCertificate cert;
  cert.dim = 2;
  cert.mode = Mode::translated;
  cert.collection = std::move(collection);
  cert.target = std::move(target);
  for (const Piece& p : cert.collection.pieces) {
    auto pos = packer.place(p.dims[0], p.dims[1]);
    if (!pos) throw CapacityError(p.id);
    Motion<Rat> m = Motion<Rat>::identity(2);
    m.xi = {pos->first, pos->second};
    cert.placements.push_back({p.id, std::move(m)});
  }
  return cert;
}

} // namespace

ExactCertificate pack_moser_rectangles(int n, const Rat& side) {
  if (n < 1) throw std::invalid_argument("pack_moser_rectangles: N >= 1");
  if (side < 1) throw std::invalid_argument("pack_moser_rectangles: side must be >= 1");
  return pack_collection(moser_rectangles_collection(n), brick_target({side, side}), side, side);
}

ExactCertificate pack_moser_squares(int n, const Rat& width) {
  if (n < 2) throw std::invalid_argument("pack_moser_squares: N >= 2");
  if (width < Rat(1, 2)) throw std::invalid_argument("pack_moser_squares: width must be >= 1/2");
  return pack_collection(moser_squares_collection(n), brick_target({width, Rat(1)}), width,
                         Rat(1));
}

ShrinkResult shrink_search(CollectionKind kind, int n, Rat lo, Rat hi, int steps) {
  if (!(lo < hi)) throw std::invalid_argument("shrink_search: need lo < hi");
  auto feasible = [&](const Rat& param) {
    try {
      if (kind == CollectionKind::moser_rectangles)
        pack_moser_rectangles(n, param);
      else if (kind == CollectionKind::moser_squares)
        pack_moser_squares(n, param);
      else
        throw std::invalid_argument("shrink_search: custom collections unsupported");
      return true;
    } catch (const CapacityError&) {
      return false;
    }
  };
  if (!feasible(hi)) throw CapacityError(0);

  Rat best = hi;
  for (int i = 0; i < steps; ++i) {
    Rat mid = (lo + hi) / 2;
    if (feasible(mid)) {
      hi = mid;
      best = mid;
    } else {
      lo = mid;
    }
  }

  ShrinkResult res;
  res.param = best;
  res.steps = steps;
  if (kind == CollectionKind::moser_rectangles)
    res.epsilon = to_double(best - 1);
  else
    res.epsilon = to_double(best) - (std::numbers::pi * std::numbers::pi / 6 - 1);
  return res;
}

} // namespace packlim
