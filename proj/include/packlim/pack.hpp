#pragma once

#include "packlim/certificate.hpp"

#include <optional>
#include <vector>

namespace packlim {

struct CapacityError : std::runtime_error {
  int piece_id;
  explicit CapacityError(int id)
      : std::runtime_error("no free gap fits piece " + std::to_string(id)), piece_id(id) {}
};

/// Free axis-aligned gaps inside a rectangular target, pairwise
/// interior-disjoint; their union always covers target minus placed pieces.
/// wd/hd cache the extents in double for the scan prefilter.
struct Gap {
  Rat x, y, w, h;
  double wd = 0, hd = 0;

  Gap() = default;
  Gap(Rat x_, Rat y_, Rat w_, Rat h_)
      : x(std::move(x_)), y(std::move(y_)), w(std::move(w_)), h(std::move(h_)),
        wd(to_double(w)), hd(to_double(h)) {}

  Rat area() const { return w * h; }
};

/// Deterministic first-fit-decreasing guillotine packer: each piece goes to
/// the fitting gap with the smallest leftover area (ties: lowest gap index),
/// which is then split along the longer leftover side.
class GuillotinePacker {
 public:
  GuillotinePacker(Rat width, Rat height);

  /// Places a w x h piece, returning its lower-left corner, or nullopt when
  /// no gap fits.
  std::optional<std::pair<Rat, Rat>> place(const Rat& w, const Rat& h);

  Rat total_gap_area() const;
  const std::vector<Gap>& gaps() const { return gaps_; }

 private:
  std::vector<Gap> gaps_;
};

/// Translated-mode packing of Moser rectangles 1..N into a side x side square.
/// Throws CapacityError naming the first piece that does not fit.
ExactCertificate pack_moser_rectangles(int n, const Rat& side);

/// Translated-mode packing of Moser squares 2..N into [0,width] x [0,1].
ExactCertificate pack_moser_squares(int n, const Rat& width);

struct ShrinkResult {
  Rat param;      // smallest parameter at which the packer succeeded
  int steps = 0;  // bisection iterations performed
  double epsilon = 0; // achieved margin over the family's natural limit
};

/// Bisection on the target parameter (side for rectangles, width for
/// squares). The heuristic is not assumed monotone: infeasible midpoints only
/// raise the lower bound, feasible ones become the new best.
ShrinkResult shrink_search(CollectionKind kind, int n, Rat lo, Rat hi, int steps);

} // namespace packlim
