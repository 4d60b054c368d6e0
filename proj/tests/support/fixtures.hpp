#pragma once

// Certificate-sequence fixtures shared by the limit-engine tests and the
// acceptance suite.

#include "packlim/certificate.hpp"

#include <vector>

namespace packlim::fixtures {

inline PieceCollection four_unit_squares() {
  return custom_collection({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(1)},
                            {Rat(1), Rat(1)}});
}

/// Entry j of the shrinking-homothet family: four unit squares inside
/// (1+1/j) * [0,2]^2. Early entries spread the corner squares outward by 1/j;
/// from `constant_from` on they sit exactly at the tiling of [0,2]^2 (the
/// centroid of a strictly spread family could never land back on the tiling,
/// so convergence onto it needs an eventually constant tail).
inline ExactCertificate homothet_entry_exact(int j, int constant_from) {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = four_unit_squares();
  c.target = homothet_target(brick_target({Rat(2), Rat(2)}), Rat(1) + Rat(1) / j);
  Rat off = j < constant_from ? Rat(1) / j : Rat(0);
  auto tr = [](Rat x, Rat y) {
    return Motion<Rat>{Mat<Rat>::identity(2), {std::move(x), std::move(y)}};
  };
  c.placements = {{1, tr(0, 0)},
                  {2, tr(Rat(1) + off, 0)},
                  {3, tr(0, Rat(1) + off)},
                  {4, tr(Rat(1) + off, Rat(1) + off)}};
  return c;
}

inline FloatCertificate homothet_entry_float(int j, int constant_from) {
  FloatCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = four_unit_squares();
  double lambda = 1.0 + 1.0 / j;
  c.target = homothet_target(brick_target({Rat(2), Rat(2)}), rat_of_double(lambda));
  double off = j < constant_from ? 1.0 / j : 0.0;
  auto tr = [](double x, double y) {
    Motion<double> m = Motion<double>::identity(2);
    m.xi = {x, y};
    return m;
  };
  c.placements = {{1, tr(0, 0)}, {2, tr(1 + off, 0)}, {3, tr(0, 1 + off)},
                  {4, tr(1 + off, 1 + off)}};
  return c;
}

template <class Entry>
std::vector<Entry> homothet_sequence(int count, int constant_from, Entry (*make)(int, int)) {
  std::vector<Entry> v;
  for (int j = 1; j <= count; ++j) v.push_back(make(j, constant_from));
  return v;
}

/// Funnel escape family: a unit brick standing in for the unit disk, slid to
/// x = (1+eps)^2/eps with eps = 1/j, where a disk would be forced in the
/// homothet (1+1/j) * funnel. The translations grow without bound.
inline ExactCertificate funnel_entry(int j) {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{Rat(1), Rat(1)}});
  Rat lambda = Rat(1) + Rat(1) / j;
  c.target = homothet_target(funnel_target(), lambda);
  Rat x = lambda * lambda / (lambda - 1); // = (j+1)^2 / j
  c.placements = {{1, Motion<Rat>{Mat<Rat>::identity(2), {x, rat(-1, 2)}}}};
  return c;
}

inline std::vector<ExactCertificate> funnel_sequence(int count) {
  std::vector<ExactCertificate> v;
  for (int j = 1; j <= count; ++j) v.push_back(funnel_entry(j));
  return v;
}

} // namespace packlim::fixtures
