#pragma once

#include "packlim/motion.hpp"
#include "packlim/pieces.hpp"
#include "packlim/targets.hpp"

#include <string>
#include <variant>
#include <vector>

namespace packlim {

enum class Mode { general, oriented, translated };

std::string to_string(Mode m);

template <class S>
struct Placement {
  int piece_id = 0;
  Motion<S> motion;
};

/// A finite packing: a truncated collection, a target, and one placement per
/// placed piece. The scalar type is the arithmetic mode: Rat for exact
/// certificates, double for floating ones.
template <class S>
struct Certificate {
  int dim = 0;
  Mode mode = Mode::general;
  PieceCollection collection;
  Target target;
  std::vector<Placement<S>> placements;

  bool partial() const { return placements.size() < collection.pieces.size(); }
};

using ExactCertificate = Certificate<Rat>;
using FloatCertificate = Certificate<double>;
using AnyCertificate = std::variant<ExactCertificate, FloatCertificate>;

inline bool is_exact(const AnyCertificate& c) {
  return std::holds_alternative<ExactCertificate>(c);
}

} // namespace packlim
