#include "packlim/pieces.hpp"

#include <cmath>
#include <stdexcept>

namespace packlim {

Rat Piece::volume() const {
  Rat v(1);
  for (const Rat& d : dims) v *= d;
  return v;
}

double Piece::diameter() const {
  Rat s(0);
  for (const Rat& d : dims) s += d * d;
  return std::sqrt(to_double(s));
}

std::string to_string(CollectionKind k) {
  switch (k) {
    case CollectionKind::moser_rectangles: return "moser_rectangles";
    case CollectionKind::moser_squares: return "moser_squares";
    case CollectionKind::custom: return "custom";
  }
  return "?";
}

Piece moser_piece(CollectionKind kind, int i) {
  switch (kind) {
    case CollectionKind::moser_rectangles:
      if (i < 1) throw std::out_of_range("moser_piece: rectangle index must be >= 1");
      return {i, {rat(1, i), rat(1, i + 1)}};
    case CollectionKind::moser_squares:
      if (i < 2) throw std::out_of_range("moser_piece: square index must be >= 2");
      return {i, {rat(1, i), rat(1, i)}};
    case CollectionKind::custom:
      throw std::invalid_argument("moser_piece: custom collections have no formula");
  }
  throw std::invalid_argument("moser_piece: bad kind");
}

const Piece* PieceCollection::find(int id) const {
  for (const Piece& p : pieces)
    if (p.id == id) return &p;
  return nullptr;
}

PieceCollection moser_rectangles_collection(int n) {
  if (n < 1) throw std::out_of_range("moser_rectangles_collection: N >= 1");
  PieceCollection c{CollectionKind::moser_rectangles, n, {}};
  c.pieces.reserve(n);
  for (int i = 1; i <= n; ++i) c.pieces.push_back(moser_piece(c.kind, i));
  return c;
}

PieceCollection moser_squares_collection(int n) {
  if (n < 2) throw std::out_of_range("moser_squares_collection: N >= 2");
  PieceCollection c{CollectionKind::moser_squares, n, {}};
  c.pieces.reserve(n - 1);
  for (int i = 2; i <= n; ++i) c.pieces.push_back(moser_piece(c.kind, i));
  return c;
}

PieceCollection custom_collection(std::vector<std::vector<Rat>> dims) {
  if (dims.empty()) throw std::invalid_argument("custom_collection: empty");
  PieceCollection c{CollectionKind::custom, static_cast<int>(dims.size()), {}};
  size_t d = dims.front().size();
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i].size() != d) throw std::invalid_argument("custom_collection: mixed dimensions");
    for (const Rat& x : dims[i])
      if (x < 0) throw std::invalid_argument("custom_collection: negative extent");
    c.pieces.push_back({static_cast<int>(i) + 1, std::move(dims[i])});
  }
  return c;
}

namespace {

// Pairwise summation keeps intermediate denominators small for the telescoping
// rectangle family and amortizes the big gcd work for the square family.
Rat area_sum(CollectionKind kind, long long lo, long long hi) {
  if (lo == hi) {
    if (kind == CollectionKind::moser_rectangles) return Rat(BigInt(1), BigInt(lo) * (lo + 1));
    return Rat(BigInt(1), BigInt(lo) * lo);
  }
  long long mid = lo + (hi - lo) / 2;
  return area_sum(kind, lo, mid) + area_sum(kind, mid + 1, hi);
}

} // namespace

Rat collection_area(CollectionKind kind, long long n) {
  switch (kind) {
    case CollectionKind::moser_rectangles:
      if (n < 1) throw std::out_of_range("collection_area: N >= 1");
      return area_sum(kind, 1, n);
    case CollectionKind::moser_squares:
      if (n < 2) throw std::out_of_range("collection_area: N >= 2");
      return area_sum(kind, 2, n);
    case CollectionKind::custom:
      throw std::invalid_argument("collection_area: custom collections have no formula");
  }
  throw std::invalid_argument("collection_area: bad kind");
}

} // namespace packlim
