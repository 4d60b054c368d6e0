#pragma once

#include "packlim/rational.hpp"

#include <string>
#include <vector>

namespace packlim {

/// Axis-aligned brick in reference pose: [0, dims_1] x ... x [0, dims_n],
/// one vertex at the origin. Zero extents are allowed in custom collections
/// (degenerate bricks with empty interior); Moser pieces are always positive.
struct Piece {
  int id = 0;
  std::vector<Rat> dims;

  int dim() const { return static_cast<int>(dims.size()); }
  Rat volume() const;
  /// Euclidean diameter (= norm of the far corner, the farthest point from 0).
  double diameter() const;

  bool operator==(const Piece&) const = default;
};

enum class CollectionKind { moser_rectangles, moser_squares, custom };

std::string to_string(CollectionKind k);

/// Piece i of a Moser family: rectangles are 1/i x 1/(i+1) (i >= 1),
/// squares are 1/i x 1/i (i >= 2).
Piece moser_piece(CollectionKind kind, int i);

struct PieceCollection {
  CollectionKind kind = CollectionKind::custom;
  int truncation = 0; // N for the Moser kinds, piece count for custom
  std::vector<Piece> pieces;

  int dim() const { return pieces.empty() ? 0 : pieces.front().dim(); }
  const Piece* find(int id) const;
  bool operator==(const PieceCollection&) const = default;
};

PieceCollection moser_rectangles_collection(int n);
PieceCollection moser_squares_collection(int n);
PieceCollection custom_collection(std::vector<std::vector<Rat>> dims);

/// Exact partial sum of the piece areas of a Moser family up to index N.
Rat collection_area(CollectionKind kind, long long n);

} // namespace packlim
