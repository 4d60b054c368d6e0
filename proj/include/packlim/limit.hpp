#pragma once

#include "packlim/certificate.hpp"
#include "packlim/verify.hpp"

#include <optional>
#include <vector>

namespace packlim {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An ordered run of certificates sharing collection, mode and dimension,
/// each valid for its own target; `bound` is a brick known to contain every
/// target (absent when the targets are unbounded, in which case clustering
/// starts from the observed spread).
template <class S>
struct PackingSequence {
  std::vector<Certificate<S>> entries;
  std::optional<Box> bound;
};

template <class S>
PackingSequence<S> make_sequence(std::vector<Certificate<S>> entries);

template <class S>
struct LimitReport {
  std::vector<int> kept_indices; // 0-based positions into the input sequence
  Certificate<S> limit;
  Target limit_target;
  double cluster_diameter = 0;
  double certified_slack = 0;
  VerificationReport verdict;
  bool xi_in_bound = true; // limit translations inside the bound brick
};

/// Largest-cluster refinement over the product metric max_i d(sigma_i,
/// sigma_i'), halving the tolerance from the spread down to `tol`; the limit
/// certificate is the coordinate-wise centroid of the surviving cluster with
/// rotations re-projected to the orthogonal group. Throws DivergenceError
/// when fewer than `min_keep` entries survive.
template <class S>
LimitReport<S> extract_convergent_subsequence(const PackingSequence<S>& seq, double tol,
                                              int min_keep,
                                              std::optional<Target> declared_target = {});

/// The limit target of a shrinking homothet family (1+1/j)C is C itself.
/// Throws for unbounded bases.
Target limit_target_homothet(const Target& base);

struct BrickLimit {
  Rat volume;             // smallest observed volume
  std::vector<Rat> dims;  // per-coordinate sup over the tail window
  int window = 0;         // effective tail length used
};

/// Limit-brick estimate from a sequence of brick dimension vectors: restrict
/// to the subsequence with non-increasing running-minimum volume, take the
/// smallest volume and the per-coordinate maxima over its last `window`
/// entries (a finite-tail stand-in for the limsup).
BrickLimit brick_limit(const std::vector<std::vector<Rat>>& dims_seq, int window);

/// Uniform bound vol_b1 / eta^(n-1) on every brick dimension when some piece
/// contains an open eta-ball and volumes are non-increasing.
double case1_dim_bound(double eta, double vol_b1, int n);

/// Coordinate-wise min(dims, diam_b1).
std::vector<double> clip_brick(std::vector<double> dims, double diam_b1);

/// Replace the translation so that sigma(piece) sits against the coordinate
/// planes of the nonnegative orthant: xi'_m = -inf of coordinate m over
/// theta(piece).
template <class S>
Motion<S> orthant_shift(const Motion<S>& sigma, const Piece& piece);

} // namespace packlim
