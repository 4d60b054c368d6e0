#pragma once

#include "packlim/certificate.hpp"

#include <optional>
#include <vector>

namespace packlim {

enum class Verdict { valid, invalid, indeterminate };

std::string to_string(Verdict v);

struct Violation {
  enum class Kind { containment, overlap, mode };
  Kind kind = Kind::containment;
  int i = 0; // piece id
  int j = 0; // second piece id for overlaps
  double margin = 0;
};

struct VerificationReport {
  Verdict verdict = Verdict::indeterminate;
  std::vector<Violation> violations;
  /// Placed volume over target volume; exact when the target volume is
  /// rational (bricks and their homothets), approximate otherwise.
  std::optional<Rat> coverage_exact;
  double coverage = 0;
  double slack_used = 0;
  bool partial = false;
  bool infinite_volume = false;

  bool valid() const { return verdict == Verdict::valid; }
};

/// Open-interior disjointness of two placed bricks; shared boundary counts as
/// disjoint. Axis-aligned images reduce to interval overlap in any dimension;
/// rotated images use a separating-axis test (n <= 3).
template <class S>
Trit interiors_disjoint(const Motion<S>& sigma1, const Piece& piece1, const Motion<S>& sigma2,
                        const Piece& piece2);

template <class S>
VerificationReport verify_packing(const Certificate<S>& cert);

VerificationReport verify_packing(const AnyCertificate& cert);

/// Verify against an overriding mode (the certificate's own mode otherwise).
template <class S>
VerificationReport verify_packing_as(const Certificate<S>& cert, Mode mode);

/// True iff the packing is valid and fills the target exactly (volume
/// criterion, exact rational). Throws for infinite-volume targets.
bool is_tiling(const VerificationReport& report);

} // namespace packlim
