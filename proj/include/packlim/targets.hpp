#pragma once

#include "packlim/fpbound.hpp"
#include "packlim/motion.hpp"
#include "packlim/pieces.hpp"
#include "packlim/rational.hpp"

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace packlim {

struct Target;

struct BrickShape {
  std::vector<Rat> dims;
};
struct BallShape {
  int dim = 0;
  Rat radius;
};
/// Unbounded fixture {(x,y) : 1 <= x, |y| <= 1 - 1/x}.
struct FunnelShape {};
/// lambda * base, dilation about the origin.
struct HomothetShape {
  std::shared_ptr<const Target> base;
  Rat lambda;
};

struct Target {
  std::variant<BrickShape, BallShape, HomothetShape, FunnelShape> shape;

  int dim() const;
  bool bounded() const;
};

Target brick_target(std::vector<Rat> dims);
Target ball_target(int dim, Rat radius);
Target homothet_target(Target base, Rat lambda);
Target funnel_target();

bool target_equal(const Target& a, const Target& b);

/// Homothets flattened into scaled base parameters (dilations about 0 compose
/// multiplicatively, so any nest collapses to one scale factor).
struct ResolvedTarget {
  enum class Kind { brick, ball, funnel };
  Kind kind = Kind::brick;
  int dim = 0;
  std::vector<Rat> dims; // brick
  Rat radius;            // ball
  Rat scale = 1;         // funnel
};

ResolvedTarget resolve(const Target& t);
ResolvedTarget scale_resolved(ResolvedTarget r, const Rat& lambda);

bool membership(const Target& t, const std::vector<Rat>& x);
/// Membership of a double point, decided exactly (doubles are rationals).
bool membership(const Target& t, const std::vector<double>& x);

struct ClearanceResult {
  double value = 0; // sup { eps : the open eps-ball around x misses the target }
  bool inside = false;
};

ClearanceResult clearance(const Target& t, const std::vector<double>& x);
ClearanceResult clearance_resolved(const ResolvedTarget& r, const std::vector<double>& x);

struct ExclusionIndex {
  int k = 0;
  double epsilon = 0;
};

/// Smallest k = floor(2|x|/eps) + 1 such that the eps/2-ball around the
/// outside point x misses every homothet (1+1/j) * target with j >= k.
ExclusionIndex homothet_exclusion_index(const Target& t, const std::vector<double>& x);

/// Checks dist(x, (1+1/j) * target) >= eps/2 for one j.
bool exclusion_holds(const Target& t, const std::vector<double>& x, double eps, long long j);

bool has_finite_volume(const Target& t);
/// Exact volume when it is rational (bricks and their homothets).
std::optional<Rat> exact_volume(const Target& t);
/// Volume in double for any bounded target (balls use the Gamma formula).
double approx_volume(const Target& t);

struct Box {
  std::vector<Rat> lo, hi;
};
Box bounding_box(const Target& t); // throws for unbounded targets

template <class S>
struct CheckResult {
  Trit ok = Trit::unknown;
  double margin = 0; // smallest signed margin seen (diagnostic; mixed scales)
  double radius = 0; // largest certified error radius used in the decision
};

/// Whether sigma(piece) is contained in the (convex) target, decided on the
/// vertices of the image. Exact scalars give exact verdicts; doubles give a
/// certified yes/no/unknown.
template <class S>
CheckResult<S> contains_piece(const Target& t, const Motion<S>& sigma, const Piece& piece);

} // namespace packlim
