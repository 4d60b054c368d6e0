#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "packlim/verify.hpp"
#include "support/random_gen.hpp"

#include <cmath>

using namespace packlim;
using testgen::Rng;

namespace {

Motion<Rat> translation(Rat x, Rat y) {
  return {Mat<Rat>::identity(2), {std::move(x), std::move(y)}};
}

Mat<double> rot(double angle) {
  Mat<double> m(2);
  m(0, 0) = std::cos(angle);
  m(0, 1) = -std::sin(angle);
  m(1, 0) = std::sin(angle);
  m(1, 1) = std::cos(angle);
  return m;
}

ExactCertificate four_square_tiling() {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(1)},
                                    {Rat(1), Rat(1)}});
  c.target = brick_target({Rat(2), Rat(2)});
  c.placements = {{1, translation(0, 0)},
                  {2, translation(1, 0)},
                  {3, translation(0, 1)},
                  {4, translation(1, 1)}};
  return c;
}

[[maybe_unused]] double to_double_scalar(const Rat& r) { return to_double(r); }
double to_double_scalar(double d) { return d; }

// Monte-Carlo oracle: overlap iff a sampled point is interior to two pieces,
// containment violation iff a piece sample escapes the target.
template <class S>
bool oracle_finds_violation(const Certificate<S>& cert, Rng& rng, int samples_per_piece,
                            double resolution) {
  for (const auto& p : cert.placements) {
    const Piece& piece = *cert.collection.find(p.piece_id);
    for (int s = 0; s < samples_per_piece; ++s) {
      std::vector<double> ref(cert.dim);
      for (int m = 0; m < cert.dim; ++m)
        ref[m] = testgen::uniform(rng, resolution, to_double(piece.dims[m]) - resolution);
      std::vector<double> world(cert.dim, 0.0);
      for (int m = 0; m < cert.dim; ++m) {
        world[m] = to_double_scalar(p.motion.xi[m]);
        for (int k = 0; k < cert.dim; ++k)
          world[m] += to_double_scalar(p.motion.theta(m, k)) * ref[k];
      }
      if (!membership(cert.target, world)) return true;
      for (const auto& q : cert.placements) {
        if (q.piece_id == p.piece_id) continue;
        const Piece& other = *cert.collection.find(q.piece_id);
        // pull back through q's motion (theta orthogonal: inverse = transpose)
        std::vector<double> rel(cert.dim, 0.0);
        for (int m = 0; m < cert.dim; ++m)
          for (int k = 0; k < cert.dim; ++k)
            rel[m] += to_double_scalar(q.motion.theta(k, m)) *
                      (world[k] - to_double_scalar(q.motion.xi[k]));
        bool interior = true;
        for (int m = 0; m < cert.dim; ++m)
          if (rel[m] <= resolution || rel[m] >= to_double(other.dims[m]) - resolution)
            interior = false;
        if (interior) return true;
      }
    }
  }
  return false;
}

} // namespace

TEST_CASE("interiors_disjoint: shared edge counts as disjoint, offset overlaps") {
  Piece unit{1, {Rat(1), Rat(1)}};
  auto id = Mat<Rat>::identity(2);
  CHECK(interiors_disjoint(Motion<Rat>{id, {0, 0}}, unit, Motion<Rat>{id, {1, 0}}, unit) ==
        Trit::yes);
  CHECK(interiors_disjoint(Motion<Rat>{id, {0, 0}}, unit, Motion<Rat>{id, {rat(1, 2), 0}},
                           unit) == Trit::no);
}

TEST_CASE("interiors_disjoint: 45-degree rotated square vs axis square") {
  Piece unit{1, {Rat(1), Rat(1)}};
  Motion<double> at_origin = Motion<double>::identity(2);
  double c = std::sqrt(0.5);

  // square rotated 45 degrees, centered at (cx, 0.5): xi = center - theta*(0.5,0.5)
  auto rotated_at = [&](double cx) {
    Motion<double> m;
    m.theta = rot(std::numbers::pi / 4);
    m.xi = {cx - 0.0, 0.5 - c};
    return m;
  };

  // center 1.75: leftmost point 1.75 - sqrt(1/2) ~ 1.043 > 1 -> disjoint
  CHECK(interiors_disjoint(at_origin, unit, rotated_at(1.75), unit) == Trit::yes);
  // center 1.70: leftmost ~ 0.993 < 1 -> overlap
  CHECK(interiors_disjoint(at_origin, unit, rotated_at(1.70), unit) == Trit::no);
}

TEST_CASE("interiors_disjoint: 3-D bricks, axis and rotated") {
  Piece box{1, {Rat(1), Rat(1), Rat(1)}};
  auto id3 = Mat<Rat>::identity(3);
  CHECK(interiors_disjoint(Motion<Rat>{id3, {0, 0, 0}}, box, Motion<Rat>{id3, {1, 0, 0}}, box) ==
        Trit::yes);
  CHECK(interiors_disjoint(Motion<Rat>{id3, {0, 0, 0}}, box,
                           Motion<Rat>{id3, {rat(1, 2), rat(1, 2), rat(1, 2)}}, box) == Trit::no);

  // rotation about z by 45 deg, pushed away along x
  Motion<double> a = Motion<double>::identity(3);
  Motion<double> b;
  b.theta = Mat<double>::identity(3);
  double c45 = std::cos(std::numbers::pi / 4);
  b.theta(0, 0) = c45;
  b.theta(0, 1) = -c45;
  b.theta(1, 0) = c45;
  b.theta(1, 1) = c45;
  b.xi = {2.5, 0.0, 0.0};
  Piece box2{2, {Rat(1), Rat(1), Rat(1)}};
  CHECK(interiors_disjoint(a, box, b, box2) == Trit::yes);
  b.xi = {1.2, 0.5, 0.5};
  CHECK(interiors_disjoint(a, box, b, box2) == Trit::no);
}

TEST_CASE("interiors_disjoint: zero-volume piece is disjoint from anything") {
  Piece segment{1, {Rat(0), Rat(1)}};
  Piece unit{2, {Rat(1), Rat(1)}};
  auto id = Mat<Rat>::identity(2);
  CHECK(interiors_disjoint(Motion<Rat>{id, {rat(1, 2), 0}}, segment, Motion<Rat>{id, {0, 0}},
                           unit) == Trit::yes);
}

TEST_CASE("interiors_disjoint rejects rotated pieces above 3 dimensions") {
  Piece p4{1, {Rat(1), Rat(1), Rat(1), Rat(1)}};
  Motion<double> m = Motion<double>::identity(4);
  Motion<double> r = m;
  double cc = std::cos(0.3), ss = std::sin(0.3);
  r.theta(0, 0) = cc;
  r.theta(0, 1) = -ss;
  r.theta(1, 0) = ss;
  r.theta(1, 1) = cc;
  CHECK_THROWS(interiors_disjoint(m, p4, r, p4));
  // axis-aligned 4-D works in any dimension
  Motion<double> t = m;
  t.xi[0] = 1.0;
  CHECK(interiors_disjoint(m, p4, t, p4) == Trit::yes);
}

TEST_CASE("verify_packing: 2x2 tiling, overlap injection, coverage") {
  ExactCertificate tiling = four_square_tiling();
  VerificationReport rep = verify_packing(tiling);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(*rep.coverage_exact == 1);
  CHECK(is_tiling(rep));
  CHECK(!rep.partial);

  ExactCertificate bad = tiling;
  bad.placements[1].motion.xi = {rat(1, 2), 0};
  VerificationReport rep2 = verify_packing(bad);
  CHECK(rep2.verdict == Verdict::invalid);
  REQUIRE(!rep2.violations.empty());
  bool found = false;
  for (const auto& v : rep2.violations)
    if (v.kind == Violation::Kind::overlap && v.i == 1 && v.j == 2) found = true;
  CHECK(found);
  CHECK(!is_tiling(rep2));
}

TEST_CASE("verify_packing: single square in a 2x2 target has ratio 1/4") {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{Rat(1), Rat(1)}});
  c.target = brick_target({Rat(2), Rat(2)});
  c.placements = {{1, translation(0, 0)}};
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(*rep.coverage_exact == rat(1, 4));
  CHECK(!is_tiling(rep));
}

TEST_CASE("verify_packing flags containment violations") {
  ExactCertificate c = four_square_tiling();
  c.target = brick_target({Rat(2), rat(3, 2)});
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::invalid);
  int containment = 0;
  for (const auto& v : rep.violations)
    if (v.kind == Violation::Kind::containment) ++containment;
  CHECK(containment == 2); // pieces 3 and 4 poke out the top
}

TEST_CASE("mode semantics: reflection and rotation placements") {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::general;
  c.collection = custom_collection({{rat(1, 2), rat(1, 3)}});
  c.target = brick_target({Rat(2), Rat(2)});
  Mat<Rat> reflection(2); // det -1
  reflection(0, 1) = 1;
  reflection(1, 0) = 1;
  c.placements = {{1, Motion<Rat>{reflection, {rat(1, 2), rat(1, 2)}}}};

  CHECK(verify_packing_as(c, Mode::general).verdict == Verdict::valid);
  VerificationReport oriented = verify_packing_as(c, Mode::oriented);
  CHECK(oriented.verdict == Verdict::invalid);
  REQUIRE(oriented.violations.size() == 1);
  CHECK(oriented.violations[0].kind == Violation::Kind::mode);
  CHECK(oriented.violations[0].i == 1);

  Mat<Rat> rot90(2); // det +1 but not the identity
  rot90(0, 1) = -1;
  rot90(1, 0) = 1;
  c.placements = {{1, Motion<Rat>{rot90, {Rat(1), rat(1, 2)}}}};
  CHECK(verify_packing_as(c, Mode::oriented).verdict == Verdict::valid);
  CHECK(verify_packing_as(c, Mode::translated).verdict == Verdict::invalid);
}

TEST_CASE("mode monotonicity: translated => oriented => general") {
  Rng rng(77);
  for (int it = 0; it < 50; ++it) {
    ExactCertificate c;
    c.dim = 2;
    c.mode = Mode::translated;
    c.collection = custom_collection(
        {{rat(1 + rng() % 4, 4), rat(1 + rng() % 4, 4)}, {rat(1 + rng() % 4, 4), rat(1 + rng() % 4, 4)}});
    c.target = brick_target({Rat(3), Rat(3)});
    c.placements = {{1, translation(rat(rng() % 8, 4), rat(rng() % 8, 4))},
                    {2, translation(rat(rng() % 8, 4), rat(rng() % 8, 4))}};
    auto tr = verify_packing_as(c, Mode::translated);
    auto ori = verify_packing_as(c, Mode::oriented);
    auto gen = verify_packing_as(c, Mode::general);
    if (tr.verdict == Verdict::valid) CHECK(ori.verdict == Verdict::valid);
    if (ori.verdict == Verdict::valid) CHECK(gen.verdict == Verdict::valid);
  }
}

TEST_CASE("touching boundaries: axis-aligned face contact is always disjoint") {
  Rng rng(88);
  for (int it = 0; it < 100; ++it) {
    Piece a{1, {rat(1 + rng() % 9, 3), rat(1 + rng() % 9, 3)}};
    Piece b{2, {rat(1 + rng() % 9, 3), rat(1 + rng() % 9, 3)}};
    Rat y_off = rat(static_cast<long long>(rng() % 11) - 5, 7);
    auto id = Mat<Rat>::identity(2);
    // b placed exactly against a's right face
    CHECK(interiors_disjoint(Motion<Rat>{id, {0, 0}}, a, Motion<Rat>{id, {a.dims[0], y_off}},
                             b) == Trit::yes);
  }
}

TEST_CASE("subset target monotonicity: valid for C stays valid for D containing C") {
  ExactCertificate c = four_square_tiling();
  CHECK(verify_packing(c).verdict == Verdict::valid);
  c.target = brick_target({Rat(3), rat(5, 2)});
  CHECK(verify_packing(c).verdict == Verdict::valid);
}

TEST_CASE("partial certificates verify the placed subset and are flagged") {
  ExactCertificate c = four_square_tiling();
  c.placements.pop_back();
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(rep.partial);
  CHECK(*rep.coverage_exact == rat(3, 4));
}

TEST_CASE("float verification: exact-dyadic tiling is certified valid") {
  FloatCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(1)},
                                    {Rat(1), Rat(1)}});
  c.target = brick_target({Rat(2), Rat(2)});
  auto tr = [](double x, double y) {
    Motion<double> m = Motion<double>::identity(2);
    m.xi = {x, y};
    return m;
  };
  c.placements = {{1, tr(0, 0)}, {2, tr(1, 0)}, {3, tr(0, 1)}, {4, tr(1, 1)}};
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(rep.slack_used == 0);
  CHECK(is_tiling(rep));
}

TEST_CASE("float verification: sub-slack margins come back indeterminate") {
  FloatCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{rat(1, 3), rat(1, 3)}});
  c.target = brick_target({rat(1, 3), rat(1, 3)});
  c.placements = {{1, Motion<double>::identity(2)}};
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::indeterminate);
  CHECK(rep.slack_used > 0);
}

TEST_CASE("verifier agrees with the Monte-Carlo oracle on random certificates") {
  Rng rng(990);
  int decisive = 0;
  for (int it = 0; it < 120; ++it) {
    FloatCertificate c;
    c.dim = 2;
    c.mode = Mode::general;
    int k = 2 + static_cast<int>(rng() % 3);
    std::vector<std::vector<Rat>> dims;
    for (int i = 0; i < k; ++i) dims.push_back({rat(2 + rng() % 6, 8), rat(2 + rng() % 6, 8)});
    c.collection = custom_collection(dims);
    c.target = brick_target({Rat(2), Rat(2)});
    for (int i = 0; i < k; ++i) {
      Motion<double> m;
      m.theta = (rng() & 1) ? testgen::random_rotation(rng, 2)
                            : testgen::random_signed_permutation<double>(rng, 2);
      m.xi = testgen::random_point(rng, 2, 0.0, 1.6);
      c.placements.push_back({i + 1, m});
    }
    VerificationReport rep = verify_packing(c);
    if (rep.verdict == Verdict::indeterminate) continue;
    ++decisive;
    bool oracle = oracle_finds_violation(c, rng, 4000, 1e-7);
    if (rep.verdict == Verdict::valid) CHECK(!oracle);
    // invalid certificates: the oracle may miss thin violations; only insist
    // on agreement when the margin is clearly inside its resolution
    if (rep.verdict == Verdict::invalid) {
      double worst = 0;
      for (const auto& v : rep.violations) worst = std::min(worst, v.margin);
      if (worst < -1e-3) CHECK(oracle);
    }
  }
  CHECK(decisive > 80);
}

TEST_CASE("is_tiling rejects infinite-volume targets") {
  ExactCertificate c;
  c.dim = 2;
  c.mode = Mode::translated;
  c.collection = custom_collection({{Rat(1), Rat(1)}});
  c.target = homothet_target(funnel_target(), Rat(2));
  c.placements = {{1, translation(Rat(4), Rat(-1) / 2)}};
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(rep.infinite_volume);
  CHECK_THROWS(is_tiling(rep));
}
