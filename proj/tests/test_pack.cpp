#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "packlim/io.hpp"
#include "packlim/pack.hpp"
#include "packlim/verify.hpp"

using namespace packlim;

TEST_CASE("pack_moser_rectangles: N=1 fills the bottom strip of a unit square") {
  ExactCertificate c = pack_moser_rectangles(1, Rat(1));
  REQUIRE(c.placements.size() == 1);
  CHECK(c.placements[0].motion.xi == Vec<Rat>{0, 0});
  CHECK(verify_packing(c).verdict == Verdict::valid);
}

TEST_CASE("pack_moser_rectangles: N=3 hand-checked placements") {
  ExactCertificate c = pack_moser_rectangles(3, Rat(1));
  REQUIRE(c.placements.size() == 3);
  CHECK(c.placements[0].motion.xi == Vec<Rat>{0, 0});
  CHECK(c.placements[1].motion.xi == Vec<Rat>{0, rat(1, 2)});
  CHECK(c.placements[2].motion.xi == Vec<Rat>{rat(1, 2), rat(1, 2)});
  CHECK(c.mode == Mode::translated);
  CHECK(verify_packing(c).verdict == Verdict::valid);
}

TEST_CASE("pack_moser_rectangles: N=100 into side 21/20, exact coverage") {
  ExactCertificate c = pack_moser_rectangles(100, rat(21, 20));
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  CHECK(*rep.coverage_exact == rat(100, 101) / (rat(21, 20) * rat(21, 20)));
}

TEST_CASE("pack_moser_squares: N=2 and N=3 hand-checked") {
  ExactCertificate c2 = pack_moser_squares(2, rat(1, 2));
  REQUIRE(c2.placements.size() == 1);
  CHECK(c2.placements[0].motion.xi == Vec<Rat>{0, 0});
  CHECK(verify_packing(c2).verdict == Verdict::valid);

  ExactCertificate c3 = pack_moser_squares(3, rat(1, 2));
  REQUIRE(c3.placements.size() == 2);
  CHECK(c3.placements[0].motion.xi == Vec<Rat>{0, 0});
  CHECK(c3.placements[1].motion.xi == Vec<Rat>{0, rat(1, 2)});
  CHECK(verify_packing(c3).verdict == Verdict::valid);
}

TEST_CASE("pack_moser_squares: N=50 into width 13/20") {
  ExactCertificate c = pack_moser_squares(50, rat(13, 20));
  VerificationReport rep = verify_packing(c);
  CHECK(rep.verdict == Verdict::valid);
  // 13/20 exceeds the total area pi^2/6 - 1 = 0.6449... of the full family
  CHECK(rat(13, 20) > rat(6449, 10000));
}

TEST_CASE("capacity failure reports the first piece that does not fit") {
  // At width exactly 1/2 the 1/4-square has nowhere to go: 1/2+1/3+1/4 > 1
  // vertically and 1/3+1/4 > 1/2 horizontally.
  CHECK_THROWS_AS(pack_moser_squares(4, rat(1, 2)), CapacityError);
  try {
    pack_moser_squares(4, rat(1, 2));
  } catch (const CapacityError& e) {
    CHECK(e.piece_id == 4);
  }
}

TEST_CASE("packer determinism: byte-identical certificates") {
  auto a = serialize_certificate(AnyCertificate(pack_moser_rectangles(60, rat(107, 100))));
  auto b = serialize_certificate(AnyCertificate(pack_moser_rectangles(60, rat(107, 100))));
  CHECK(a == b);
}

TEST_CASE("free-gap conservation: gap area drops by exactly the placed area") {
  GuillotinePacker packer(rat(21, 20), rat(21, 20));
  Rat area = packer.total_gap_area();
  CHECK(area == rat(21, 20) * rat(21, 20));
  for (int i = 1; i <= 40; ++i) {
    Piece p = moser_piece(CollectionKind::moser_rectangles, i);
    REQUIRE(packer.place(p.dims[0], p.dims[1]));
    Rat next = packer.total_gap_area();
    CHECK(area - next == p.volume());
    area = next;
  }
  // gaps stay inside the target and pairwise interior-disjoint
  for (const Gap& g : packer.gaps()) {
    CHECK(g.x >= 0);
    CHECK(g.y >= 0);
    CHECK(g.x + g.w <= rat(21, 20));
    CHECK(g.y + g.h <= rat(21, 20));
  }
  const auto& gaps = packer.gaps();
  for (size_t i = 0; i < gaps.size(); ++i)
    for (size_t j = i + 1; j < gaps.size(); ++j) {
      bool sep = gaps[i].x + gaps[i].w <= gaps[j].x || gaps[j].x + gaps[j].w <= gaps[i].x ||
                 gaps[i].y + gaps[i].h <= gaps[j].y || gaps[j].y + gaps[j].h <= gaps[i].y;
      CHECK(sep);
    }
}

TEST_CASE("feasibility is monotone downward in N") {
  // The first N-1 placements of a run do not depend on piece N.
  ExactCertificate big = pack_moser_rectangles(64, rat(106, 100));
  ExactCertificate small = pack_moser_rectangles(63, rat(106, 100));
  REQUIRE(big.placements.size() == 64);
  for (size_t i = 0; i < small.placements.size(); ++i) {
    CHECK(small.placements[i].piece_id == big.placements[i].piece_id);
    CHECK(small.placements[i].motion.xi == big.placements[i].motion.xi);
  }
}

TEST_CASE("shrink_search: trivial cases") {
  ShrinkResult r = shrink_search(CollectionKind::moser_rectangles, 1, Rat(1), Rat(2), 20);
  CHECK(r.param <= Rat(1) + rat(1, 1000000)); // converges onto 1
  ShrinkResult s = shrink_search(CollectionKind::moser_squares, 2, rat(1, 2), Rat(1), 20);
  CHECK(s.param <= rat(1, 2) + rat(1, 1000000));
}

TEST_CASE("shrink_search: pinned deterministic result for rectangles N=100") {
  ShrinkResult r = shrink_search(CollectionKind::moser_rectangles, 100, Rat(1), rat(11, 10), 20);
  // regression pin: the heuristic reaches the last bisection cell above 1
  CHECK(r.param == Rat(1) + rat(1, 1048576) * rat(1, 10));
  CHECK(r.epsilon == doctest::Approx(to_double(r.param) - 1.0));
  ExactCertificate c = pack_moser_rectangles(100, r.param);
  CHECK(verify_packing(c).verdict == Verdict::valid);
}

TEST_CASE("shrink_search requires feasibility at hi") {
  CHECK_THROWS_AS(shrink_search(CollectionKind::moser_squares, 40, rat(1, 2), rat(13, 25), 8),
                  CapacityError);
}
