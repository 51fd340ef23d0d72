#include <doctest.h>

#include <random>

#include "qfs/delta.hpp"
#include "qfs/ring.hpp"
#include "support/oracle.hpp"

using namespace qfs;

TEST_CASE("delta1 on fixed inputs") {
  CHECK(delta1(parse_poly("x+y", 2, 2)) == parse_poly("x*y", 2, 1));
  CHECK(delta1(parse_poly("x+y", 3, 2)) == parse_poly("x^2*y+x*y^2", 3, 1));
  CHECK(delta1(parse_poly("x", 5, 2)).is_zero());  // monomials are phi-fixed
  CHECK(delta1(Poly::zero(2, 2)).is_zero());
}

TEST_CASE("the delta identity g^p = phi(g) + p*delta1(g) holds at level 2") {
  for (uint32_t p : {2u, 3u, 5u}) {
    std::mt19937_64 rng(31337 + p);
    for (int i = 0; i < 40; ++i) {
      Poly g1 = testing::random_poly(rng, p, 3, 5);
      Poly g = lift_coeffs_to_level2(g1);  // arbitrary level-2 residues below p
      g.add_term(Monomial{1, 1, 0, 0}, static_cast<int64_t>(p));  // mix in a p-multiple
      Poly lhs = poly_pow(g, p);
      Poly rhs = frobenius_lift(g) +
                 poly_scalar_mul(lift_coeffs_to_level2(delta1(g)), static_cast<int64_t>(p));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("lift specs assemble f = f0 + p*G and reject vanishing reductions") {
  LiftSpec spec = LiftSpec::parse(2, "z^2+x^3+y^5", "y^2");
  CHECK(spec.f == parse_poly("z^2+x^3+y^5+2*y^2", 2, 2));
  CHECK(spec.fbar == parse_poly("z^2+x^3+y^5", 2, 1));
  CHECK(spec.fbar.level() == 1);
  CHECK_THROWS(LiftSpec::parse(2, "2", "x"));
  CHECK_THROWS(LiftSpec::parse(2, "0", "0"));
}

TEST_CASE("dfp of fixed lifts") {
  LiftSpec e80 = LiftSpec::parse(2, "z^2+x^3+y^5", "0");
  CHECK(fh_ladder(e80, 1).dfp == parse_poly("x^3*y^5+x^3*z^2+y^5*z^2", 2, 1));

  LiftSpec d8 = LiftSpec::parse(2, "z^2+x^2*y+x*y^4", "0");
  CHECK(fh_ladder(d8, 1).dfp == parse_poly("x^2*y*z^2+x*y^4*z^2+x^3*y^5", 2, 1));
}

TEST_CASE("ladder entries satisfy the multiplicative recurrence") {
  LiftSpec spec = LiftSpec::parse(2, "z^2+x^3+y^5", "0");
  FhLadder ladder = fh_ladder(spec, 4);
  CHECK(ladder.fh(1) == spec.fbar);  // f^{p-1} = f at p = 2
  CHECK(ladder.fh(2) == poly_mul(ladder.fh(1), ladder.dfp));
  CHECK(ladder.fh(3) == poly_mul(ladder.fh(2), frobenius_scale(ladder.dfp, 2)));
  CHECK(ladder.fh(4) == poly_mul(ladder.fh(3), frobenius_scale(ladder.dfp, 4)));

  LiftSpec p3 = LiftSpec::parse(3, "z^2+x^3+y^4", "0");
  FhLadder l3 = fh_ladder(p3, 3);
  CHECK(l3.fh(1) == poly_mul(p3.fbar, p3.fbar));
  CHECK(l3.fh(2) == poly_mul(l3.fh(1), l3.dfp));
  CHECK(l3.fh(3) == poly_mul(l3.fh(2), frobenius_scale(l3.dfp, 3)));
}

TEST_CASE("caps truncate ladder entries soundly") {
  LiftSpec spec = LiftSpec::parse(2, "z^2+x^2*y+x*y^4+x*y^2*z", "0");
  FhLadder full = fh_ladder(spec, 4);
  FhLadder capped = fh_ladder(spec, 4, 3);
  for (uint32_t h = 1; h <= 4; ++h) {
    CHECK(capped.fh(h) == reduce_mod_frob_power(full.fh(h), 3));
  }
}

TEST_CASE("the ladder depends on G only through G mod p") {
  LiftSpec a = LiftSpec::parse(2, "z^2+x^3+x*y^3", "y^2");
  LiftSpec b = LiftSpec::parse(2, "z^2+x^3+x*y^3", "y^2+2*x");
  CHECK(fh_ladder(a, 3).dfp == fh_ladder(b, 3).dfp);
  CHECK(fh_ladder(a, 3).fh(3) == fh_ladder(b, 3).fh(3));
}

TEST_CASE("at p = 2 a lift perturbation shifts dfp by G^2") {
  Poly G1 = parse_poly("y^2", 2, 1);
  LiftSpec plain = LiftSpec::parse(2, "z^2+x^3+x*y^3", "0");
  LiftSpec moved = LiftSpec::parse(2, "z^2+x^3+x*y^3", "y^2");
  Poly expected = fh_ladder(plain, 1).dfp + poly_mul(G1, G1);
  CHECK(fh_ladder(moved, 1).dfp == expected);
}

TEST_CASE("ladders extend in place") {
  LiftSpec spec = LiftSpec::parse(3, "z^2+x^3+y^5", "0");
  FhLadder ladder = fh_ladder(spec, 1, 4);
  extend_fh_ladder(ladder, spec, 3);
  FhLadder fresh = fh_ladder(spec, 3, 4);
  CHECK(ladder.entries.size() == 3);
  for (uint32_t h = 1; h <= 3; ++h) CHECK(ladder.fh(h) == fresh.fh(h));
}

TEST_CASE("delta1 rejects level-1 input") {
  CHECK_THROWS(delta1(parse_poly("x", 2, 1)));
}
