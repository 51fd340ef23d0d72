#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "qfs/groebner.hpp"
#include "qfs/ring.hpp"
#include "support/oracle.hpp"

using namespace qfs;

namespace {
IdealFp ideal2(std::initializer_list<const char*> gens) {
  std::vector<Poly> v;
  for (const char* g : gens) v.push_back(parse_poly(g, 2, 1));
  return IdealFp(2, v);
}
}  // namespace

TEST_CASE("reduced basis of a fixed binomial ideal over F_2") {
  IdealFp I = ideal2({"x*y+z^2", "x^2"});
  std::vector<std::string> basis = ideal_to_strings(I);
  std::vector<std::string> expected = {"x*y+z^2", "x^2", "x*z^2", "z^4"};
  CHECK(basis == expected);
  CHECK(I.has_cached_gb());
}

TEST_CASE("reduced basis of a fixed ideal over F_3") {
  IdealFp I(3, {parse_poly("x+y+z", 3, 1), parse_poly("x*y", 3, 1)});
  std::vector<std::string> expected = {"x+y+z", "y^2+y*z"};
  CHECK(ideal_to_strings(I) == expected);
}

TEST_CASE("the reduced basis is independent of generator presentation") {
  IdealFp a = ideal2({"x*y+z^2", "x^2"});
  IdealFp b = ideal2({"x^2", "x*y+z^2", "x^2", "0"});
  IdealFp c = ideal2({"x^2", "x*y+z^2", "x^2+x*y+z^2"});
  CHECK(ideal_to_strings(a) == ideal_to_strings(b));
  CHECK(ideal_to_strings(a) == ideal_to_strings(c));
  CHECK(ideal_equal(a, b));
  CHECK(ideal_equal(a, c));
  CHECK(ideal_hash(a) == ideal_hash(b));
}

TEST_CASE("membership and normal forms") {
  IdealFp I = ideal2({"x*y+z^2", "x^2"});
  CHECK(ideal_member(parse_poly("x*z^4", 2, 1), I));
  CHECK(ideal_member(parse_poly("x^2*y+x*z^2", 2, 1), I));
  CHECK(!ideal_member(parse_poly("z^2", 2, 1), I));
  CHECK(!ideal_member(parse_poly("y", 2, 1), I));
  CHECK(normal_form(Poly::zero(2, 1), I).is_zero());

  // Idempotence and F_p-linearity of the normal form.
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Poly g = testing::random_poly(rng, 2, 5, 6);
    Poly h = testing::random_poly(rng, 2, 5, 6);
    Poly ng = normal_form(g, I);
    CHECK(normal_form(ng, I) == ng);
    CHECK(normal_form(g + h, I) == ng + normal_form(h, I));
  }
}

TEST_CASE("maximal ideal and trusted bases") {
  IdealFp m = IdealFp::maximal(3);
  std::vector<std::string> expected = {"z", "y", "x"};
  CHECK(ideal_to_strings(m) == expected);
  IdealFp trusted = IdealFp::with_basis(3, m.reduced_gb());
  CHECK(trusted.has_cached_gb());
  CHECK(ideal_equal(trusted, m));
}

TEST_CASE("containment tests") {
  CHECK(ideal_contained_in(ideal2({"x^2"}), ideal2({"x"})));
  CHECK(!ideal_contained_in(ideal2({"x"}), ideal2({"x^2"})));

  FrobPowerIdeal F{2, 1};
  CHECK(ideal_contained_in_monomial(ideal2({"x^2+y^2"}), F));
  CHECK(ideal_contained_in_monomial(ideal2({"x^2+y^2", "z^3"}), F));
  CHECK(!ideal_contained_in_monomial(ideal2({"x^2+y^2", "x*y"}), F));
}

TEST_CASE("Frobenius powers scale cached bases without recomputation") {
  IdealFp I(2, {parse_poly("x", 2, 1), parse_poly("y+z", 2, 1)});
  I.reduced_gb();
  IdealFp I2 = frobenius_power(I, 1);
  CHECK(I2.has_cached_gb());  // scaled basis installed directly
  CHECK(ideal_to_strings(I2) == std::vector<std::string>{"y^2+z^2", "x^2"});
  // Scratch recomputation agrees.
  IdealFp fresh(2, {parse_poly("x^2", 2, 1), parse_poly("y^2+z^2", 2, 1)});
  CHECK(ideal_equal(I2, fresh));

  IdealFp I4 = frobenius_power(I, 2);
  CHECK(ideal_member(parse_poly("x^4*z", 2, 1), I4));
  CHECK(!ideal_member(parse_poly("x^2", 2, 1), I4));
}

TEST_CASE("colon ideals on fixed examples") {
  IdealFp box = ideal2({"x^2", "y^2", "z^2"});
  IdealFp q = colon_ideal(box, parse_poly("x*y", 2, 1));
  CHECK(ideal_to_strings(q) == std::vector<std::string>{"y", "x", "z^2"});

  IdealFp box4 = ideal2({"x^4", "y^4", "z^4"});
  IdealFp q2 = colon_ideal(box4, parse_poly("x^3*y^2", 2, 1));
  CHECK(ideal_equal(q2, ideal2({"x", "y^2", "z^4"})));

  // (f*g : g) = (f) in a domain.
  Poly f = parse_poly("x*y+z^2", 2, 1);
  Poly g = parse_poly("x+y", 2, 1);
  IdealFp prod(2, {poly_mul(f, g)});
  CHECK(ideal_equal(colon_ideal(prod, g), IdealFp(2, {f})));

  // g in I gives the unit ideal.
  IdealFp unit = colon_ideal(ideal2({"x"}), parse_poly("x^2", 2, 1));
  CHECK(ideal_member(Poly::constant(2, 1, 1), unit));
}

TEST_CASE("exact division") {
  Poly a = parse_poly("x^2+y^2", 2, 1);
  Poly b = parse_poly("x+y", 2, 1);
  CHECK(poly_divide_exact(a, b) == b);
  CHECK(poly_divide_exact(parse_poly("x^2+x*y", 2, 1), parse_poly("x", 2, 1)) ==
        parse_poly("x+y", 2, 1));
  CHECK_THROWS_AS(poly_divide_exact(parse_poly("x^2+y", 2, 1), b), InternalError);
}

TEST_CASE("degree ceilings turn runaway bases into hard errors") {
  GbConfig tight;
  tight.degree_ceiling = 3;
  IdealFp I = ideal2({"x*y+z^2", "x^2"});  // needs z^4 in its basis
  CHECK_THROWS_AS(I.reduced_gb(tight), LimitError);
}

TEST_CASE("membership agrees with the span oracle on random small ideals") {
  for (uint32_t p : {2u, 3u}) {
    std::mt19937_64 rng(991100 + p);
    std::uniform_int_distribution<int> ngens(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<Poly> gens;
      int k = ngens(rng);
      for (int i = 0; i < k; ++i) gens.push_back(testing::random_poly(rng, p, 3, 4));
      IdealFp I(p, gens);

      // A synthesized member must test positive.
      Poly combo = Poly::zero(p, 1);
      for (const Poly& g : gens) {
        combo = combo + poly_mul(testing::random_poly(rng, p, 2, 3), g);
      }
      CHECK(ideal_member(combo, I));

      // A random probe: the two deciders agree (span bound escalates).
      Poly probe = testing::random_poly(rng, p, 4, 5);
      bool by_gb = ideal_member(probe, I);
      bool by_span = false;
      for (uint32_t bound : {6u, 8u, 10u}) {
        if (testing::member_bounded(gens, probe, p, bound)) {
          by_span = true;
          break;
        }
      }
      CHECK(by_gb == by_span);
    }
  }
}
