/**
 * The delta-ring layer for the monomial Frobenius lift: the operation
 * Delta_1(a) = (a^p - phi(a)) / p on Z/p^2 coefficients, the key element
 * Delta_1(f^{p-1}), and the ladder
 *
 *   f_1 = f^{p-1},   f_h = f^{p-1} * Delta_1(f^{p-1})^{1 + p + ... + p^{h-2}}
 *
 * of element-criterion test polynomials, computed modulo p with optional
 * sound truncation caps.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfs/ring.hpp"

namespace qfs {

/**
 * A hypersurface lift f = f0 + p*G held at modulus p^2.  The reduction of f
 * modulo p equals the reduction of f0 and must be nonzero (so that p, f is a
 * regular sequence).
 */
struct LiftSpec {
  uint32_t p;
  Poly f0;    // level 2
  Poly G;     // level 2
  Poly f;     // f0 + p*G, level 2
  Poly fbar;  // f mod p, level 1

  LiftSpec(uint32_t p, const Poly& f0, const Poly& G);

  /** Convenience: parses f0 and G from expression strings. */
  static LiftSpec parse(uint32_t p, const std::string& f0_text, const std::string& G_text);
};

/**
 * delta_1(g) = (g^p - phi(g)) / p for g at modulus p^2: computes both parts
 * exactly at level 2, verifies every coefficient of the difference is
 * divisible by p, divides, and returns the level-1 result.
 */
Poly delta1(const Poly& g);

/**
 * The ladder f_1 .. f_{h_max} over F_p together with the shared element
 * dfp = Delta_1(f^{p-1}).  When a cap level E is supplied, every entry is
 * reduced modulo (x^{p^E}, y^{p^E}, z^{p^E}) during accumulation; this is
 * sound for membership tests modulo any ideal containing that Frobenius
 * power.  Entries satisfy f_{h+1} = f_h * dfp^{p^{h-1}} mod p.
 */
struct FhLadder {
  uint32_t p;
  std::optional<uint32_t> cap_level;
  Poly dfp;                  // Delta_1(f^{p-1}) over F_p
  std::vector<Poly> entries; // entries[h-1] = f_h over F_p

  const Poly& fh(uint32_t h) const;
};

FhLadder fh_ladder(const LiftSpec& spec, uint32_t h_max,
                   std::optional<uint32_t> cap_level = std::nullopt);

/** Extends an existing ladder in place up to a new h_max (same cap). */
void extend_fh_ladder(FhLadder& ladder, const LiftSpec& spec, uint32_t h_max);

}  // namespace qfs
