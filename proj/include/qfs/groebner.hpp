/**
 * Buchberger Groebner-basis engine over F_p[x, y, z] (plus one elimination
 * variable), supplying normal forms, ideal membership and equality,
 * Frobenius powers of ideals, and colon ideals.
 *
 * The engine uses the sugar selection strategy with the coprime-leading-term
 * and chain criteria for pair elimination.  The unique reduced basis (monic,
 * interreduced, deterministically sorted) is the equality certificate;
 * hashing it detects repeated states in iterated constructions.  A
 * configurable total-degree ceiling turns runaway computations into hard
 * errors rather than silent truncations.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qfs/ring.hpp"

namespace qfs {

struct GbConfig {
  /** Hard error when any basis element or intermediate remainder exceeds
   *  this total degree. */
  uint64_t degree_ceiling = 4096;
  /** Hard error when a single polynomial accumulates more terms than this. */
  std::size_t term_limit = 2'000'000;
};

/**
 * A finitely generated ideal of F_p[x, y, z(, t)] with a lazily computed,
 * cached reduced Groebner basis.  Construction canonicalizes the generator
 * list (coefficients reduced, zeros dropped, duplicates removed, sorted), so
 * ideals built from permuted or duplicated generator lists compare equal.
 */
class IdealFp {
 public:
  IdealFp(uint32_t p, std::vector<Poly> generators,
          MonomialOrder order = MonomialOrder::kGrevlex);

  /** The ideal (x, y, z). */
  static IdealFp maximal(uint32_t p);
  /** An ideal with a precomputed reduced basis (trusted, not recomputed). */
  static IdealFp with_basis(uint32_t p, std::vector<Poly> reduced_basis,
                            MonomialOrder order = MonomialOrder::kGrevlex);

  uint32_t p() const { return p_; }
  MonomialOrder order() const { return order_; }
  const std::vector<Poly>& generators() const { return generators_; }
  bool has_cached_gb() const { return static_cast<bool>(gb_); }

  /** The unique reduced Groebner basis; computed on first use and cached. */
  const std::vector<Poly>& reduced_gb(const GbConfig& config = {}) const;

  /** True when every generator is a single term. */
  bool all_generators_monomial() const;

 private:
  uint32_t p_;
  MonomialOrder order_;
  std::vector<Poly> generators_;
  mutable std::shared_ptr<const std::vector<Poly>> gb_;
};

/** Reduced Groebner basis of a generator list (standalone entry point). */
std::vector<Poly> buchberger_reduced(const std::vector<Poly>& generators, uint32_t p,
                                     MonomialOrder order, const GbConfig& config = {});

/** Multivariate division remainder against the reduced basis of I.
 *  Zero exactly when g lies in I; idempotent; F_p-linear in g. */
Poly normal_form(const Poly& g, const IdealFp& I, const GbConfig& config = {});

/** Membership via normal form. */
bool ideal_member(const Poly& g, const IdealFp& I, const GbConfig& config = {});

/** Equality via identical reduced bases. */
bool ideal_equal(const IdealFp& I, const IdealFp& J, const GbConfig& config = {});

/** Entrywise containment I <= J via normal forms of I's generators. */
bool ideal_contained_in(const IdealFp& I, const IdealFp& J, const GbConfig& config = {});

/**
 * Containment in the monomial ideal (x^{p^E}, y^{p^E}, z^{p^E}).  Needs no
 * Groebner basis: an ideal is contained in a monomial ideal exactly when
 * every monomial of every generator is.
 */
bool ideal_contained_in_monomial(const IdealFp& I, const FrobPowerIdeal& F);

/**
 * The Frobenius power I^{[p^e]}, generated by the p^e-th powers of the
 * generators.  Over F_p this is entrywise exponent scaling, and the scaled
 * reduced basis of I is again the reduced basis of the result, so no new
 * basis computation happens when I's basis is cached.
 */
IdealFp frobenius_power(const IdealFp& I, uint32_t e, const GbConfig& config = {});

/**
 * The colon ideal (I : g) = { h | h*g in I }, computed by eliminating the
 * auxiliary variable t from t*I + (1-t)*(g) to obtain I /\ (g), then
 * dividing each generator exactly by g.
 */
IdealFp colon_ideal(const IdealFp& I, const Poly& g, const GbConfig& config = {});

/** Exact polynomial quotient a / b; internal error if b does not divide a. */
Poly poly_divide_exact(const Poly& a, const Poly& b);

/** FNV-1a hash of the canonical reduced basis (cycle detection aid). */
uint64_t ideal_hash(const IdealFp& I, const GbConfig& config = {});

/** Canonical serialization: the reduced basis as rendered strings. */
std::vector<std::string> ideal_to_strings(const IdealFp& I, const GbConfig& config = {});

}  // namespace qfs
