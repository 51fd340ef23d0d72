/**
 * Exact coefficient arithmetic in Z/p and Z/p^2, sparse multivariate
 * polynomials in x, y, z (plus one auxiliary elimination variable), the
 * monomial Frobenius lift, Frobenius powers of the maximal ideal, and a
 * polynomial expression parser.
 *
 * All values are immutable after construction and all operations are pure,
 * so they are safe to share across threads read-only.
 */
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfs {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/** Exponent or scale arithmetic left the 32-bit range. */
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

/** Expression text violates the polynomial grammar. */
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/** Two operands carry different coefficient moduli. */
struct ModulusMismatchError : std::runtime_error {
  explicit ModulusMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/** A configurable computational limit was exceeded (degree ceiling, term
 *  count, colength bound).  Results are never silently truncated. */
struct LimitError : std::runtime_error {
  explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

/** An internal consistency check failed; indicates a bug, not bad input. */
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

/**
 * A residue modulo p^N with N in {1, 2}.  Arithmetic is exact modulo p^N.
 * Polynomials store bare residues and carry the shared modulus themselves;
 * this struct is the value-with-modulus view used at API boundaries.
 */
struct Coeff {
  uint32_t value;    // 0 <= value < modulus
  uint32_t modulus;  // p^N
};

uint32_t coeff_add(uint32_t a, uint32_t b, uint32_t modulus);
uint32_t coeff_sub(uint32_t a, uint32_t b, uint32_t modulus);
uint32_t coeff_mul(uint32_t a, uint32_t b, uint32_t modulus);
uint32_t coeff_neg(uint32_t a, uint32_t modulus);
/** Multiplicative inverse modulo a prime p; error if a == 0 mod p. */
uint32_t coeff_inv_mod_p(uint32_t a, uint32_t p);

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

inline constexpr int kNumVars = 4;  // x, y, z and the elimination variable t
inline constexpr int kVarX = 0;
inline constexpr int kVarY = 1;
inline constexpr int kVarZ = 2;
inline constexpr int kVarT = 3;

/** Exponent vector (x, y, z, t).  Exponents are 32-bit; overflow is checked. */
using Monomial = std::array<uint32_t, kNumVars>;

inline constexpr Monomial kMonomialOne{0, 0, 0, 0};

uint64_t total_degree(const Monomial& m);
bool mono_divides(const Monomial& a, const Monomial& b);  // a | b entrywise
Monomial mono_mul(const Monomial& a, const Monomial& b);  // checked add
Monomial mono_div(const Monomial& a, const Monomial& b);  // requires b | a
Monomial mono_lcm(const Monomial& a, const Monomial& b);
Monomial mono_scale(const Monomial& a, uint64_t s);  // entrywise multiply, checked
bool mono_coprime(const Monomial& a, const Monomial& b);

/**
 * Graded reverse lexicographic order on all four variables: compare total
 * degree first, then the rightmost differing exponent decides (larger
 * rightmost exponent sorts lower).  Restricting to monomials with t = 0
 * gives the standard three-variable order.
 */
bool grevlex_less(const Monomial& a, const Monomial& b);

/**
 * Block elimination order: total t-degree first, ties broken by grevlex.
 * Monomials free of t sort below all monomials involving t, so a Groebner
 * basis in this order intersects cleanly with the t-free subring.
 */
bool elim_less(const Monomial& a, const Monomial& b);

struct GrevlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_less(a, b); }
};

enum class MonomialOrder { kGrevlex, kElim };

bool mono_less(const Monomial& a, const Monomial& b, MonomialOrder order);

// ---------------------------------------------------------------------------
// Frobenius powers of the maximal ideal
// ---------------------------------------------------------------------------

/**
 * The monomial ideal (x^{p^E}, y^{p^E}, z^{p^E}).  A monomial lies in it
 * exactly when some x/y/z exponent reaches p^E.  Used as the pervasive
 * membership-test target and as a sound truncation cap for products.
 */
struct FrobPowerIdeal {
  uint32_t p;
  uint32_t level;  // E >= 0

  /** p^E, checked to fit the exponent range. */
  uint64_t q() const;
  bool contains(const Monomial& m) const;
};

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/**
 * Sparse polynomial with coefficients in Z/p^level (level in {1, 2}).
 * Canonical: no zero coefficient is stored, terms live in a grevlex-keyed
 * map, so equal polynomials have identical representations.
 */
class Poly {
 public:
  using TermMap = std::map<Monomial, uint32_t, GrevlexLess>;

  Poly(uint32_t p, uint32_t level);

  static Poly zero(uint32_t p, uint32_t level);
  static Poly constant(uint32_t p, uint32_t level, int64_t c);
  static Poly variable(uint32_t p, uint32_t level, int var_index);
  static Poly from_monomial(uint32_t p, uint32_t level, const Monomial& m, int64_t c = 1);

  uint32_t p() const { return p_; }
  uint32_t level() const { return level_; }
  uint32_t modulus() const { return modulus_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }
  /** Total degree; 0 for the zero polynomial. */
  uint64_t degree() const;
  /** True when every term is a scalar multiple of one monomial or zero. */
  bool is_monomial() const { return terms_.size() <= 1; }
  /** True when no term involves the elimination variable t. */
  bool is_t_free() const;

  /** Adds c * m, canonicalizing (erases the term if it cancels). */
  void add_term(const Monomial& m, int64_t c);

  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator-() const;
  bool operator==(const Poly& other) const;
  bool operator!=(const Poly& other) const { return !(*this == other); }

 private:
  uint32_t p_;
  uint32_t level_;
  uint32_t modulus_;
  TermMap terms_;

  void check_compatible(const Poly& other) const;
};

/**
 * Product, optionally discarding (during accumulation) every monomial that
 * lies in the given Frobenius power of the maximal ideal.  The cap is sound
 * whenever downstream tests are membership tests modulo an ideal containing
 * that Frobenius power.
 */
Poly poly_mul(const Poly& a, const Poly& b, const std::optional<FrobPowerIdeal>& cap = std::nullopt);

/** Repeated-squaring power with the same optional cap applied per multiply. */
Poly poly_pow(const Poly& a, uint64_t e, const std::optional<FrobPowerIdeal>& cap = std::nullopt);

/** Scales a polynomial by a constant. */
Poly poly_scalar_mul(const Poly& a, int64_t c);

/**
 * The monomial Frobenius lift: every exponent multiplied by p, coefficients
 * unchanged.  Reduces to the p-power Frobenius modulo p.
 */
Poly frobenius_lift(const Poly& g);

/**
 * Entrywise exponent scaling by q.  Over F_p with q a power of p this equals
 * the q-th power, because prime-field coefficients are Frobenius-fixed.
 */
Poly frobenius_scale(const Poly& g, uint64_t q);

/** Canonical representative modulo (x^{p^E}, y^{p^E}, z^{p^E}): drops every
 *  term with some x/y/z exponent at least p^E. */
Poly reduce_mod_frob_power(const Poly& g, uint32_t level_e);

/** Drops every term whose monomial is divisible by one of the given pure
 *  monomials (a general monomial-box reduction). */
Poly reduce_mod_monomials(const Poly& g, const std::vector<Monomial>& box);

/** Reduction of a level-2 polynomial modulo p (level 1 result). */
Poly reduce_coeffs_mod_p(const Poly& g);

/** Reinterprets a level-1 polynomial at level 2 (same residues). */
Poly lift_coeffs_to_level2(const Poly& g);

/**
 * Parses the expression grammar
 *   expr   := term (('+'|'-') term)*
 *   term   := factor ('*' factor)*
 *   factor := base ('^' nat)?
 *   base   := nat | var | '(' expr ')'
 *   var    := 'x' | 'y' | 'z'
 * into a canonical polynomial with coefficients reduced mod p^level.
 * Whitespace is ignored.  Errors carry the offending position.
 */
Poly parse_poly(const std::string& text, uint32_t p, uint32_t level);

/**
 * Canonical rendering: terms in descending grevlex order, coefficients as
 * least non-negative residues, explicit '*' between factors, '^' only for
 * exponents above 1.  parse_poly(render_poly(g)) == g for every canonical g.
 */
std::string render_poly(const Poly& g);

/** True when p is prime (trial division; inputs here are tiny). */
bool is_prime(uint32_t p);

/** p^e as uint64 with an overflow check. */
uint64_t checked_pow(uint32_t p, uint32_t e);

}  // namespace qfs
