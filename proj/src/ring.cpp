#include "qfs/ring.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace qfs {

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

uint32_t coeff_add(uint32_t a, uint32_t b, uint32_t modulus) {
  uint64_t s = uint64_t{a} + uint64_t{b};
  return static_cast<uint32_t>(s % modulus);
}

uint32_t coeff_sub(uint32_t a, uint32_t b, uint32_t modulus) {
  uint64_t s = uint64_t{a} + modulus - (b % modulus);
  return static_cast<uint32_t>(s % modulus);
}

uint32_t coeff_mul(uint32_t a, uint32_t b, uint32_t modulus) {
  uint64_t s = uint64_t{a} * uint64_t{b};
  return static_cast<uint32_t>(s % modulus);
}

uint32_t coeff_neg(uint32_t a, uint32_t modulus) {
  return a == 0 ? 0 : modulus - (a % modulus);
}

uint32_t coeff_inv_mod_p(uint32_t a, uint32_t p) {
  a %= p;
  if (a == 0) throw InternalError("coeff_inv_mod_p: zero residue has no inverse");
  // Extended Euclid on (p, a).
  int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    int64_t r2 = r0 - q * r1;
    int64_t s2 = s0 - q * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  int64_t inv = s0 % p;
  if (inv < 0) inv += p;
  return static_cast<uint32_t>(inv);
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

uint64_t total_degree(const Monomial& m) {
  uint64_t d = 0;
  for (int i = 0; i < kNumVars; ++i) d += m[i];
  return d;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kNumVars; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) {
    uint64_t e = uint64_t{a[i]} + uint64_t{b[i]};
    if (e > std::numeric_limits<uint32_t>::max())
      throw OverflowError("monomial exponent overflow in product");
    r[i] = static_cast<uint32_t>(e);
  }
  return r;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) {
    if (b[i] > a[i]) throw InternalError("mono_div: divisor does not divide");
    r[i] = a[i] - b[i];
  }
  return r;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Monomial mono_scale(const Monomial& a, uint64_t s) {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) {
    uint64_t e = uint64_t{a[i]} * s;
    if (e > std::numeric_limits<uint32_t>::max())
      throw OverflowError("monomial exponent overflow in scaling");
    r[i] = static_cast<uint32_t>(e);
  }
  return r;
}

bool mono_coprime(const Monomial& a, const Monomial& b) {
  for (int i = 0; i < kNumVars; ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

bool grevlex_less(const Monomial& a, const Monomial& b) {
  uint64_t da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  for (int i = kNumVars - 1; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

bool elim_less(const Monomial& a, const Monomial& b) {
  if (a[kVarT] != b[kVarT]) return a[kVarT] < b[kVarT];
  return grevlex_less(a, b);
}

bool mono_less(const Monomial& a, const Monomial& b, MonomialOrder order) {
  return order == MonomialOrder::kGrevlex ? grevlex_less(a, b) : elim_less(a, b);
}

// ---------------------------------------------------------------------------
// Frobenius powers of the maximal ideal
// ---------------------------------------------------------------------------

uint64_t FrobPowerIdeal::q() const {
  uint64_t value = checked_pow(p, level);
  if (value > std::numeric_limits<uint32_t>::max())
    throw OverflowError("Frobenius power exceeds the exponent range");
  return value;
}

bool FrobPowerIdeal::contains(const Monomial& m) const {
  uint64_t qq = q();
  return m[kVarX] >= qq || m[kVarY] >= qq || m[kVarZ] >= qq;
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

Poly::Poly(uint32_t p, uint32_t level) : p_(p), level_(level) {
  if (level != 1 && level != 2)
    throw InternalError("Poly: coefficient level must be 1 or 2");
  uint64_t m = checked_pow(p, level);
  if (m > std::numeric_limits<uint32_t>::max())
    throw OverflowError("Poly: coefficient modulus exceeds 32 bits");
  modulus_ = static_cast<uint32_t>(m);
}

Poly Poly::zero(uint32_t p, uint32_t level) { return Poly(p, level); }

Poly Poly::constant(uint32_t p, uint32_t level, int64_t c) {
  Poly g(p, level);
  g.add_term(kMonomialOne, c);
  return g;
}

Poly Poly::variable(uint32_t p, uint32_t level, int var_index) {
  if (var_index < 0 || var_index >= kNumVars)
    throw InternalError("Poly::variable: index out of range");
  Monomial m = kMonomialOne;
  m[var_index] = 1;
  return from_monomial(p, level, m);
}

Poly Poly::from_monomial(uint32_t p, uint32_t level, const Monomial& m, int64_t c) {
  Poly g(p, level);
  g.add_term(m, c);
  return g;
}

uint64_t Poly::degree() const {
  if (terms_.empty()) return 0;
  return total_degree(terms_.rbegin()->first);
}

bool Poly::is_t_free() const {
  for (const auto& [m, c] : terms_)
    if (m[kVarT] != 0) return false;
  return true;
}

void Poly::add_term(const Monomial& m, int64_t c) {
  int64_t r = c % static_cast<int64_t>(modulus_);
  if (r < 0) r += modulus_;
  if (r == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, static_cast<uint32_t>(r));
  } else {
    uint32_t v = coeff_add(it->second, static_cast<uint32_t>(r), modulus_);
    if (v == 0)
      terms_.erase(it);
    else
      it->second = v;
  }
}

void Poly::check_compatible(const Poly& other) const {
  if (p_ != other.p_ || level_ != other.level_)
    throw ModulusMismatchError("operands carry different coefficient moduli");
}

Poly Poly::operator+(const Poly& other) const {
  check_compatible(other);
  Poly r = *this;
  for (const auto& [m, c] : other.terms_) r.add_term(m, static_cast<int64_t>(c));
  return r;
}

Poly Poly::operator-(const Poly& other) const {
  check_compatible(other);
  Poly r = *this;
  for (const auto& [m, c] : other.terms_)
    r.add_term(m, -static_cast<int64_t>(c));
  return r;
}

Poly Poly::operator-() const {
  Poly r(p_, level_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, coeff_neg(c, modulus_));
  return r;
}

bool Poly::operator==(const Poly& other) const {
  return p_ == other.p_ && level_ == other.level_ && terms_ == other.terms_;
}

Poly poly_mul(const Poly& a, const Poly& b, const std::optional<FrobPowerIdeal>& cap) {
  if (a.p() != b.p() || a.level() != b.level())
    throw ModulusMismatchError("poly_mul: operands carry different coefficient moduli");
  Poly r(a.p(), a.level());
  if (a.is_zero() || b.is_zero()) return r;
  const Poly& small = a.term_count() <= b.term_count() ? a : b;
  const Poly& big = a.term_count() <= b.term_count() ? b : a;
  for (const auto& [ms, cs] : small.terms()) {
    for (const auto& [mb, cb] : big.terms()) {
      Monomial m = mono_mul(ms, mb);
      if (cap && cap->contains(m)) continue;
      uint32_t c = coeff_mul(cs, cb, r.modulus());
      if (c != 0) r.add_term(m, static_cast<int64_t>(c));
    }
  }
  return r;
}

Poly poly_pow(const Poly& a, uint64_t e, const std::optional<FrobPowerIdeal>& cap) {
  Poly result = Poly::constant(a.p(), a.level(), 1);
  Poly base = cap ? [&] {
    Poly t(a.p(), a.level());
    for (const auto& [m, c] : a.terms())
      if (!cap->contains(m)) t.add_term(m, static_cast<int64_t>(c));
    return t;
  }()
                  : a;
  while (e > 0) {
    if (e & 1) result = poly_mul(result, base, cap);
    e >>= 1;
    if (e > 0) base = poly_mul(base, base, cap);
  }
  return result;
}

Poly poly_scalar_mul(const Poly& a, int64_t c) {
  int64_t r = c % static_cast<int64_t>(a.modulus());
  if (r < 0) r += a.modulus();
  Poly out(a.p(), a.level());
  if (r == 0) return out;
  for (const auto& [m, v] : a.terms()) {
    uint32_t w = coeff_mul(v, static_cast<uint32_t>(r), a.modulus());
    if (w != 0) out.add_term(m, static_cast<int64_t>(w));
  }
  return out;
}

Poly frobenius_lift(const Poly& g) { return frobenius_scale(g, g.p()); }

Poly frobenius_scale(const Poly& g, uint64_t q) {
  Poly r(g.p(), g.level());
  for (const auto& [m, c] : g.terms())
    r.add_term(mono_scale(m, q), static_cast<int64_t>(c));
  return r;
}

Poly reduce_mod_frob_power(const Poly& g, uint32_t level_e) {
  FrobPowerIdeal cap{g.p(), level_e};
  Poly r(g.p(), g.level());
  for (const auto& [m, c] : g.terms())
    if (!cap.contains(m)) r.add_term(m, static_cast<int64_t>(c));
  return r;
}

Poly reduce_mod_monomials(const Poly& g, const std::vector<Monomial>& box) {
  Poly r(g.p(), g.level());
  for (const auto& [m, c] : g.terms()) {
    bool drop = false;
    for (const Monomial& b : box) {
      if (mono_divides(b, m)) {
        drop = true;
        break;
      }
    }
    if (!drop) r.add_term(m, static_cast<int64_t>(c));
  }
  return r;
}

Poly reduce_coeffs_mod_p(const Poly& g) {
  if (g.level() == 1) return g;
  Poly r(g.p(), 1);
  for (const auto& [m, c] : g.terms()) r.add_term(m, static_cast<int64_t>(c % g.p()));
  return r;
}

Poly lift_coeffs_to_level2(const Poly& g) {
  if (g.level() == 2) return g;
  Poly r(g.p(), 2);
  for (const auto& [m, c] : g.terms()) r.add_term(m, static_cast<int64_t>(c));
  return r;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char get() {
    skip_ws();
    return text_[pos_++];
  }

  std::size_t pos() {
    skip_ws();
    return pos_;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

struct Parser {
  Cursor cur;
  uint32_t p;
  uint32_t level;

  Parser(const std::string& text, uint32_t p, uint32_t level)
      : cur(text), p(p), level(level) {}

  [[noreturn]] void fail(const std::string& what, std::size_t position) {
    throw ParseError(what, position);
  }

  // Natural number used as an exponent: must fit in 32 bits.
  uint32_t parse_exponent() {
    std::size_t start = cur.pos();
    if (!std::isdigit(static_cast<unsigned char>(cur.peek())))
      fail("expected an exponent", start);
    uint64_t value = 0;
    bool overflow = false;
    while (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      value = value * 10 + static_cast<uint64_t>(cur.get() - '0');
      if (value > std::numeric_limits<uint32_t>::max()) {
        overflow = true;
        value = std::numeric_limits<uint32_t>::max();
      }
    }
    if (overflow) fail("exponent does not fit in 32 bits", start);
    return static_cast<uint32_t>(value);
  }

  // Natural number used as a coefficient: reduced mod p^level while read.
  Poly parse_coefficient() {
    uint32_t modulus = Poly(p, level).modulus();
    uint64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(cur.peek())))
      value = (value * 10 + static_cast<uint64_t>(cur.get() - '0')) % modulus;
    return Poly::constant(p, level, static_cast<int64_t>(value));
  }

  Poly parse_base() {
    char c = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_coefficient();
    if (c == 'x') {
      cur.get();
      return Poly::variable(p, level, kVarX);
    }
    if (c == 'y') {
      cur.get();
      return Poly::variable(p, level, kVarY);
    }
    if (c == 'z') {
      cur.get();
      return Poly::variable(p, level, kVarZ);
    }
    if (c == '(') {
      cur.get();
      Poly inner = parse_expr();
      if (cur.peek() != ')') fail("expected ')'", cur.pos());
      cur.get();
      return inner;
    }
    fail("expected a number, variable, or '('", cur.pos());
  }

  Poly parse_factor() {
    Poly base = parse_base();
    if (cur.peek() == '^') {
      cur.get();
      uint32_t e = parse_exponent();
      return poly_pow(base, e);
    }
    return base;
  }

  Poly parse_term() {
    Poly value = parse_factor();
    while (cur.peek() == '*') {
      cur.get();
      value = poly_mul(value, parse_factor());
    }
    return value;
  }

  Poly parse_expr() {
    Poly value = parse_term();
    while (true) {
      char c = cur.peek();
      if (c == '+') {
        cur.get();
        value = value + parse_term();
      } else if (c == '-') {
        cur.get();
        value = value - parse_term();
      } else {
        return value;
      }
    }
  }

  Poly parse_all() {
    Poly value = parse_expr();
    if (!cur.eof()) fail("unexpected trailing input", cur.pos());
    return value;
  }
};

}  // namespace

Poly parse_poly(const std::string& text, uint32_t p, uint32_t level) {
  Parser parser(text, p, level);
  return parser.parse_all();
}

std::string render_poly(const Poly& g) {
  if (g.is_zero()) return "0";
  static const char* kNames[kNumVars] = {"x", "y", "z", "t"};
  std::string out;
  // Terms in descending grevlex order.
  for (auto it = g.terms().rbegin(); it != g.terms().rend(); ++it) {
    const Monomial& m = it->first;
    uint32_t c = it->second;
    if (!out.empty()) out += '+';
    std::vector<std::string> parts;
    if (c != 1 || m == kMonomialOne) parts.push_back(std::to_string(c));
    for (int v = 0; v < kNumVars; ++v) {
      if (m[v] == 0) continue;
      std::string piece = kNames[v];
      if (m[v] > 1) piece += "^" + std::to_string(m[v]);
      parts.push_back(std::move(piece));
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += '*';
      out += parts[i];
    }
  }
  return out;
}

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

uint64_t checked_pow(uint32_t p, uint32_t e) {
  uint64_t result = 1;
  for (uint32_t i = 0; i < e; ++i) {
    if (p != 0 && result > std::numeric_limits<uint64_t>::max() / p)
      throw OverflowError("integer power overflow");
    result *= p;
  }
  return result;
}

}  // namespace qfs
