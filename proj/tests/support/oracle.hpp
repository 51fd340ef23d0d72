/**
 * Independent reference implementations used only by the test suite.
 *
 * Everything here is deliberately naive: dense Gaussian elimination over
 * F_p, span membership by row reduction, and ideal membership by spanning
 * all monomial multiples of the generators up to a degree bound.  None of it
 * shares code with the library's sparse echelon or Groebner engine, so the
 * two sides can check each other.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "qfs/ring.hpp"

namespace qfs::testing {

/** Dense row-reduction workspace over F_p. */
class DenseSpan {
 public:
  explicit DenseSpan(uint32_t p) : p_(p) {}

  /** Map a polynomial to dense coordinates over the accumulated monomials. */
  std::vector<uint32_t> coords(const Poly& g) {
    std::vector<uint32_t> v(cols_.size(), 0);
    for (const auto& [m, c] : g.terms()) {
      size_t j = col_of(m);
      if (j >= v.size()) v.resize(cols_.size(), 0);
      v[j] = c % p_;
    }
    return v;
  }

  /** Insert a polynomial into the span; returns true if the rank grew. */
  bool insert(const Poly& g) {
    std::vector<uint32_t> v = coords(g);
    reduce_in_place(v);
    size_t lead = leading_index(v);
    if (lead == kNone) return false;
    normalize(v, lead);
    rows_.push_back(std::move(v));
    leads_.push_back(lead);
    return true;
  }

  /** True when g lies in the span of the inserted polynomials. */
  bool contains(const Poly& g) {
    std::vector<uint32_t> v = coords(g);
    reduce_in_place(v);
    return leading_index(v) == kNone;
  }

  size_t rank() const { return rows_.size(); }

 private:
  static constexpr size_t kNone = static_cast<size_t>(-1);

  size_t col_of(const Monomial& m) {
    auto it = index_.find(m);
    if (it != index_.end()) return it->second;
    size_t j = cols_.size();
    index_.emplace(m, j);
    cols_.push_back(m);
    for (auto& r : rows_) r.resize(cols_.size(), 0);
    return j;
  }

  size_t leading_index(const std::vector<uint32_t>& v) const {
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] % p_ != 0) return j;
    }
    return kNone;
  }

  void normalize(std::vector<uint32_t>& v, size_t lead) const {
    uint32_t inv = inv_mod(v[lead], p_);
    for (auto& x : v) x = static_cast<uint32_t>((uint64_t{x} * inv) % p_);
  }

  void reduce_in_place(std::vector<uint32_t>& v) const {
    if (v.size() < cols_.size()) v.resize(cols_.size(), 0);
    for (size_t i = 0; i < rows_.size(); ++i) {
      size_t lead = leads_[i];
      if (lead >= v.size()) continue;
      uint32_t c = v[lead] % p_;
      if (c == 0) continue;
      // v -= c * row, entrywise.
      const auto& row = rows_[i];
      for (size_t j = 0; j < row.size(); ++j) {
        uint64_t sub = (uint64_t{c} * row[j]) % p_;
        v[j] = static_cast<uint32_t>((uint64_t{v[j]} + p_ - sub) % p_);
      }
    }
  }

  static uint32_t inv_mod(uint32_t a, uint32_t p) {
    a %= p;
    uint32_t result = 1;
    for (uint32_t e = p - 2; e > 0; e >>= 1) {
      if (e & 1) result = static_cast<uint32_t>((uint64_t{result} * a) % p);
      a = static_cast<uint32_t>((uint64_t{a} * a) % p);
    }
    return result;
  }

  uint32_t p_;
  std::map<Monomial, size_t, GrevlexLess> index_;
  std::vector<Monomial> cols_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<size_t> leads_;
};

/** All monomials in x, y, z of total degree <= d. */
inline std::vector<Monomial> monomials_up_to(uint32_t d) {
  std::vector<Monomial> out;
  for (uint32_t a = 0; a <= d; ++a)
    for (uint32_t b = 0; a + b <= d; ++b)
      for (uint32_t c = 0; a + b + c <= d; ++c)
        out.push_back(Monomial{a, b, c, 0});
  return out;
}

/** Span of all multiples m * g_i with deg(m * g_i) <= degree_bound. */
inline DenseSpan multiples_span(const std::vector<Poly>& gens, uint32_t p,
                                uint32_t degree_bound) {
  DenseSpan span(p);
  for (const Poly& g : gens) {
    if (g.is_zero()) continue;
    uint64_t dg = g.degree();
    if (dg > degree_bound) continue;
    for (const Monomial& m : monomials_up_to(degree_bound - static_cast<uint32_t>(dg))) {
      span.insert(poly_mul(Poly::from_monomial(p, 1, m), g));
    }
  }
  return span;
}

/**
 * Degree-bounded ideal membership: true means g is certainly in (gens)
 * (it is an explicit combination of multiples); false only means no
 * combination exists within the bound.
 */
inline bool member_bounded(const std::vector<Poly>& gens, const Poly& g, uint32_t p,
                           uint32_t degree_bound) {
  DenseSpan span = multiples_span(gens, p, degree_bound);
  return span.contains(g);
}

/** Random polynomial in x, y, z: up to max_terms monomials of degree <= max_deg. */
inline Poly random_poly(std::mt19937_64& rng, uint32_t p, uint32_t max_deg,
                        uint32_t max_terms) {
  std::vector<Monomial> pool = monomials_up_to(max_deg);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<uint32_t> coeff(1, p - 1);
  std::uniform_int_distribution<uint32_t> nterms(1, max_terms);
  Poly g(p, 1);
  uint32_t n = nterms(rng);
  for (uint32_t i = 0; i < n; ++i) {
    g.add_term(pool[pick(rng)], coeff(rng));
  }
  return g;
}

}  // namespace qfs::testing
