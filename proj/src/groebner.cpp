#include "qfs/groebner.hpp"

#include <algorithm>
#include <utility>

namespace qfs {

namespace {

// Largest term of a nonzero polynomial under the given order.
Poly::TermMap::const_iterator leading_term(const Poly& g, MonomialOrder order) {
  if (g.is_zero()) throw InternalError("leading_term of zero polynomial");
  if (order == MonomialOrder::kGrevlex) return std::prev(g.terms().end());
  auto best = g.terms().begin();
  for (auto it = std::next(best); it != g.terms().end(); ++it) {
    if (elim_less(best->first, it->first)) best = it;
  }
  return best;
}

Poly make_monic(const Poly& g, MonomialOrder order) {
  if (g.is_zero()) return g;
  uint32_t lc = leading_term(g, order)->second;
  if (lc == 1) return g;
  return poly_scalar_mul(g, coeff_inv_mod_p(lc, g.p()));
}

// Deterministic total order on canonical polynomials: term lists compared
// lexicographically (grevlex on monomials, then coefficient value).
bool poly_canonical_less(const Poly& a, const Poly& b) {
  auto ia = a.terms().begin(), ib = b.terms().begin();
  while (ia != a.terms().end() && ib != b.terms().end()) {
    if (ia->first != ib->first) return grevlex_less(ia->first, ib->first);
    if (ia->second != ib->second) return ia->second < ib->second;
    ++ia;
    ++ib;
  }
  return ia == a.terms().end() && ib != b.terms().end();
}

// work -= c * (x^shift) * reducer, in place.
void subtract_multiple(Poly& work, uint32_t c, const Monomial& shift, const Poly& reducer) {
  for (const auto& [m, v] : reducer.terms()) {
    uint32_t prod = coeff_mul(c, v, work.modulus());
    if (prod != 0) work.add_term(mono_mul(shift, m), -static_cast<int64_t>(prod));
  }
}

// Normal form of g against a list of monic reducers.  Fully reduced: no term
// of the result is divisible by any reducer's leading monomial.
Poly normal_form_against(const Poly& g, const std::vector<Poly>& basis,
                         MonomialOrder order, const GbConfig& config) {
  if (basis.empty()) return g;
  std::vector<Monomial> lms;
  lms.reserve(basis.size());
  bool all_monomial = true;
  for (const Poly& b : basis) {
    lms.push_back(leading_term(b, order)->first);
    all_monomial = all_monomial && b.is_monomial();
  }
  if (all_monomial) {
    // Pure monomial reducers: the normal form just drops divisible terms.
    Poly result(g.p(), g.level());
    for (const auto& [m, c] : g.terms()) {
      bool divisible = false;
      for (const Monomial& lm : lms) {
        if (mono_divides(lm, m)) {
          divisible = true;
          break;
        }
      }
      if (!divisible) result.add_term(m, static_cast<int64_t>(c));
    }
    return result;
  }

  Poly work = g;
  Poly result(g.p(), g.level());
  while (!work.is_zero()) {
    auto lt = leading_term(work, order);
    Monomial m = lt->first;
    uint32_t c = lt->second;
    bool reduced = false;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (mono_divides(lms[j], m)) {
        subtract_multiple(work, c, mono_div(m, lms[j]), basis[j]);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      result.add_term(m, static_cast<int64_t>(c));
      work.add_term(m, -static_cast<int64_t>(c));
    }
    if (work.term_count() > config.term_limit)
      throw LimitError("normal form exceeded the term limit");
  }
  return result;
}

// Normal form of basis[i] against all other elements.
Poly reduce_against_others(const std::vector<Poly>& basis, std::size_t i,
                           MonomialOrder order, const GbConfig& config) {
  std::vector<Poly> others;
  others.reserve(basis.size() - 1);
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (j != i) others.push_back(basis[j]);
  return normal_form_against(basis[i], others, order, config);
}

struct Pair {
  std::size_t i, j;  // i < j
  Monomial lcm;
  uint64_t sugar;
};

}  // namespace

std::vector<Poly> buchberger_reduced(const std::vector<Poly>& generators, uint32_t p,
                                     MonomialOrder order, const GbConfig& config) {
  // Canonicalize the input: F_p coefficients, monic, zeros dropped.
  std::vector<Poly> basis;
  for (const Poly& g : generators) {
    if (g.p() != p)
      throw ModulusMismatchError("buchberger_reduced: generator has a different p");
    Poly g1 = g.level() == 1 ? g : reduce_coeffs_mod_p(g);
    if (!g1.is_zero()) basis.push_back(make_monic(g1, order));
  }

  // Interreduce the input until stable; this prunes redundant generators
  // before any pairs are formed.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Poly r = reduce_against_others(basis, i, order, config);
      if (r == basis[i]) continue;
      changed = true;
      if (r.is_zero()) {
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
      } else {
        basis[i] = make_monic(r, order);
      }
    }
  }

  std::vector<Monomial> lms;
  std::vector<uint64_t> sugars;
  lms.reserve(basis.size());
  for (const Poly& g : basis) {
    lms.push_back(leading_term(g, order)->first);
    sugars.push_back(g.degree());
  }

  std::vector<Pair> pending;
  auto push_pairs_for = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      Pair pr;
      pr.i = i;
      pr.j = j;
      pr.lcm = mono_lcm(lms[i], lms[j]);
      uint64_t deg_lcm = total_degree(pr.lcm);
      pr.sugar = std::max(sugars[i] + deg_lcm - total_degree(lms[i]),
                          sugars[j] + deg_lcm - total_degree(lms[j]));
      pending.push_back(pr);
    }
  };
  for (std::size_t j = 1; j < basis.size(); ++j) push_pairs_for(j);

  auto pair_in_pending = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    for (const Pair& pr : pending)
      if (pr.i == a && pr.j == b) return true;
    return false;
  };

  while (!pending.empty()) {
    // Sugar selection: least sugar, then least lcm, then least indices.
    std::size_t best = 0;
    for (std::size_t k = 1; k < pending.size(); ++k) {
      const Pair& a = pending[k];
      const Pair& b = pending[best];
      bool better = a.sugar != b.sugar
                        ? a.sugar < b.sugar
                        : (a.lcm != b.lcm ? mono_less(a.lcm, b.lcm, order)
                                          : (a.i != b.i ? a.i < b.i : a.j < b.j));
      if (better) best = k;
    }
    Pair pr = pending[best];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));

    // Product criterion: coprime leading monomials reduce to zero.
    if (mono_coprime(lms[pr.i], lms[pr.j])) continue;

    // Chain criterion: some other leading monomial divides the lcm and both
    // flanking pairs have already been handled.
    bool chained = false;
    for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
      if (k == pr.i || k == pr.j) continue;
      if (mono_divides(lms[k], pr.lcm) && !pair_in_pending(pr.i, k) &&
          !pair_in_pending(pr.j, k))
        chained = true;
    }
    if (chained) continue;

    // S-polynomial (both elements are monic).
    Poly s(p, 1);
    {
      Poly left = Poly::from_monomial(p, 1, mono_div(pr.lcm, lms[pr.i]));
      Poly right = Poly::from_monomial(p, 1, mono_div(pr.lcm, lms[pr.j]));
      s = poly_mul(left, basis[pr.i]) - poly_mul(right, basis[pr.j]);
    }
    Poly r = normal_form_against(s, basis, order, config);
    if (r.is_zero()) continue;
    if (r.degree() > config.degree_ceiling)
      throw LimitError("Groebner basis element exceeded the degree ceiling");
    if (r.term_count() > config.term_limit)
      throw LimitError("Groebner basis element exceeded the term limit");
    basis.push_back(make_monic(r, order));
    lms.push_back(leading_term(basis.back(), order)->first);
    sugars.push_back(pr.sugar);
    push_pairs_for(basis.size() - 1);
  }

  // Minimalize: drop elements whose leading monomial is divisible by the
  // leading monomial of another kept element.
  std::vector<Poly> minimal;
  std::vector<char> dropped(basis.size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (i == j || dropped[j]) continue;
      if (mono_divides(lms[j], lms[i]) && (lms[j] != lms[i] || j < i)) {
        dropped[i] = 1;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!dropped[i]) minimal.push_back(basis[i]);

  // Interreduce tails for the unique reduced basis.
  std::vector<Poly> reduced = minimal;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    reduced[i] = make_monic(reduce_against_others(reduced, i, order, config), order);
    if (reduced[i].is_zero())
      throw InternalError("minimal Groebner element reduced to zero");
  }

  std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
    return mono_less(leading_term(a, order)->first, leading_term(b, order)->first,
                     order);
  });
  return reduced;
}

// ---------------------------------------------------------------------------
// IdealFp
// ---------------------------------------------------------------------------

IdealFp::IdealFp(uint32_t p, std::vector<Poly> generators, MonomialOrder order)
    : p_(p), order_(order) {
  for (Poly& g : generators) {
    if (g.p() != p)
      throw ModulusMismatchError("IdealFp: generator has a different p");
    Poly g1 = g.level() == 1 ? std::move(g) : reduce_coeffs_mod_p(g);
    if (!g1.is_zero()) generators_.push_back(std::move(g1));
  }
  std::sort(generators_.begin(), generators_.end(), poly_canonical_less);
  generators_.erase(std::unique(generators_.begin(), generators_.end()),
                    generators_.end());
}

IdealFp IdealFp::maximal(uint32_t p) {
  std::vector<Poly> basis = {Poly::variable(p, 1, kVarZ), Poly::variable(p, 1, kVarY),
                             Poly::variable(p, 1, kVarX)};
  return with_basis(p, std::move(basis));
}

IdealFp IdealFp::with_basis(uint32_t p, std::vector<Poly> reduced_basis,
                            MonomialOrder order) {
  IdealFp I(p, reduced_basis, order);
  I.gb_ = std::make_shared<const std::vector<Poly>>(std::move(reduced_basis));
  return I;
}

const std::vector<Poly>& IdealFp::reduced_gb(const GbConfig& config) const {
  if (!gb_)
    gb_ = std::make_shared<const std::vector<Poly>>(
        buchberger_reduced(generators_, p_, order_, config));
  return *gb_;
}

bool IdealFp::all_generators_monomial() const {
  for (const Poly& g : generators_)
    if (g.term_count() != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Derived operations
// ---------------------------------------------------------------------------

Poly normal_form(const Poly& g, const IdealFp& I, const GbConfig& config) {
  if (g.p() != I.p())
    throw ModulusMismatchError("normal_form: polynomial has a different p");
  Poly g1 = g.level() == 1 ? g : reduce_coeffs_mod_p(g);
  return normal_form_against(g1, I.reduced_gb(config), I.order(), config);
}

bool ideal_member(const Poly& g, const IdealFp& I, const GbConfig& config) {
  return normal_form(g, I, config).is_zero();
}

bool ideal_equal(const IdealFp& I, const IdealFp& J, const GbConfig& config) {
  if (I.p() != J.p())
    throw ModulusMismatchError("ideal_equal: ideals over different primes");
  if (I.order() == J.order()) return I.reduced_gb(config) == J.reduced_gb(config);
  IdealFp J2(J.p(), J.generators(), I.order());
  return I.reduced_gb(config) == J2.reduced_gb(config);
}

bool ideal_contained_in(const IdealFp& I, const IdealFp& J, const GbConfig& config) {
  for (const Poly& g : I.generators())
    if (!ideal_member(g, J, config)) return false;
  return true;
}

bool ideal_contained_in_monomial(const IdealFp& I, const FrobPowerIdeal& F) {
  for (const Poly& g : I.generators()) {
    for (const auto& [m, c] : g.terms()) {
      if (!F.contains(m)) return false;
    }
  }
  return true;
}

IdealFp frobenius_power(const IdealFp& I, uint32_t e, const GbConfig& config) {
  uint64_t q = checked_pow(I.p(), e);
  if (I.has_cached_gb()) {
    // Exponent scaling of the reduced basis yields the reduced basis of the
    // Frobenius power (scaling preserves the order, monicity, divisibility).
    const std::vector<Poly>& gb = I.reduced_gb(config);
    std::vector<Poly> scaled;
    scaled.reserve(gb.size());
    for (const Poly& g : gb) scaled.push_back(frobenius_scale(g, q));
    return IdealFp::with_basis(I.p(), std::move(scaled), I.order());
  }
  std::vector<Poly> scaled;
  scaled.reserve(I.generators().size());
  for (const Poly& g : I.generators()) scaled.push_back(frobenius_scale(g, q));
  return IdealFp(I.p(), std::move(scaled), I.order());
}

Poly poly_divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw InternalError("poly_divide_exact: division by zero");
  if (a.p() != b.p() || a.level() != b.level())
    throw ModulusMismatchError("poly_divide_exact: incompatible operands");
  Poly quotient(a.p(), a.level());
  Poly rest = a;
  auto bl = leading_term(b, MonomialOrder::kGrevlex);
  uint32_t bl_inv = coeff_inv_mod_p(bl->second, b.p());
  while (!rest.is_zero()) {
    auto lt = leading_term(rest, MonomialOrder::kGrevlex);
    if (!mono_divides(bl->first, lt->first))
      throw InternalError("poly_divide_exact: not exactly divisible");
    Monomial shift = mono_div(lt->first, bl->first);
    uint32_t c = coeff_mul(lt->second, bl_inv, rest.modulus());
    quotient.add_term(shift, static_cast<int64_t>(c));
    subtract_multiple(rest, c, shift, b);
  }
  return quotient;
}

IdealFp colon_ideal(const IdealFp& I, const Poly& g, const GbConfig& config) {
  if (g.p() != I.p())
    throw ModulusMismatchError("colon_ideal: polynomial has a different p");
  Poly g1 = g.level() == 1 ? g : reduce_coeffs_mod_p(g);
  if (g1.is_zero() || ideal_member(g1, I, config))
    return IdealFp(I.p(), {Poly::constant(I.p(), 1, 1)});

  if (I.all_generators_monomial() && g1.term_count() == 1) {
    // (monomial ideal : monomial) componentwise.
    const Monomial mu = g1.terms().begin()->first;
    std::vector<Poly> quotients;
    quotients.reserve(I.generators().size());
    for (const Poly& gen : I.generators()) {
      const Monomial& m = gen.terms().begin()->first;
      Monomial q;
      for (int v = 0; v < kNumVars; ++v) q[v] = m[v] - std::min(m[v], mu[v]);
      quotients.push_back(Poly::from_monomial(I.p(), 1, q));
    }
    return IdealFp(I.p(), std::move(quotients));
  }

  // Eliminate t from t*I + (1-t)*(g): the t-free part is I /\ (g).
  std::vector<Poly> gens;
  Poly t = Poly::variable(I.p(), 1, kVarT);
  for (const Poly& gi : I.generators()) gens.push_back(poly_mul(t, gi));
  gens.push_back(g1 - poly_mul(t, g1));
  IdealFp J(I.p(), std::move(gens), MonomialOrder::kElim);
  std::vector<Poly> quotients;
  for (const Poly& b : J.reduced_gb(config)) {
    if (b.is_t_free()) quotients.push_back(poly_divide_exact(b, g1));
  }
  return IdealFp(I.p(), std::move(quotients));
}

uint64_t ideal_hash(const IdealFp& I, const GbConfig& config) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFFu;
      h *= 1099511628211ull;
    }
  };
  mix(I.p());
  mix(static_cast<uint64_t>(I.order()));
  for (const Poly& g : I.reduced_gb(config)) {
    mix(g.term_count());
    for (const auto& [m, c] : g.terms()) {
      for (int v = 0; v < kNumVars; ++v) mix(m[v]);
      mix(c);
    }
  }
  return h;
}

std::vector<std::string> ideal_to_strings(const IdealFp& I, const GbConfig& config) {
  std::vector<std::string> out;
  for (const Poly& g : I.reduced_gb(config)) out.push_back(render_poly(g));
  return out;
}

}  // namespace qfs
