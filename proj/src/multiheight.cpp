#include "qfs/multiheight.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "qfs/linalg.hpp"
#include "qfs/trace.hpp"

namespace qfs {

// ---------------------------------------------------------------------------
// Height sequences
// ---------------------------------------------------------------------------

uint32_t HeightSeq::entry(size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  if (period.empty()) throw InternalError("HeightSeq: empty period");
  return period[(i - preperiod.size()) % period.size()];
}

std::vector<uint32_t> HeightSeq::prefix(size_t n) const {
  std::vector<uint32_t> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(entry(i));
  return out;
}

void HeightSeq::canonicalize() {
  if (period.empty()) throw InternalError("HeightSeq: empty period");
  // Minimal period length: the smallest divisor d with period[i] = period[i mod d].
  for (size_t d = 1; d <= period.size(); ++d) {
    if (period.size() % d != 0) continue;
    bool works = true;
    for (size_t i = d; i < period.size() && works; ++i)
      works = period[i] == period[i % d];
    if (works) {
      period.resize(d);
      break;
    }
  }
  // Absorb the preperiod tail into the period by rotating.
  while (!preperiod.empty() && preperiod.back() == period.back()) {
    preperiod.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
}

bool HeightSeq::same_sequence(const HeightSeq& other) const {
  return *this == other;
}

bool HeightSeq::operator==(const HeightSeq& other) const {
  HeightSeq a = *this, b = other;
  a.canonicalize();
  b.canonicalize();
  return a.preperiod == b.preperiod && a.period == b.period;
}

std::string height_seq_to_json(const HeightSeq& seq) {
  auto list = [](const std::vector<uint32_t>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ",";
      out += std::to_string(v[i]);
    }
    return out + "]";
  };
  return "{\"preperiod\":" + list(seq.preperiod) + ",\"period\":" + list(seq.period) +
         ",\"certified\":" + (seq.certified ? "true" : "false") + "}";
}

std::string height_seq_to_string(const HeightSeq& seq) {
  auto join = [](const std::vector<uint32_t>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += " ";
      out += std::to_string(v[i]);
    }
    return out;
  };
  if (seq.preperiod.empty()) return "(" + join(seq.period) + ")";
  return "(" + join(seq.preperiod) + "; " + join(seq.period) + ")";
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace {

IdealFp canonical_ideal(const IdealFp& I, const GbConfig& config) {
  return IdealFp::with_basis(I.p(), I.reduced_gb(config), I.order());
}

// Heuristic folds of a finite height list: pairs (r0, s) such that the tail
// starting at r0 is s-periodic and covers at least two full periods, ordered
// by (r0, s).
std::vector<std::pair<size_t, size_t>> fold_candidates(const std::vector<uint32_t>& h) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t r0 = 0; r0 + 2 <= h.size(); ++r0) {
    for (size_t s = 1; r0 + 2 * s <= h.size(); ++s) {
      bool periodic = true;
      for (size_t j = r0; j + s < h.size() && periodic; ++j)
        periodic = h[j] == h[j + s];
      if (periodic) out.emplace_back(r0, s);
    }
  }
  return out;
}

HeightSeq fold_heights(const std::vector<uint32_t>& h) {
  HeightSeq seq;
  std::vector<std::pair<size_t, size_t>> cands = fold_candidates(h);
  size_t r0 = h.size() - 1, s = 1;
  if (!cands.empty()) {
    r0 = cands.front().first;
    s = cands.front().second;
  }
  seq.preperiod.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(r0));
  seq.period.assign(h.begin() + static_cast<std::ptrdiff_t>(r0),
                    h.begin() + static_cast<std::ptrdiff_t>(r0 + s));
  seq.certified = false;
  seq.canonicalize();
  return seq;
}

// Leading monomial in grevlex (term maps are grevlex-keyed).
const Monomial& lead_monomial(const Poly& g) {
  if (g.is_zero()) throw InternalError("lead_monomial of zero");
  return g.terms().rbegin()->first;
}

// Smallest c <= c_max with m^{[p^c]} contained in J, if any.
std::optional<uint32_t> frobenius_cap_level(const IdealFp& J, const GbConfig& config,
                                            uint32_t c_max = 8) {
  for (uint32_t c = 0; c <= c_max; ++c) {
    uint64_t q = checked_pow(J.p(), c);
    if (q > std::numeric_limits<uint32_t>::max()) break;
    bool inside = true;
    for (int v = 0; v < 3 && inside; ++v) {
      Monomial m = kMonomialOne;
      m[v] = static_cast<uint32_t>(q);
      inside = ideal_member(Poly::from_monomial(J.p(), 1, m), J, config);
    }
    if (inside) return c;
  }
  return std::nullopt;
}

// Standard monomials of I inside the box of side q (requires m^{[q]} <= I),
// sorted descending in grevlex.
std::vector<Monomial> standard_monomials(const IdealFp& I, uint64_t q,
                                         const GbConfig& config) {
  std::vector<Monomial> lms;
  for (const Poly& g : I.reduced_gb(config)) lms.push_back(lead_monomial(g));
  std::vector<Monomial> std_monos;
  uint32_t side = static_cast<uint32_t>(q);
  for (uint32_t a = 0; a < side; ++a) {
    for (uint32_t b = 0; b < side; ++b) {
      for (uint32_t c = 0; c < side; ++c) {
        Monomial m{a, b, c, 0};
        bool divisible = false;
        for (const Monomial& lm : lms) {
          if (mono_divides(lm, m)) {
            divisible = true;
            break;
          }
        }
        if (!divisible) std_monos.push_back(m);
      }
    }
  }
  std::sort(std_monos.begin(), std_monos.end(),
            [](const Monomial& x, const Monomial& y) { return grevlex_less(y, x); });
  return std_monos;
}

// ---------------------------------------------------------------------------
// Dense Gaussian elimination (bit-packed for p = 2, residue rows otherwise)
// ---------------------------------------------------------------------------

struct BitRowOps {
  static constexpr size_t npos = static_cast<size_t>(-1);
  using Row = std::vector<uint64_t>;
  size_t width;

  explicit BitRowOps(uint32_t, size_t width) : width(width) {}

  Row make() const { return Row((width + 63) / 64, 0); }
  void set(Row& r, size_t j, uint32_t c) const {
    if (c & 1u) r[j / 64] |= uint64_t{1} << (j % 64);
  }
  uint32_t coeff(const Row& r, size_t j) const {
    return static_cast<uint32_t>((r[j / 64] >> (j % 64)) & 1u);
  }
  size_t first_nonzero(const Row& r) const {
    for (size_t w = 0; w < r.size(); ++w) {
      if (r[w] != 0) return 64 * w + static_cast<size_t>(std::countr_zero(r[w]));
    }
    return npos;
  }
  // r -= c * s (over F_2: xor when c is odd).
  void axpy(Row& r, uint32_t c, const Row& s) const {
    if (!(c & 1u)) return;
    for (size_t w = 0; w < r.size(); ++w) r[w] ^= s[w];
  }
  void normalize(Row&, size_t) const {}
};

struct ModRowOps {
  static constexpr size_t npos = static_cast<size_t>(-1);
  using Row = std::vector<uint32_t>;
  uint32_t p;
  size_t width;

  ModRowOps(uint32_t p, size_t width) : p(p), width(width) {}

  Row make() const { return Row(width, 0); }
  void set(Row& r, size_t j, uint32_t c) const { r[j] = c % p; }
  uint32_t coeff(const Row& r, size_t j) const { return r[j]; }
  size_t first_nonzero(const Row& r) const {
    for (size_t j = 0; j < r.size(); ++j)
      if (r[j] != 0) return j;
    return npos;
  }
  void axpy(Row& r, uint32_t c, const Row& s) const {
    c %= p;
    if (c == 0) return;
    for (size_t j = 0; j < r.size(); ++j)
      r[j] = coeff_sub(r[j], coeff_mul(c, s[j], p), p);
  }
  void normalize(Row& r, size_t lead) const {
    uint32_t inv = coeff_inv_mod_p(r[lead], p);
    if (inv == 1) return;
    for (auto& x : r) x = coeff_mul(x, inv, p);
  }
};

template <class Ops>
struct DenseEchelon {
  Ops ops;
  std::vector<typename Ops::Row> rows;
  std::vector<size_t> leads;
  std::vector<int32_t> pivot_of;  // column -> row index, -1 when free

  explicit DenseEchelon(Ops ops_in)
      : ops(ops_in), pivot_of(ops_in.width, -1) {}

  // Reduces r against the pivots and stores it when independent.
  // Returns the new pivot column, or npos when dependent.
  size_t insert(typename Ops::Row r) {
    while (true) {
      size_t lead = ops.first_nonzero(r);
      if (lead == Ops::npos) return Ops::npos;
      int32_t k = pivot_of[lead];
      if (k < 0) {
        ops.normalize(r, lead);
        pivot_of[lead] = static_cast<int32_t>(rows.size());
        rows.push_back(std::move(r));
        leads.push_back(lead);
        return lead;
      }
      ops.axpy(r, ops.coeff(r, lead), rows[static_cast<size_t>(k)]);
    }
  }

  // Full back-reduction: afterwards no row has a nonzero entry at another
  // row's pivot column.
  void back_reduce() {
    for (size_t i = 0; i < rows.size(); ++i) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (size_t j = leads[i] + 1; j < ops.width; ++j) {
          int32_t k = pivot_of[j];
          if (k < 0 || static_cast<size_t>(k) == i) continue;
          uint32_t c = ops.coeff(rows[i], j);
          if (c == 0) continue;
          ops.axpy(rows[i], c, rows[static_cast<size_t>(k)]);
          changed = true;
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Colon-pipeline state transitions
// ---------------------------------------------------------------------------

// Exact (I : N) for m-primary I = J^{[p^h]} with standard monomials inside the
// box of side q, computed as I + ker(mult_N on A/I).  The kernel and its
// reduced row echelon form over the standard monomials (descending grevlex,
// pivot = leading monomial) yield the reduced Groebner basis of the colon
// directly: pivot rows with minimal pivots are new basis elements, and the
// surviving elements of I's basis get their tails reduced against the kernel.
template <class Ops>
IdealFp la_colon_impl(uint32_t p, const IdealFp& I, const Poly& N, uint64_t q,
                      const GbConfig& config) {
  std::vector<Monomial> std_monos = standard_monomials(I, q, config);
  size_t n = std_monos.size();
  std::map<Monomial, size_t, GrevlexLess> col_of;
  for (size_t j = 0; j < n; ++j) col_of.emplace(std_monos[j], j);

  // Phase 1: kernel of b -> NF(b * N) via the fused (image || marker) layout.
  DenseEchelon<Ops> fused(Ops(p, 2 * n));
  std::vector<typename Ops::Row> kernel;
  for (size_t jb = n; jb-- > 0;) {  // ascending grevlex order of b
    Poly w = normal_form(poly_mul(Poly::from_monomial(p, 1, std_monos[jb]), N), I,
                         config);
    typename Ops::Row row = fused.ops.make();
    for (const auto& [m, c] : w.terms()) fused.ops.set(row, col_of.at(m), c);
    fused.ops.set(row, n + jb, 1);
    size_t lead = fused.insert(std::move(row));
    if (lead != Ops::npos && lead >= n) {
      // Marker-led pivot row: the marker part is a kernel vector.
      const typename Ops::Row& stored = fused.rows.back();
      typename Ops::Row v = Ops(p, n).make();
      Ops vops(p, n);
      for (size_t j = 0; j < n; ++j) vops.set(v, j, fused.ops.coeff(stored, n + j));
      kernel.push_back(std::move(v));
    }
  }

  // Phase 2: reduced row echelon form of the kernel over the standard
  // monomials (columns already sorted descending, so lead = leading monomial).
  DenseEchelon<Ops> rref(Ops(p, n));
  for (auto& v : kernel) rref.insert(std::move(v));
  rref.back_reduce();

  std::vector<Monomial> pivots;
  for (size_t lead : rref.leads) pivots.push_back(std_monos[lead]);

  std::vector<Poly> basis;
  // New elements from minimal kernel pivots.
  for (size_t i = 0; i < rref.rows.size(); ++i) {
    const Monomial& mu = std_monos[rref.leads[i]];
    bool minimal = true;
    for (const Monomial& nu : pivots) {
      if (nu != mu && mono_divides(nu, mu)) {
        minimal = false;
        break;
      }
    }
    if (!minimal) continue;
    Poly g(p, 1);
    for (size_t j = 0; j < n; ++j) {
      uint32_t c = rref.ops.coeff(rref.rows[i], j);
      if (c != 0) g.add_term(std_monos[j], static_cast<int64_t>(c));
    }
    basis.push_back(std::move(g));
  }
  // Surviving elements of I's basis, tails reduced against the kernel rows.
  for (const Poly& g : I.reduced_gb(config)) {
    const Monomial& lm = lead_monomial(g);
    bool redundant = false;
    for (const Monomial& nu : pivots) {
      if (mono_divides(nu, lm)) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    typename Ops::Row tail = rref.ops.make();
    bool has_tail = false;
    for (const auto& [m, c] : g.terms()) {
      if (m == lm) continue;
      rref.ops.set(tail, col_of.at(m), c);
      has_tail = true;
    }
    if (has_tail) {
      for (size_t j = 0; j < n; ++j) {
        int32_t k = rref.pivot_of[j];
        if (k < 0) continue;
        uint32_t c = rref.ops.coeff(tail, j);
        if (c != 0) rref.ops.axpy(tail, c, rref.rows[static_cast<size_t>(k)]);
      }
    }
    Poly out(p, 1);
    out.add_term(lm, 1);
    for (size_t j = 0; j < n; ++j) {
      uint32_t c = rref.ops.coeff(tail, j);
      if (c != 0) out.add_term(std_monos[j], static_cast<int64_t>(c));
    }
    basis.push_back(std::move(out));
  }

  std::sort(basis.begin(), basis.end(), [](const Poly& a, const Poly& b) {
    return grevlex_less(lead_monomial(a), lead_monomial(b));
  });
  return IdealFp::with_basis(p, std::move(basis));
}

IdealFp la_colon(uint32_t p, const IdealFp& I, const Poly& N, uint64_t q,
                 const GbConfig& config) {
  if (p == 2) return la_colon_impl<BitRowOps>(p, I, N, q, config);
  return la_colon_impl<ModRowOps>(p, I, N, q, config);
}

constexpr size_t kSliceRowCap = 50'000;

// Degree-bounded transition: the ideal generated by the degree-<= D slice of
// (I : N).  Sound as a replacement state because membership of f_h in a
// Frobenius power and the next slice only consult the low-degree slice.
IdealFp slice_transition(const LiftSpec& spec, const IdealFp& I, const Poly& N,
                         uint64_t D, const GbConfig& config) {
  uint32_t p = spec.p;
  uint64_t rows = (D + 1) * (D + 2) * (D + 3) / 6;
  if (rows > kSliceRowCap)
    throw LimitError("slice transition would need too many rows");

  // Enumerate candidate monomials b (deg <= D) in ascending (degree, grevlex)
  // order.
  std::vector<Monomial> bs;
  uint32_t d32 = static_cast<uint32_t>(D);
  for (uint32_t a = 0; a <= d32; ++a)
    for (uint32_t b = 0; a + b <= d32; ++b)
      for (uint32_t c = 0; a + b + c <= d32; ++c) bs.push_back(Monomial{a, b, c, 0});
  std::sort(bs.begin(), bs.end(), grevlex_less);

  // Marker ids run in descending grevlex order so that a kernel row's pivot
  // (its smallest column) names the grevlex-largest monomial it contains.
  // Distinct pivots then mean pairwise distinct leading monomials, and the
  // leading monomials of the slice space are exactly those of the rows.
  constexpr uint32_t kMarkerOffset = uint32_t{1} << 24;
  uint32_t last = static_cast<uint32_t>(bs.size() - 1);
  SparseEchelon echelon(p);
  MonomialIndexer nf_idx;
  std::vector<Poly> kernel;
  for (size_t jb = 0; jb < bs.size(); ++jb) {
    Poly w = normal_form(poly_mul(Poly::from_monomial(p, 1, bs[jb]), N), I, config);
    SparseRow row;
    for (const auto& [m, c] : w.terms()) row.entries.emplace_back(nf_idx.id_of(m), c);
    row.entries.emplace_back(kMarkerOffset + (last - static_cast<uint32_t>(jb)), 1);
    std::sort(row.entries.begin(), row.entries.end());
    if (!echelon.insert(std::move(row))) continue;
    const SparseRow& stored = echelon.rows().back();
    if (stored.lead_col() >= kMarkerOffset) {
      Poly v(p, 1);
      for (const auto& [col, c] : stored.entries)
        v.add_term(bs[last - (col - kMarkerOffset)], static_cast<int64_t>(c));
      kernel.push_back(std::move(v));
    }
  }
  if (nf_idx.size() >= kMarkerOffset)
    throw LimitError("slice transition: normal-form block overflow");

  // The slice space is closed under monomial multiplication within the degree
  // cap, so a row whose leading monomial is divisible by a smaller row's
  // reduces to zero against the smaller rows inside the space: keeping the
  // divisibility-minimal leading monomials preserves the generated ideal.
  std::sort(kernel.begin(), kernel.end(), [](const Poly& a, const Poly& b) {
    return grevlex_less(lead_monomial(a), lead_monomial(b));
  });
  std::vector<Poly> kept;
  std::vector<Monomial> kept_lms;
  for (Poly& v : kernel) {
    Monomial lm = lead_monomial(v);
    bool redundant = false;
    for (const Monomial& w : kept_lms)
      if (mono_divides(w, lm)) {
        redundant = true;
        break;
      }
    if (redundant) continue;
    kept.push_back(std::move(v));
    kept_lms.push_back(lm);
  }
  return canonical_ideal(IdealFp(p, std::move(kept)), config);
}

// Number of standard monomials of J (colength), or nullopt when J is not
// m-primary within the tested cap range.
std::optional<uint64_t> colength_of(const IdealFp& J, std::optional<uint32_t> cap_level,
                                    const GbConfig& config) {
  if (!cap_level) return std::nullopt;
  uint64_t q = checked_pow(J.p(), *cap_level);
  return standard_monomials(J, q, config).size();
}

struct HeightScan {
  uint32_t h;
  Poly nf;            // nonzero normal form of f_h
  IdealFp scaled;     // J^{[p^h]}
};

// Least h <= h_cap with f_h outside J^{[p^h]}, with the witness normal form.
std::optional<HeightScan> scan_height(const LiftSpec& spec, const IdealFp& J,
                                      std::optional<uint32_t> cap_c, uint32_t h_cap,
                                      const GbConfig& config) {
  constexpr uint32_t kUncappedHMax = 6;
  for (uint32_t h = 1; h <= h_cap; ++h) {
    Poly fh(spec.p, 1);
    if (cap_c) {
      fh = fh_ladder(spec, h, h + *cap_c).fh(h);
    } else {
      if (h > kUncappedHMax)
        throw LimitError("height scan requires uncapped ladder beyond h = 6");
      fh = fh_ladder(spec, h, std::nullopt).fh(h);
    }
    IdealFp scaled = frobenius_power(J, h, config);
    Poly nf = normal_form(fh, scaled, config);
    if (!nf.is_zero()) return HeightScan{h, std::move(nf), std::move(scaled)};
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

std::optional<uint32_t> qfs_height(const LiftSpec& spec, uint32_t h_cap,
                                   const GbConfig&) {
  for (uint32_t h = 1; h <= h_cap; ++h) {
    FhLadder ladder = fh_ladder(spec, h, h);
    if (!ladder.fh(h).is_zero()) return h;
  }
  return std::nullopt;
}

HeightReport multiheight_colon(const LiftSpec& spec, uint32_t h_cap, uint32_t r_max,
                               const GbConfig& config) {
  uint32_t p = spec.p;
  uint64_t la_guard = p == 2 ? 4096 : 1024;

  std::vector<IdealFp> states;
  std::vector<uint64_t> hashes;
  std::vector<uint32_t> heights;

  IdealFp state = IdealFp::maximal(p);
  states.push_back(state);
  hashes.push_back(ideal_hash(state, config));

  HeightReport report;
  report.pipeline = "colon";

  while (heights.size() < r_max) {
    std::optional<uint32_t> cap_c = frobenius_cap_level(state, config);
    std::optional<HeightScan> scan = scan_height(spec, state, cap_c, h_cap, config);
    if (!scan) {
      if (heights.empty()) throw NotQuasiFSplitUpToError(h_cap);
      throw LimitError("colon pipeline found no escape height below the cap");
    }
    heights.push_back(scan->h);

    IdealFp next(p, {});
    bool monomial_state = true;
    for (const Poly& g : state.reduced_gb(config))
      monomial_state = monomial_state && g.is_monomial();
    std::optional<uint64_t> col = colength_of(state, cap_c, config);
    if (monomial_state && scan->nf.term_count() == 1) {
      next = canonical_ideal(colon_ideal(scan->scaled, scan->nf, config), config);
    } else if (col && *col * checked_pow(p, 3 * scan->h) <= la_guard) {
      uint64_t q = checked_pow(p, scan->h + (cap_c ? *cap_c : 0));
      next = la_colon(p, scan->scaled, scan->nf, q, config);
    } else if (p == 2) {
      FhLadder l1 = fh_ladder(spec, 1);
      uint64_t D = static_cast<uint64_t>(p - 1) * spec.fbar.degree() +
                   l1.dfp.degree() + 4;
      next = slice_transition(spec, scan->scaled, scan->nf, D, config);
    } else {
      throw LimitError("colon transition exceeds the linear-algebra ceiling");
    }

    uint64_t h = ideal_hash(next, config);
    for (size_t s = 0; s < states.size(); ++s) {
      if (hashes[s] != h || !ideal_equal(states[s], next, config)) continue;
      // states[s] == next: heights repeat with preperiod s.
      report.seq.preperiod.assign(heights.begin(),
                                  heights.begin() + static_cast<std::ptrdiff_t>(s));
      report.seq.period.assign(heights.begin() + static_cast<std::ptrdiff_t>(s),
                               heights.end());
      report.seq.certified = true;
      report.seq.canonicalize();
      report.steps_computed = static_cast<uint32_t>(heights.size());
      report.cycle_evidence = std::make_pair(static_cast<uint32_t>(s),
                                             static_cast<uint32_t>(states.size()));
      return report;
    }
    states.push_back(next);
    hashes.push_back(h);
    state = std::move(next);
  }

  report.seq = fold_heights(heights);
  report.steps_computed = static_cast<uint32_t>(heights.size());
  return report;
}

// ---------------------------------------------------------------------------
// Element pipeline
// ---------------------------------------------------------------------------

HeightReport multiheight_element(const LiftSpec& spec, uint32_t count, uint32_t h_cap) {
  uint32_t p = spec.p;
  constexpr uint64_t kExponentGuard = uint64_t{1} << 31;

  FhLadder ladder = fh_ladder(spec, 1);
  std::vector<uint32_t> heights;
  Poly S = Poly::constant(p, 1, 1);
  uint64_t H = 0;

  for (uint32_t r = 0; r < count; ++r) {
    bool found = false;
    for (uint32_t h = 1; h <= h_cap; ++h) {
      if (checked_pow(p, static_cast<uint32_t>(H + h)) >= kExponentGuard)
        throw OverflowError("element pipeline exponent overflow");
      extend_fh_ladder(ladder, spec, h);
      FrobPowerIdeal cap{p, static_cast<uint32_t>(H + h)};
      Poly W = poly_mul(frobenius_scale(S, checked_pow(p, h)), ladder.fh(h), cap);
      if (!W.is_zero()) {
        heights.push_back(h);
        S = std::move(W);
        H += h;
        found = true;
        break;
      }
    }
    if (!found) {
      if (r == 0) throw NotQuasiFSplitUpToError(h_cap);
      throw InternalError("element pipeline: no escape height at a later step");
    }
  }

  HeightReport report;
  report.pipeline = "element";
  report.steps_computed = count;
  report.seq.preperiod = heights;
  report.seq.period = {heights.back()};
  report.seq.certified = false;
  report.seq.canonicalize();

  // Witness chain: pair the surviving product against a dual monomial and
  // replay the trace maps outermost-first; accept the first candidate whose
  // innermost replay lands exactly on 1.
  TraceContext ctx{p, ladder.dfp, spec.fbar};
  Poly f1 = poly_pow(spec.fbar, p - 1);
  uint64_t q = checked_pow(p, static_cast<uint32_t>(H));
  std::vector<uint32_t> rev(heights.rbegin(), heights.rend());
  for (auto it = S.terms().rbegin(); it != S.terms().rend(); ++it) {
    Monomial dual = kMonomialOne;
    for (int v = 0; v < 3; ++v)
      dual[v] = static_cast<uint32_t>(q - 1 - it->first[v]);
    Poly a = Poly::from_monomial(p, 1, dual,
                                 static_cast<int64_t>(coeff_inv_mod_p(it->second, p)));
    std::vector<WitnessLink> links;
    Poly cur = a;
    for (size_t k = 0; k < rev.size(); ++k) {
      links.push_back(WitnessLink{rev[k], cur});
      cur = trace_u(theta_iterate(ctx, poly_mul(cur, f1), rev[k] - 1));
    }
    if (cur == Poly::constant(p, 1, 1)) {
      report.witness = std::move(links);
      break;
    }
  }
  if (report.witness.empty())
    throw InternalError("element pipeline: no witness candidate replayed to 1");
  return report;
}

// ---------------------------------------------------------------------------
// Fedder-type ideal pipeline (forward state recursion)
// ---------------------------------------------------------------------------

namespace {

struct FedderContext {
  uint32_t p;
  Poly f1;         // fbar^{p-1}
  IdealFp I1;      // (f^{p-1}) + I^{[p]} = (fbar^{p-1})
  IdealFp Ip;      // I^{[p]} = (fbar^p)
  TraceContext trace;
};

FedderContext fedder_context(const LiftSpec& spec, const GbConfig& config) {
  FhLadder ladder = fh_ladder(spec, 1);
  Poly f1 = poly_pow(spec.fbar, spec.p - 1);
  IdealFp I1 = canonical_ideal(IdealFp(spec.p, {f1}), config);
  IdealFp Ip = canonical_ideal(IdealFp(spec.p, {poly_pow(spec.fbar, spec.p)}), config);
  return FedderContext{spec.p, f1, I1, Ip,
                       TraceContext{spec.p, ladder.dfp, spec.fbar}};
}

// The chain ideals live in the local ring k[[x,y,z]]: a generator with a
// nonzero constant term is a unit, so the ideal is the whole ring.
std::vector<Poly> local_normalize(uint32_t p, std::vector<Poly> gens) {
  for (const Poly& g : gens)
    if (!g.is_zero() && g.terms().begin()->first == kMonomialOne)
      return {Poly::constant(p, 1, 1)};
  return gens;
}

// A_{j+1} = theta(F_* A_j) + I_1.
IdealFp fedder_chain_step(const FedderContext& fc, const IdealFp& A,
                          const GbConfig& config) {
  IdealFp img = ideal_image_theta(fc.trace, A);
  std::vector<Poly> gens = img.generators();
  for (const Poly& g : fc.I1.generators()) gens.push_back(g);
  return canonical_ideal(IdealFp(fc.p, local_normalize(fc.p, std::move(gens))),
                         config);
}

// Wrapping an inner state: u(F_* S) * f^{p-1} + I^{[p]}.
IdealFp fedder_wrap_start(const FedderContext& fc, const IdealFp& S,
                          const GbConfig& config) {
  IdealFp u_img = ideal_image_u(S);
  std::vector<Poly> gens;
  for (const Poly& g : local_normalize(fc.p, u_img.generators()))
    gens.push_back(poly_mul(g, fc.f1));
  for (const Poly& g : fc.Ip.generators()) gens.push_back(g);
  return canonical_ideal(IdealFp(fc.p, local_normalize(fc.p, std::move(gens))),
                         config);
}

// The chain ideal of an index tuple, built from the innermost (last) entry
// outward: the base is the plain chain of the last entry, and each earlier
// entry n wraps the state via u(F_* S) f^{p-1} + I^{[p]} followed by n - 1
// theta steps.
IdealFp fedder_tower(const FedderContext& fc, const std::vector<uint32_t>& tuple,
                     const GbConfig& config) {
  if (tuple.empty()) throw InternalError("fedder_tower: empty index tuple");
  for (uint32_t n : tuple)
    if (n == 0) throw InternalError("fedder_tower: indices must be >= 1");
  IdealFp A = fc.I1;
  for (uint32_t j = 1; j < tuple.back(); ++j) A = fedder_chain_step(fc, A, config);
  for (size_t i = tuple.size() - 1; i-- > 0;) {
    A = fedder_wrap_start(fc, A, config);
    for (uint32_t j = 1; j < tuple[i]; ++j) A = fedder_chain_step(fc, A, config);
  }
  return A;
}

}  // namespace

std::vector<IdealFp> multiheight_ideal(const LiftSpec& spec,
                                       const std::vector<uint32_t>& seq,
                                       const GbConfig& config) {
  FedderContext fc = fedder_context(spec, config);
  std::vector<IdealFp> out;
  for (size_t j = 0; j < seq.size(); ++j) {
    std::vector<uint32_t> tuple(seq.begin(),
                                seq.begin() + static_cast<std::ptrdiff_t>(j + 1));
    out.push_back(fedder_tower(fc, tuple, config));
  }
  return out;
}

std::vector<uint32_t> ideal_pipeline_heights(const LiftSpec& spec, uint32_t count,
                                             uint32_t h_cap, const GbConfig& config) {
  FedderContext fc = fedder_context(spec, config);
  FrobPowerIdeal target{spec.p, 1};
  std::vector<uint32_t> heights;
  for (uint32_t r = 0; r < count; ++r) {
    uint32_t found = 0;
    for (uint32_t n = 1; n <= h_cap; ++n) {
      std::vector<uint32_t> tuple = heights;
      tuple.push_back(n);
      if (!ideal_contained_in_monomial(fedder_tower(fc, tuple, config), target)) {
        found = n;
        break;
      }
    }
    if (found == 0) {
      if (r == 0) throw NotQuasiFSplitUpToError(h_cap);
      throw InternalError("ideal pipeline: no escape index at a later step");
    }
    heights.push_back(found);
  }
  return heights;
}

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

CertifyResult certify_preperiodic(const LiftSpec& spec, const HeightSeq& candidate,
                                  uint32_t t, const GbConfig& config) {
  if (t == 0) throw InternalError("certify_preperiodic: t must be >= 1");
  CertifyResult res;
  HeightSeq cand = candidate;
  cand.canonicalize();
  size_t r = cand.preperiod.size();
  size_t s = cand.period.size();
  if (s == 0) {
    res.ok = false;
    res.transcript.push_back("candidate period is empty; nothing to certify");
    return res;
  }
  size_t L = r + static_cast<size_t>(t) * s;
  std::vector<uint32_t> prefix = cand.prefix(L);

  FedderContext fc = fedder_context(spec, config);
  FrobPowerIdeal target{spec.p, 1};

  // Condition 1: every prefix entry is the least escape index given the
  // entries before it.
  for (size_t m = 0; m < L; ++m) {
    uint32_t n_m = prefix[m];
    for (uint32_t n = 1; n <= n_m; ++n) {
      std::vector<uint32_t> tuple(prefix.begin(),
                                  prefix.begin() + static_cast<std::ptrdiff_t>(m));
      tuple.push_back(n);
      bool contained =
          ideal_contained_in_monomial(fedder_tower(fc, tuple, config), target);
      if (n < n_m && !contained) {
        res.transcript.push_back("entry " + std::to_string(m) + ": chain escapes at " +
                                 std::to_string(n) + " before the prescribed " +
                                 std::to_string(n_m));
        res.ok = false;
        return res;
      }
      if (n == n_m && contained) {
        res.transcript.push_back("entry " + std::to_string(m) +
                                 ": chain still contained at the prescribed " +
                                 std::to_string(n_m));
        res.ok = false;
        return res;
      }
    }
    res.transcript.push_back("entry " + std::to_string(m) + ": minimal escape at " +
                             std::to_string(n_m));
  }

  // Conditions 2 and 3: the pure-period state after t - 1 period repetitions
  // plus a partial period agrees with the state after t repetitions, and the
  // same holds with the last index decremented.
  auto period_tuple = [&](uint32_t reps, size_t u, uint32_t last) {
    std::vector<uint32_t> tuple;
    tuple.reserve(static_cast<size_t>(reps) * s + u + 1);
    for (uint32_t k = 0; k < reps; ++k)
      tuple.insert(tuple.end(), cand.period.begin(), cand.period.end());
    for (size_t i = 0; i < u; ++i) tuple.push_back(cand.period[i]);
    tuple.push_back(last);
    return tuple;
  };
  for (size_t u = 0; u < s; ++u) {
    IdealFp lhs = fedder_tower(fc, period_tuple(t - 1, u, cand.period[u]), config);
    IdealFp rhs = fedder_tower(fc, period_tuple(t, u, cand.period[u]), config);
    bool equal = ideal_equal(lhs, rhs, config);
    res.transcript.push_back("period state u=" + std::to_string(u) +
                             (equal ? ": repeat confirmed" : ": states differ"));
    if (!equal) {
      res.ok = false;
      return res;
    }
    uint32_t n = cand.period[u];
    if (n >= 2) {
      IdealFp lhs2 = fedder_tower(fc, period_tuple(t - 1, u, n - 1), config);
      IdealFp rhs2 = fedder_tower(fc, period_tuple(t, u, n - 1), config);
      bool eq2 = ideal_equal(lhs2, rhs2, config);
      res.transcript.push_back("period state u=" + std::to_string(u) +
                               " at decremented index " + std::to_string(n - 1) +
                               (eq2 ? ": repeat confirmed" : ": states differ"));
      if (!eq2) {
        res.ok = false;
        return res;
      }
    }
  }
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

HeightReport multiheight(const LiftSpec& spec, uint32_t h_cap, uint32_t r_max,
                         const GbConfig& config) {
  std::optional<HeightReport> colon;
  try {
    HeightReport rep = multiheight_colon(spec, h_cap, r_max, config);
    if (rep.seq.certified) return rep;
    colon = std::move(rep);
  } catch (const LimitError&) {
    // Fall through to the element route.
  }

  std::set<std::string> tried;
  std::optional<HeightReport> last;
  for (uint32_t count : {2u, 4u, 6u, 8u, 10u}) {
    HeightReport rep = multiheight_element(spec, count, h_cap);
    std::vector<uint32_t> heights = rep.seq.prefix(count);
    for (const auto& [r0, s] : fold_candidates(heights)) {
      HeightSeq cand;
      cand.preperiod.assign(heights.begin(),
                            heights.begin() + static_cast<std::ptrdiff_t>(r0));
      cand.period.assign(heights.begin() + static_cast<std::ptrdiff_t>(r0),
                         heights.begin() + static_cast<std::ptrdiff_t>(r0 + s));
      cand.certified = true;
      cand.canonicalize();
      std::string key = height_seq_to_json(cand);
      if (!tried.insert(key).second) continue;
      CertifyResult cert = certify_preperiodic(spec, cand, 2, config);
      if (cert.ok) {
        HeightReport out;
        out.seq = cand;
        out.seq.certified = true;
        out.pipeline = "element+certify";
        out.steps_computed = count;
        out.witness = std::move(rep.witness);
        return out;
      }
    }
    last = std::move(rep);
  }
  return *last;
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

StableOneResult stable_one_test(const LiftSpec& spec,
                                const std::vector<uint32_t>& prefix,
                                const IdealFp& J, const Poly& a,
                                const GbConfig& config) {
  StableOneResult res;
  uint32_t p = spec.p;
  Poly f1 = poly_pow(spec.fbar, p - 1);

  std::vector<Poly> gens;
  for (const Poly& g : J.generators()) gens.push_back(poly_mul(f1, g));
  for (int v = 0; v < 3; ++v) {
    Monomial m = kMonomialOne;
    m[v] = p;
    gens.push_back(Poly::from_monomial(p, 1, m));
  }
  IdealFp lifted(p, std::move(gens));
  IdealFp image = ideal_image_u(lifted);
  res.precondition_ok = ideal_contained_in(J, image, config);
  if (!res.precondition_ok) {
    res.tail_is_one = false;
    res.detail = "precondition failed: J is not contained in u(F_*(f^{p-1} J + m^{[p]}))";
    return res;
  }

  FhLadder ladder = fh_ladder(spec, 1);
  Poly S = Poly::constant(p, 1, 1);
  uint64_t H = 0;
  for (uint32_t h : prefix) {
    extend_fh_ladder(ladder, spec, h);
    H += h;
    FrobPowerIdeal cap{p, static_cast<uint32_t>(H)};
    S = poly_mul(frobenius_scale(S, checked_pow(p, h)), ladder.fh(h), cap);
  }
  Poly a1 = a.level() == 1 ? a : reduce_coeffs_mod_p(a);
  res.tail_is_one =
      !poly_mul(a1, S, FrobPowerIdeal{p, static_cast<uint32_t>(H)}).is_zero();
  res.detail = res.tail_is_one
                   ? "witness product escapes the Frobenius power; all later heights are 1"
                   : "witness product lies in the Frobenius power";
  return res;
}

// ---------------------------------------------------------------------------
// Naive multi-height
// ---------------------------------------------------------------------------

namespace {

struct NaiveRun {
  std::vector<uint32_t> entries;
  uint64_t bound_used = 0;
  std::vector<std::vector<std::string>> bases;
};

NaiveRun naive_run(const Poly& fbar, uint32_t r_max, uint32_t h_cap,
                   std::optional<uint64_t> degree_bound, const GbConfig& config) {
  uint32_t p = fbar.p();
  Poly fbar1 = fbar.level() == 1 ? fbar : reduce_coeffs_mod_p(fbar);
  Poly dfp = delta1(poly_pow(lift_coeffs_to_level2(fbar1), p - 1));
  TraceContext ctx{p, dfp, fbar1};
  Poly f1 = poly_pow(fbar1, p - 1);
  IdealFp I1 = canonical_ideal(IdealFp(p, {f1}), config);
  IdealFp Ip = canonical_ideal(IdealFp(p, {poly_pow(fbar1, p)}), config);
  FrobPowerIdeal target{p, 1};

  NaiveRun run;

  // One theta(F_*(A ∩ Ker u)) + I_1 step at the working degree bound.
  auto step = [&](const IdealFp& A) {
    uint64_t maxdeg = 0;
    for (const Poly& g : A.reduced_gb(config)) maxdeg = std::max(maxdeg, g.degree());
    uint64_t D = degree_bound.value_or(p * (maxdeg + 3));
    run.bound_used = std::max(run.bound_used, D);
    std::vector<Poly> gens = theta_image_of_kernel_u(ctx, A, D);
    for (const Poly& g : I1.generators()) gens.push_back(g);
    return canonical_ideal(IdealFp(p, local_normalize(p, std::move(gens))), config);
  };
  // Wrapping an inner state: u(F_* S) f^{p-1} + I^{[p]}.
  auto wrap_start = [&](const IdealFp& S) {
    IdealFp u_img = ideal_image_u(S);
    std::vector<Poly> gens;
    for (const Poly& g : local_normalize(p, u_img.generators()))
      gens.push_back(poly_mul(g, f1));
    for (const Poly& g : Ip.generators()) gens.push_back(g);
    return canonical_ideal(IdealFp(p, local_normalize(p, std::move(gens))), config);
  };
  // The chain ideal of an index tuple, innermost (last) entry first.
  auto tower = [&](const std::vector<uint32_t>& tuple) {
    IdealFp A = I1;
    for (uint32_t j = 1; j < tuple.back(); ++j) A = step(A);
    for (size_t i = tuple.size() - 1; i-- > 0;) {
      A = wrap_start(A);
      for (uint32_t j = 1; j < tuple[i]; ++j) A = step(A);
    }
    return A;
  };

  for (uint32_t r = 0; r < r_max; ++r) {
    uint32_t found = 0;
    std::optional<IdealFp> escape_state;
    for (uint32_t m = 1; m <= h_cap; ++m) {
      std::vector<uint32_t> tuple = run.entries;
      tuple.push_back(m);
      IdealFp A = tower(tuple);
      if (!ideal_contained_in_monomial(A, target)) {
        found = m;
        escape_state = std::move(A);
        break;
      }
    }
    if (found == 0) {
      if (r == 0) throw NotQuasiFSplitUpToError(h_cap);
      throw InternalError("naive chain: no escape index at a later step");
    }
    run.entries.push_back(found);
    run.bases.push_back(ideal_to_strings(*escape_state, config));
  }
  return run;
}

}  // namespace

NaiveResult naive_multiheight(const Poly& fbar, uint32_t r_max, uint32_t h_cap,
                              std::optional<uint64_t> degree_bound,
                              const GbConfig& config) {
  NaiveRun run = naive_run(fbar, r_max, h_cap, degree_bound, config);
  NaiveResult res;
  res.entries = run.entries;
  res.bound_used = run.bound_used;
  res.prefix_ideal_bases = run.bases;
  res.degree_bound_stable = false;
  if (!degree_bound && run.bound_used <= 32) {
    NaiveRun doubled = naive_run(fbar, r_max, h_cap, 2 * run.bound_used, config);
    res.degree_bound_stable = doubled.entries == run.entries;
  }
  return res;
}

}  // namespace qfs
