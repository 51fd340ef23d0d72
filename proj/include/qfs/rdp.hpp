/**
 * Rational double point catalog and the D-series closed forms.
 *
 * The catalog covers the low-characteristic hypersurface forms of the A, D
 * and E singularities (p in {2, 3, 5}), keyed by family tags like "E8^1".
 * For the two-parameter D-series at p = 2,
 *
 *   D_{2n}^r:    z^2 + x^2 y + x y^n + x y^{n-r} z      (1 <= r < n)
 *   D_{2n+1}^r:  z^2 + x^2 y + y^n z + x y^{n-r} z
 *
 * the heights follow an explicit integer recursion: with alpha_0 = 0,
 *
 *   without xz lift:  e_i = min{ e >= 1 : 2^e (1+alpha_i) - 2^{e-1} - (n-r) >= 0 },
 *                     alpha_{i+1} = 2^{e_i} (1+alpha_i) - 2^{e_i - 1} - (n-r);
 *   with xz lift:     e_i = min{ e >= 1 : 2^e (1+alpha_i) - 1 - (n-r) >= 0 },
 *                     alpha_{i+1} = 2^{e_i} (1+alpha_i) - 1 - (n-r).
 *
 * 0 <= alpha_i < n-r always, so the pair sequence cycles within n-r steps.
 * The closed forms resolved here:
 *   - G = 0:  if alpha_i < r for all i then h_i = e_i for all i
 *             (threshold 1/(2(n-r)-1)); otherwise, with m minimal such that
 *             alpha_m >= r, the heights are (e_0..e_{m-1}, 1, 1, ...).
 *   - G = xz: if alpha_i < r for all i then h_i = e_i (threshold 1/(n-r));
 *             otherwise no closed form is available and callers fall back
 *             to the general engine.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfs/delta.hpp"
#include "qfs/multiheight.hpp"
#include "qfs/threshold.hpp"

namespace qfs {

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct RdpSpec {
  uint32_t p = 2;
  std::string family;  // e.g. "A1", "D2n", "D2n+1", "E6^0", ..., "E8^4"
  uint32_t n = 0;      // D-series only
  uint32_t r = 0;      // D-series only (0 means the r = 0 form)
  std::string equation;  // rendered equation text, parseable by parse_poly
};

/**
 * Equation for a catalog entry.  For the E/A families `n` and `r` are
 * ignored; for "D2n"/"D2n+1" the equation is instantiated at (n, r).
 * Throws ParseError for unknown (p, family) combinations.
 */
RdpSpec catalog_equation(uint32_t p, const std::string& family, uint32_t n = 0,
                         uint32_t r = 0);

/** All catalog families available at a given p, in report order. */
std::vector<std::string> catalog_families(uint32_t p);

/**
 * Catalog entries whose threshold is 1 (all heights equal 1) with the
 * monomial lift, including a D-series witness at p = 2.
 */
std::vector<RdpSpec> taut_catalog(uint32_t p);

// ---------------------------------------------------------------------------
// Alpha/e recursion
// ---------------------------------------------------------------------------

enum class DVariant { kNoXz, kXz };  // which recursion (see file comment)

struct AlphaESeq {
  std::vector<uint32_t> alphas;  // alpha_0, alpha_1, ... up to one full cycle
  std::vector<uint32_t> es;      // e_0, e_1, ...
  DVariant variant;
  // Indices (s, t), s < t, with alpha_s = alpha_t: entries repeat with
  // preperiod s and period t - s.
  std::pair<uint32_t, uint32_t> cycle;
};

/** Run the recursion until the first repeated alpha (within n - r steps). */
AlphaESeq alpha_e_sequence(uint32_t n, uint32_t r, DVariant variant,
                           uint32_t step_cap = 4096);

// ---------------------------------------------------------------------------
// Closed forms and shape checks
// ---------------------------------------------------------------------------

struct DSeriesClosedForm {
  HeightSeq seq;  // certified
  PptRational ppt;
};

/**
 * Closed-form multi-height and threshold for the D-series entry, when one is
 * available (see file comment).  `g_tag` is "0" or "xz"; `variant` selects
 * the defining equation family (kNoXz = D_{2n}/D_{2n+1} with G = 0 uses the
 * no-xz recursion; g_tag "xz" uses the xz recursion).  Returns nullopt when
 * the case is engine-only.
 */
std::optional<DSeriesClosedForm> dseries_closed_form(uint32_t n, uint32_t r,
                                                     const std::string& g_tag);

/** Classification of f_h modulo the expected monomial box. */
enum class FhShape { kZero, kPredictedMonomial, kOther };

/**
 * Check f_h against the D-series shape prediction: modulo
 * (x^{2^h}, y^{2^h (1+alpha)}, z^{2^h}, 2), the initial (grevlex-least)
 * term of f_h is x^{2^h-1} y^{2^{h-1}-1+(n-r)} z^{2^h-1} (no-xz) or
 * x^{2^h-1} y^{n-r} z^{2^h-1} (xz).
 */
FhShape fh_shape_check(const LiftSpec& spec, uint32_t n, uint32_t r,
                       DVariant variant, uint32_t alpha, uint32_t h);

// ---------------------------------------------------------------------------
// Threshold-set scan
// ---------------------------------------------------------------------------

struct ScanRow {
  uint32_t p;
  std::string family;
  uint32_t n;
  uint32_t r;
  std::string g_tag;
  HeightSeq seq;
  PptRational ppt;
  std::string pipeline;  // "closed-form" or "colon"
  uint64_t runtime_ms;
};

struct ScanStats {
  std::vector<PptRational> distinct_values;  // sorted ascending
  std::vector<PptRational> gaps;             // consecutive differences, all > 0
  // counts_below[m] = number of distinct values < 1/m, for m = 1..max_m.
  std::vector<size_t> counts_below;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  ScanStats stats;
};

/**
 * Compute thresholds across the D-series (both parities) for 1 <= r < n up
 * to n_max and the listed lifts; G tags outside {"0", "xz"} run through the
 * general engine.  Rows are deterministic (sorted by (p, family, n, r, G))
 * and independent of the worker count (`jobs`; 0 means one per hardware
 * thread).
 */
ScanResult sigma_scan(uint32_t p, uint32_t n_max,
                      const std::vector<std::string>& g_tags = {"0", "xz"},
                      uint32_t h_cap = 12, uint32_t r_max = 64,
                      uint32_t jobs = 0);

/** Render rows as TSV with a header line. */
std::string scan_to_tsv(const ScanResult& scan);

/** Render rows and stats as a JSON document. */
std::string scan_to_json(const ScanResult& scan);

}  // namespace qfs
