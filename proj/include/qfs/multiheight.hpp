/**
 * Quasi-F-split heights and multi-heights of hypersurface lifts, computed by
 * three interchangeable pipelines:
 *
 *  - colon:   the primary engine.  Maintains a state ideal J_r with
 *             J_{r+1} = (J_r^{[p^{h_r}]} : f_{h_r}) and finds each h_r as the
 *             least h with f_h not in J_r^{[p^h]}.  On deep tails the state
 *             may be replaced by the ideal generated by its low-degree slice,
 *             which determines all future heights (membership of f_h in
 *             J^{[p^h]} and the next slice only consult that slice).  Cycle
 *             detection on the chain of reduced bases certifies eventual
 *             periodicity.
 *  - element: capped power-products f_{h_0}^{p^{h_1+...+h}} ... f_h tested
 *             against Frobenius powers of the maximal ideal.  Fast for short
 *             prefixes and produces explicit splitting witnesses; never
 *             certified.
 *  - ideal:   the Fedder-type ideal recursion I_(n_0,...,n_r) evaluated as a
 *             forward state recursion (appending an index extends the chain
 *             from the previous state).  Used for cross-checks and for the
 *             certification predicate.
 *
 * Also provides the naive multi-height (the lift-independent variant that
 * intersects with Ker u before applying theta) and the stabilization test
 * that proves an all-ones tail from a single witness element.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfs/delta.hpp"
#include "qfs/groebner.hpp"
#include "qfs/ring.hpp"
#include "qfs/trace.hpp"

namespace qfs {

// ---------------------------------------------------------------------------
// Height sequences
// ---------------------------------------------------------------------------

/**
 * An eventually periodic sequence of heights (h_0, h_1, ...), stored as a
 * finite preperiod followed by a nonempty period that repeats forever.
 *
 * Canonical form (enforced by canonicalize, required by operator==):
 * the period has minimal length, and the preperiod is as short as possible
 * (trailing preperiod entries equal to the corresponding rotation of the
 * period are absorbed into it).  Entries are >= 1 and every entry is
 * <= entry(0).
 */
struct HeightSeq {
  std::vector<uint32_t> preperiod;
  std::vector<uint32_t> period;  // nonempty
  bool certified = false;        // true when periodicity was proved, not just observed

  /** Entry h_i of the infinite sequence. */
  uint32_t entry(size_t i) const;

  /** First n entries of the infinite sequence. */
  std::vector<uint32_t> prefix(size_t n) const;

  /** Rewrite into the canonical minimal-period / minimal-preperiod form. */
  void canonicalize();

  /** Compare the underlying infinite sequences (canonicalizes copies). */
  bool same_sequence(const HeightSeq& other) const;

  bool operator==(const HeightSeq& other) const;
};

/** Render as JSON: {"preperiod":[...],"period":[...],"certified":bool}. */
std::string height_seq_to_json(const HeightSeq& seq);

/** Human-readable form, e.g. "(4; 1)" for preperiod (4), period (1). */
std::string height_seq_to_string(const HeightSeq& seq);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/** One link of a splitting-witness chain: a_i with u^{h_i}(F_*^{h_i}(a_{i+1} f^{p-1})) = a_i. */
struct WitnessLink {
  uint32_t height;
  Poly element;
};

struct HeightReport {
  HeightSeq seq;
  std::string pipeline;  // "colon", "element", or "ideal"
  uint32_t steps_computed = 0;
  // For the colon pipeline: indices (s, t) with state_s == state_t, s < t,
  // proving the heights repeat with preperiod s and period t - s.
  std::optional<std::pair<uint32_t, uint32_t>> cycle_evidence;
  // For the element pipeline: chain a_r, ..., a_0 with a_0 = 1 witnessing
  // the computed prefix, outermost first.
  std::vector<WitnessLink> witness;
};

/** Raised results for a lift that is not quasi-F-split up to the cap. */
struct NotQuasiFSplitUpTo {
  uint32_t h_cap;
};

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

/**
 * The quasi-F-split height h_0: the least h with f_h not in m^{[p^h]},
 * searching h = 1..h_cap.  nullopt means not quasi-F-split up to the cap.
 */
std::optional<uint32_t> qfs_height(const LiftSpec& spec, uint32_t h_cap = 12,
                                   const GbConfig& config = {});

/**
 * The multi-height (h_0, h_1, ...) by the colon pipeline.  Runs until either
 * the state ideal repeats (result certified, with cycle_evidence set) or
 * r_max entries have been produced (result uncertified; the observed tail is
 * folded into a period heuristically).  Throws NotQuasiFSplitUpToError when
 * h_0 does not exist below the cap, and LimitError when an intermediate
 * colon exceeds the configured ceilings.
 */
HeightReport multiheight_colon(const LiftSpec& spec, uint32_t h_cap = 12,
                               uint32_t r_max = 64, const GbConfig& config = {});

/**
 * First `count` entries by the element pipeline, with a splitting-witness
 * chain for the computed prefix.  Entirely independent of the Groebner
 * machinery.  Throws OverflowError if p^{h_0+...+h_r} would overflow the
 * exponent width.
 */
HeightReport multiheight_element(const LiftSpec& spec, uint32_t count,
                                 uint32_t h_cap = 12);

/**
 * The multi-height with the best available certification.  Tries the colon
 * pipeline first; when one of its colon computations exceeds the
 * linear-algebra ceilings, falls back to an element-pipeline prefix whose
 * observed repetition is verified with certify_preperiodic.  The report's
 * pipeline field records the route taken ("colon", "element+certify", or
 * "element" for an uncertified fold when no certification succeeded).
 */
HeightReport multiheight(const LiftSpec& spec, uint32_t h_cap = 12,
                         uint32_t r_max = 64, const GbConfig& config = {});

/**
 * The ideals I_(seq) of the Fedder-type recursion for every prefix of `seq`:
 * result[k] = I_(seq[0..k]), each computed from the previous one by the
 * forward state recursion.
 */
std::vector<IdealFp> multiheight_ideal(const LiftSpec& spec,
                                       const std::vector<uint32_t>& seq,
                                       const GbConfig& config = {});

/**
 * First `count` entries by the ideal pipeline: each entry is found as
 * inf { n : I_(prefix, n) not contained in m^{[p]} }.
 */
std::vector<uint32_t> ideal_pipeline_heights(const LiftSpec& spec, uint32_t count,
                                             uint32_t h_cap = 12,
                                             const GbConfig& config = {});

// ---------------------------------------------------------------------------
// Certification and stabilization
// ---------------------------------------------------------------------------

struct CertifyResult {
  bool ok = false;
  std::vector<std::string> transcript;  // one line per condition checked
};

/**
 * Verify by the ideal pipeline that `candidate` (preperiod n_0..n_{r-1},
 * period of length s) is the multi-height, unrolling the period t times:
 *  (1) every entry of the length r + t*s prefix is inf-minimal given the
 *      entries before it;
 *  (2) I_(sigma^{t-1}, n_r..n_{r+u}) = I_(sigma^t, n_r..n_{r+u}) for each
 *      u < s, where sigma is the period block (no preperiod in the indices);
 *  (3) the same equalities with the last index decremented, whenever it
 *      is >= 2.
 */
CertifyResult certify_preperiodic(const LiftSpec& spec, const HeightSeq& candidate,
                                  uint32_t t = 2, const GbConfig& config = {});

struct StableOneResult {
  bool precondition_ok = false;  // J contained in u(F_* I^J_1)
  bool tail_is_one = false;      // witness found: all later heights are 1
  std::string detail;
};

/**
 * The stabilization test: given a monomial ideal J with
 * J contained in u(F_*(f^{p-1} J + m^{[p]})), and an element a of J with
 * a * f_{h_0}^{p^{h_1+...+h_r}} ... f_{h_r} not in m^{[p^{h_0+...+h_r}]}
 * (prefix = (h_0..h_r)), every height after index r equals 1.  Reports a
 * precondition failure distinctly from a test failure.
 */
StableOneResult stable_one_test(const LiftSpec& spec,
                                const std::vector<uint32_t>& prefix,
                                const IdealFp& J, const Poly& a,
                                const GbConfig& config = {});

// ---------------------------------------------------------------------------
// Naive multi-height
// ---------------------------------------------------------------------------

struct NaiveResult {
  std::vector<uint32_t> entries;
  bool degree_bound_stable = false;  // doubling the bound left entries unchanged
  uint64_t bound_used = 0;
  // Reduced basis (rendered) of the chain ideal at each prefix
  // (entries[0..k]), for cross-checks against the lift-dependent chain.
  std::vector<std::vector<std::string>> prefix_ideal_bases;
};

/**
 * The naive multi-height (m_0, m_1, ...): the variant of the ideal recursion
 * that replaces theta(F_* I) by theta(F_*(I /\ Ker u)).  Depends only on
 * fbar, not the lift.  m_0 is the classical quasi-F-split height.  The
 * kernel intersection is degree-bounded; the result records the bound and
 * whether doubling it changed anything.
 */
NaiveResult naive_multiheight(const Poly& fbar, uint32_t r_max, uint32_t h_cap = 12,
                              std::optional<uint64_t> degree_bound = std::nullopt,
                              const GbConfig& config = {});

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class NotQuasiFSplitUpToError : public std::runtime_error {
 public:
  explicit NotQuasiFSplitUpToError(uint32_t h_cap)
      : std::runtime_error("not quasi-F-split up to height cap " +
                           std::to_string(h_cap)),
        h_cap_(h_cap) {}
  uint32_t h_cap() const { return h_cap_; }

 private:
  uint32_t h_cap_;
};

}  // namespace qfs
