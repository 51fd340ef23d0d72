/**
 * Sparse deterministic row-echelon accumulation over F_p, plus a monomial
 * column indexer.  This is the shared linear-algebra engine behind the
 * kernel-of-trace computations, the finite-colength colon solver, and the
 * naive multi-height chain.
 *
 * Rows are sorted sparse vectors; insertion reduces an incoming row against
 * the accumulated pivot rows and either records a new pivot or discards the
 * row as dependent.  All tie-breaking is positional, so results are
 * deterministic for a fixed insertion sequence.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qfs/ring.hpp"

namespace qfs {

/** One sparse F_p row: entries sorted by column index, coefficients nonzero. */
struct SparseRow {
  std::vector<std::pair<uint32_t, uint32_t>> entries;  // (column, coefficient)

  bool empty() const { return entries.empty(); }
  uint32_t lead_col() const { return entries.front().first; }
};

/** r += c * s over F_p, merging sorted entry lists. */
void row_axpy(SparseRow& r, uint32_t c, const SparseRow& s, uint32_t p);

/**
 * Incremental echelon form: at most one pivot row per column, pivot
 * coefficient normalized to 1.
 */
class SparseEchelon {
 public:
  explicit SparseEchelon(uint32_t p);

  /** Reduces `row` against the pivots; if nonzero remains, normalizes and
   *  stores it as a new pivot and returns true, else returns false. */
  bool insert(SparseRow row);

  /** Reduction only (const): the normal form of `row` against the pivots. */
  SparseRow reduce(SparseRow row) const;

  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseRow>& rows() const { return rows_; }
  /** Pivot row index for a column, or -1. */
  int32_t pivot_row(uint32_t col) const;

 private:
  uint32_t p_;
  std::vector<SparseRow> rows_;
  std::unordered_map<uint32_t, uint32_t> pivot_of_col_;
};

/**
 * Bijection between the monomials seen so far and dense column indices.
 * Column ids are allocated in first-seen order; deterministic given a
 * deterministic construction sequence.
 */
class MonomialIndexer {
 public:
  uint32_t id_of(const Monomial& m);
  std::optional<uint32_t> try_id_of(const Monomial& m) const;
  const Monomial& monomial_of(uint32_t id) const;
  std::size_t size() const { return monomials_.size(); }

 private:
  struct ArrayHash {
    std::size_t operator()(const Monomial& m) const;
  };
  std::unordered_map<Monomial, uint32_t, ArrayHash> ids_;
  std::vector<Monomial> monomials_;
};

/** Converts a polynomial to a sparse row (allocating column ids as needed). */
SparseRow poly_to_row(const Poly& g, MonomialIndexer& indexer);

/** Converts a sparse row back to a polynomial over F_p. */
Poly row_to_poly(const SparseRow& row, const MonomialIndexer& indexer, uint32_t p);

}  // namespace qfs
