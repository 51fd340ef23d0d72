#include "qfs/linalg.hpp"

#include <algorithm>

namespace qfs {

void row_axpy(SparseRow& r, uint32_t c, const SparseRow& s, uint32_t p) {
  c %= p;
  if (c == 0 || s.empty()) return;
  std::vector<std::pair<uint32_t, uint32_t>> merged;
  merged.reserve(r.entries.size() + s.entries.size());
  std::size_t i = 0, j = 0;
  while (i < r.entries.size() || j < s.entries.size()) {
    if (j >= s.entries.size() ||
        (i < r.entries.size() && r.entries[i].first < s.entries[j].first)) {
      merged.push_back(r.entries[i++]);
    } else if (i >= r.entries.size() || s.entries[j].first < r.entries[i].first) {
      uint32_t v = coeff_mul(c, s.entries[j].second, p);
      if (v != 0) merged.emplace_back(s.entries[j].first, v);
      ++j;
    } else {
      uint32_t v = coeff_add(r.entries[i].second, coeff_mul(c, s.entries[j].second, p), p);
      if (v != 0) merged.emplace_back(r.entries[i].first, v);
      ++i;
      ++j;
    }
  }
  r.entries = std::move(merged);
}

SparseEchelon::SparseEchelon(uint32_t p) : p_(p) {}

SparseRow SparseEchelon::reduce(SparseRow row) const {
  while (!row.empty()) {
    auto it = pivot_of_col_.find(row.lead_col());
    if (it == pivot_of_col_.end()) {
      // The lead survives; eliminate any later pivot columns too, so the
      // result is fully reduced against every pivot row.
      bool changed = false;
      for (std::size_t k = 1; k < row.entries.size(); ++k) {
        auto jt = pivot_of_col_.find(row.entries[k].first);
        if (jt != pivot_of_col_.end()) {
          row_axpy(row, coeff_neg(row.entries[k].second, p_), rows_[jt->second], p_);
          changed = true;
          break;
        }
      }
      if (!changed) return row;
    } else {
      row_axpy(row, coeff_neg(row.entries.front().second, p_), rows_[it->second], p_);
    }
  }
  return row;
}

bool SparseEchelon::insert(SparseRow row) {
  row = reduce(std::move(row));
  if (row.empty()) return false;
  uint32_t lead = row.lead_col();
  uint32_t inv = coeff_inv_mod_p(row.entries.front().second, p_);
  if (inv != 1) {
    for (auto& [col, v] : row.entries) v = coeff_mul(v, inv, p_);
  }
  pivot_of_col_.emplace(lead, static_cast<uint32_t>(rows_.size()));
  rows_.push_back(std::move(row));
  return true;
}

int32_t SparseEchelon::pivot_row(uint32_t col) const {
  auto it = pivot_of_col_.find(col);
  return it == pivot_of_col_.end() ? -1 : static_cast<int32_t>(it->second);
}

std::size_t MonomialIndexer::ArrayHash::operator()(const Monomial& m) const {
  // FNV-1a over the exponent bytes.
  std::size_t h = 1469598103934665603ull;
  for (uint32_t e : m) {
    for (int b = 0; b < 4; ++b) {
      h ^= (e >> (8 * b)) & 0xFFu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

uint32_t MonomialIndexer::id_of(const Monomial& m) {
  auto it = ids_.find(m);
  if (it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(monomials_.size());
  ids_.emplace(m, id);
  monomials_.push_back(m);
  return id;
}

std::optional<uint32_t> MonomialIndexer::try_id_of(const Monomial& m) const {
  auto it = ids_.find(m);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const Monomial& MonomialIndexer::monomial_of(uint32_t id) const {
  return monomials_.at(id);
}

SparseRow poly_to_row(const Poly& g, MonomialIndexer& indexer) {
  SparseRow row;
  row.entries.reserve(g.term_count());
  for (const auto& [m, c] : g.terms())
    row.entries.emplace_back(indexer.id_of(m), c % g.p());
  std::erase_if(row.entries, [](const auto& e) { return e.second == 0; });
  std::sort(row.entries.begin(), row.entries.end());
  return row;
}

Poly row_to_poly(const SparseRow& row, const MonomialIndexer& indexer, uint32_t p) {
  Poly g(p, 1);
  for (const auto& [col, c] : row.entries)
    g.add_term(indexer.monomial_of(col), static_cast<int64_t>(c));
  return g;
}

}  // namespace qfs
