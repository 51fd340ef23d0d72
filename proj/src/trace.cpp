#include "qfs/trace.hpp"

#include <algorithm>
#include <functional>

#include "qfs/linalg.hpp"

namespace qfs {

namespace {

// Monomials x^a y^b z^c of total degree <= bound, enumerated deterministically.
std::vector<Monomial> xyz_monomials_up_to(uint64_t bound) {
  std::vector<Monomial> out;
  uint32_t b32 = static_cast<uint32_t>(std::min<uint64_t>(bound, 0xFFFFFFFFull));
  for (uint32_t a = 0; a <= b32; ++a) {
    for (uint32_t b = 0; a + b <= b32; ++b) {
      for (uint32_t c = 0; a + b + c <= b32; ++c) {
        out.push_back(Monomial{a, b, c, 0});
      }
    }
  }
  return out;
}

// Columns for the fused (left || right) eliminations: the left block must
// come first so that a pivot row whose lead falls in the right block has an
// identically zero left part.
constexpr uint32_t kRightBlockOffset = uint32_t{1} << 24;

SparseRow fused_row(const Poly& left, const Poly& right, MonomialIndexer& left_idx,
                    MonomialIndexer& right_idx) {
  SparseRow row;
  row.entries.reserve(left.term_count() + right.term_count());
  for (const auto& [m, c] : left.terms())
    row.entries.emplace_back(left_idx.id_of(m), c);
  for (const auto& [m, c] : right.terms())
    row.entries.emplace_back(kRightBlockOffset + right_idx.id_of(m), c);
  std::sort(row.entries.begin(), row.entries.end());
  return row;
}

}  // namespace

Poly trace_u(const Poly& g) {
  if (g.level() != 1) throw InternalError("trace_u: input must be over F_p");
  uint32_t p = g.p();
  Poly out(p, 1);
  for (const auto& [m, c] : g.terms()) {
    if (m[kVarT] != 0) throw InternalError("trace_u: input must be t-free");
    bool survives = true;
    Monomial image = kMonomialOne;
    for (int v = 0; v < 3; ++v) {
      if (m[v] % p != p - 1) {
        survives = false;
        break;
      }
      image[v] = (m[v] - (p - 1)) / p;
    }
    if (survives) out.add_term(image, static_cast<int64_t>(c));
  }
  return out;
}

Poly theta(const TraceContext& ctx, const Poly& g) {
  return trace_u(poly_mul(ctx.dfp, g));
}

Poly theta_iterate(const TraceContext& ctx, const Poly& g, uint32_t k) {
  Poly out = g;
  for (uint32_t i = 0; i < k; ++i) out = theta(ctx, out);
  return out;
}

namespace {

// Images u(s * g) (or theta(s * g)) over the p^3 monomial shifts s generate
// the image ideal, by p^{-1}-semilinearity.
IdealFp shift_image(const IdealFp& I, uint32_t p,
                    const std::function<Poly(const Poly&)>& image) {
  std::vector<Poly> gens;
  for (const Poly& g : I.generators()) {
    for (uint32_t a = 0; a < p; ++a) {
      for (uint32_t b = 0; b < p; ++b) {
        for (uint32_t c = 0; c < p; ++c) {
          Poly shifted = poly_mul(Poly::from_monomial(p, 1, Monomial{a, b, c, 0}), g);
          Poly img = image(shifted);
          if (!img.is_zero()) gens.push_back(std::move(img));
        }
      }
    }
  }
  return IdealFp(p, std::move(gens));
}

}  // namespace

IdealFp ideal_image_u(const IdealFp& I) {
  return shift_image(I, I.p(), [](const Poly& g) { return trace_u(g); });
}

IdealFp ideal_image_theta(const TraceContext& ctx, const IdealFp& I) {
  return shift_image(I, I.p(), [&ctx](const Poly& g) { return theta(ctx, g); });
}

std::vector<Poly> kernel_u_intersect(const IdealFp& I, uint64_t degree_bound,
                                     const GbConfig& config) {
  uint32_t p = I.p();
  SparseEchelon echelon(p);
  MonomialIndexer u_idx, v_idx;
  std::vector<Poly> kernel;
  for (const Poly& g : I.reduced_gb(config)) {
    if (g.degree() > degree_bound) continue;
    for (const Monomial& m : xyz_monomials_up_to(degree_bound - g.degree())) {
      Poly v = poly_mul(Poly::from_monomial(p, 1, m), g);
      SparseRow row = fused_row(trace_u(v), v, u_idx, v_idx);
      if (!echelon.insert(std::move(row))) continue;
      const SparseRow& stored = echelon.rows().back();
      if (stored.lead_col() >= kRightBlockOffset) {
        Poly w(p, 1);
        for (const auto& [col, c] : stored.entries)
          w.add_term(v_idx.monomial_of(col - kRightBlockOffset),
                     static_cast<int64_t>(c));
        kernel.push_back(std::move(w));
      }
    }
    if (u_idx.size() >= kRightBlockOffset)
      throw LimitError("kernel_u_intersect: trace-image block overflow");
  }
  return kernel;
}

std::vector<Poly> theta_image_of_kernel_u(const TraceContext& ctx, const IdealFp& I,
                                          uint64_t degree_bound) {
  uint32_t p = I.p();
  SparseEchelon echelon(p);
  MonomialIndexer u_idx, t_idx;
  std::vector<Poly> images;
  for (const Poly& g : I.reduced_gb()) {
    if (g.degree() > degree_bound) continue;
    for (const Monomial& m : xyz_monomials_up_to(degree_bound - g.degree())) {
      Poly v = poly_mul(Poly::from_monomial(p, 1, m), g);
      SparseRow row = fused_row(trace_u(v), theta(ctx, v), u_idx, t_idx);
      if (!echelon.insert(std::move(row))) continue;
      const SparseRow& stored = echelon.rows().back();
      if (stored.lead_col() >= kRightBlockOffset) {
        Poly w(p, 1);
        for (const auto& [col, c] : stored.entries)
          w.add_term(t_idx.monomial_of(col - kRightBlockOffset),
                     static_cast<int64_t>(c));
        if (!w.is_zero()) images.push_back(std::move(w));
      }
    }
    if (u_idx.size() >= kRightBlockOffset)
      throw LimitError("theta_image_of_kernel_u: trace-image block overflow");
  }
  // Canonical interreduced generating set for the image ideal.
  return buchberger_reduced(images, p, MonomialOrder::kGrevlex);
}

}  // namespace qfs
