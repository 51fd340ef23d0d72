#include "qfs/delta.hpp"

namespace qfs {

LiftSpec::LiftSpec(uint32_t p_in, const Poly& f0_in, const Poly& G_in)
    : p(p_in),
      f0(f0_in),
      G(G_in),
      f(f0_in + poly_scalar_mul(G_in, static_cast<int64_t>(p_in))),
      fbar(reduce_coeffs_mod_p(f)) {
  if (f0.p() != p || G.p() != p)
    throw ModulusMismatchError("LiftSpec: polynomials carry a different p");
  if (f0.level() != 2 || G.level() != 2)
    throw InternalError("LiftSpec: f0 and G must be held at level 2");
  if (fbar.is_zero())
    throw ParseError("f must be nonzero modulo p", 0);
}

LiftSpec LiftSpec::parse(uint32_t p, const std::string& f0_text,
                         const std::string& G_text) {
  if (!is_prime(p)) throw ParseError("p must be prime", 0);
  return LiftSpec(p, parse_poly(f0_text, p, 2), parse_poly(G_text, p, 2));
}

Poly delta1(const Poly& g) {
  if (g.level() != 2)
    throw InternalError("delta1: input must be held at level 2");
  uint32_t p = g.p();
  Poly diff = poly_pow(g, p) - frobenius_lift(g);
  Poly out(p, 1);
  for (const auto& [m, c] : diff.terms()) {
    if (c % p != 0)
      throw InternalError("delta1: g^p - phi(g) is not divisible by p");
    out.add_term(m, static_cast<int64_t>(c / p));
  }
  return out;
}

const Poly& FhLadder::fh(uint32_t h) const {
  if (h == 0 || h > entries.size())
    throw InternalError("FhLadder::fh: entry not computed");
  return entries[h - 1];
}

FhLadder fh_ladder(const LiftSpec& spec, uint32_t h_max,
                   std::optional<uint32_t> cap_level) {
  FhLadder ladder{spec.p, cap_level, delta1(poly_pow(spec.f, spec.p - 1)), {}};
  if (h_max >= 1) {
    std::optional<FrobPowerIdeal> cap;
    if (cap_level) cap = FrobPowerIdeal{spec.p, *cap_level};
    ladder.entries.push_back(poly_pow(spec.fbar, spec.p - 1, cap));
    extend_fh_ladder(ladder, spec, h_max);
  }
  return ladder;
}

void extend_fh_ladder(FhLadder& ladder, const LiftSpec& spec, uint32_t h_max) {
  if (ladder.entries.empty()) {
    if (h_max >= 1) ladder = fh_ladder(spec, h_max, ladder.cap_level);
    return;
  }
  std::optional<FrobPowerIdeal> cap;
  if (ladder.cap_level) cap = FrobPowerIdeal{spec.p, *ladder.cap_level};
  while (ladder.entries.size() < h_max) {
    uint32_t h = static_cast<uint32_t>(ladder.entries.size());  // extending f_h -> f_{h+1}
    Poly scaled = frobenius_scale(ladder.dfp, checked_pow(spec.p, h - 1));
    ladder.entries.push_back(poly_mul(ladder.entries.back(), scaled, cap));
  }
}

}  // namespace qfs
