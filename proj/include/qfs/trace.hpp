/**
 * The Frobenius trace u, the twisted trace theta, semilinear ideal images
 * under u and theta, and the degree-bounded kernel-of-u intersection used by
 * the naive multi-height chain.
 *
 * The trace generator is the monomial dual-basis trace (dual to
 * (xyz)^{p-1}): it sends F_*(x^a y^b z^c) to x^{a'} y^{b'} z^{c'} when
 * a = p a' + (p-1), b = p b' + (p-1), c = p c' + (p-1), and to zero
 * otherwise, extended F_p-linearly.  Every criterion computed downstream is
 * a non-containment statement invariant under unit rescaling of the
 * generator, so this fixed choice loses no generality.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "qfs/groebner.hpp"
#include "qfs/ring.hpp"

namespace qfs {

/** Shared data for the twisted trace: theta(g) = u(dfp * g). */
struct TraceContext {
  uint32_t p;
  Poly dfp;   // Delta_1(f^{p-1}) over F_p
  Poly fbar;  // f mod p
};

/** The trace u applied to a level-1 polynomial (monomial-wise rule above). */
Poly trace_u(const Poly& g);

/** theta(g) = trace_u(dfp * g). */
Poly theta(const TraceContext& ctx, const Poly& g);

/** theta iterated k times. */
Poly theta_iterate(const TraceContext& ctx, const Poly& g, uint32_t k);

/**
 * The ideal generated by u(F_* I).  Because u is p^{-1}-semilinear, the
 * images of the p^3 monomial shifts g * x^a y^b z^c (0 <= a, b, c < p) of
 * the generators generate the image ideal.
 */
IdealFp ideal_image_u(const IdealFp& I);

/** The ideal generated by theta(F_* I), via the same shift scheme. */
IdealFp ideal_image_theta(const TraceContext& ctx, const IdealFp& I);

/**
 * An F_p-spanning set of { g in I : deg g <= D, u(F_* g) = 0 }, computed by
 * Gaussian elimination on the monomial multiples of I's reduced basis up to
 * degree D (for the degree-compatible default order this span is exactly the
 * degree-<= D slice of I) intersected with the kernel of the monomial-wise
 * trace.  Intended for moderate D; the naive multi-height chain uses a
 * streaming variant that never materializes the kernel basis.
 */
std::vector<Poly> kernel_u_intersect(const IdealFp& I, uint64_t degree_bound,
                                     const GbConfig& config = {});

/**
 * Generators of the ideal theta(F_*(I /\ Ker u)), where the intersection is
 * taken degree-bounded as in kernel_u_intersect.  Computed by a fused
 * elimination over (u-image, theta-image) pairs of generator multiples, so
 * the kernel itself is never materialized; the resulting ideal equals the
 * ideal generated by theta of kernel_u_intersect's output.  The returned
 * generator list is interreduced.
 */
std::vector<Poly> theta_image_of_kernel_u(const TraceContext& ctx, const IdealFp& I,
                                          uint64_t degree_bound);

}  // namespace qfs
