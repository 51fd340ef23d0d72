/**
 * Exact perfectoid pure thresholds from certified height sequences.
 *
 * For multi-height (h_0, h_1, ...) with partial sums H_r = h_0 + ... + h_r,
 *
 *   ppt = (p-2)/(p-1) + sum_r p^{-H_r},
 *
 * which for p = 2 is just sum_r 2^{-H_r}.  Eventual periodicity makes the
 * sum an exact rational (geometric series over one period).  All arithmetic
 * is arbitrary precision; values are rendered as reduced "num/den" strings,
 * never as floats.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qfs/multiheight.hpp"

namespace qfs {

using PptRational = boost::multiprecision::cpp_rational;

/**
 * The exact threshold of a certified height sequence.  Precondition:
 * seq.certified (throws InternalError otherwise).  The result lies in
 * (0, 1]; equal to 1 exactly when the sequence is all ones.
 */
PptRational height_seq_to_ppt(const HeightSeq& seq, uint32_t p);

/**
 * First `count` base-p digits of r in (0, 1], with the non-terminating
 * convention: exact fractions a/p^k are rendered with an all-(p-1) tail
 * (e.g. 1/4 in base 2 is 0 0 1 1 1 ...).  With this convention the digit
 * string of a threshold has a 1-digit exactly at the positions H_r.
 */
std::vector<uint32_t> ppt_digits(const PptRational& r, uint32_t p, size_t count);

/** Reduced "num/den" (or "num" when den = 1, i.e. "1"). */
std::string ppt_to_string(const PptRational& r);

/** Parse "num/den" or "num"; rejects anything else. */
PptRational ppt_from_string(const std::string& text);

}  // namespace qfs
