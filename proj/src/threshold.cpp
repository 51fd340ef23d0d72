#include "qfs/threshold.hpp"

#include <regex>

namespace qfs {

using boost::multiprecision::cpp_int;

namespace {

cpp_int int_pow(uint32_t p, uint64_t e) {
  return boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(e));
}

}  // namespace

PptRational height_seq_to_ppt(const HeightSeq& seq, uint32_t p) {
  if (!seq.certified)
    throw InternalError("height_seq_to_ppt: sequence is not certified");
  if (seq.period.empty())
    throw InternalError("height_seq_to_ppt: period must be nonempty");
  PptRational total(static_cast<int64_t>(p) - 2, static_cast<int64_t>(p) - 1);
  uint64_t H = 0;
  for (uint32_t h : seq.preperiod) {
    H += h;
    total += PptRational(cpp_int(1), int_pow(p, H));
  }
  uint64_t period_sum = 0;
  for (uint32_t h : seq.period) period_sum += h;
  cpp_int pP = int_pow(p, period_sum);
  PptRational geometric(pP, pP - 1);  // 1 / (1 - p^{-P})
  uint64_t c = H;
  for (uint32_t h : seq.period) {
    c += h;
    total += PptRational(cpp_int(1), int_pow(p, c)) * geometric;
  }
  return total;
}

std::vector<uint32_t> ppt_digits(const PptRational& r, uint32_t p, size_t count) {
  if (r <= 0 || r > 1)
    throw InternalError("ppt_digits: value must lie in (0, 1]");
  // Greedy-from-below digits: N_k = ceil(r * p^k) - 1 counts the positive
  // integers strictly below r * p^k, so d_k = N_k - p * N_{k-1} is the k-th
  // digit of the unique non-terminating expansion.
  cpp_int a = boost::multiprecision::numerator(r);
  cpp_int b = boost::multiprecision::denominator(r);
  std::vector<uint32_t> digits;
  digits.reserve(count);
  cpp_int prev = 0;  // N_0 = ceil(r) - 1 = 0 on (0, 1]
  cpp_int scaled = a;
  for (size_t k = 1; k <= count; ++k) {
    scaled *= p;
    cpp_int n = (scaled + b - 1) / b - 1;  // ceil(scaled / b) - 1
    digits.push_back(static_cast<uint32_t>(n - prev * p));
    prev = n;
  }
  return digits;
}

std::string ppt_to_string(const PptRational& r) {
  cpp_int num = boost::multiprecision::numerator(r);
  cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

PptRational ppt_from_string(const std::string& text) {
  static const std::regex pattern(R"(^([0-9]+)(?:/([0-9]+))?$)");
  std::smatch match;
  if (!std::regex_match(text, match, pattern))
    throw ParseError("expected a rational \"num\" or \"num/den\"", 0);
  cpp_int num(match[1].str());
  cpp_int den = match[2].matched ? cpp_int(match[2].str()) : cpp_int(1);
  if (den == 0)
    throw ParseError("zero denominator", static_cast<std::size_t>(match.position(2)));
  return PptRational(num, den);
}

}  // namespace qfs
