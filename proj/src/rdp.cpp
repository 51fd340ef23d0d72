#include "qfs/rdp.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qfs/ring.hpp"

namespace qfs {

namespace {

std::string power_text(const char* var, uint32_t e) {
  if (e == 1) return var;
  return std::string(var) + "^" + std::to_string(e);
}

struct CatalogRow {
  const char* family;
  const char* equation;
};

const std::vector<CatalogRow>& exceptional_rows(uint32_t p) {
  static const std::vector<CatalogRow> kP2 = {
      {"E6^0", "z^2+x^3+y^2*z"},
      {"E6^1", "z^2+x^3+y^2*z+x*y*z"},
      {"E7^0", "z^2+x^3+x*y^3"},
      {"E7^1", "z^2+x^3+x*y^3+x^2*y*z"},
      {"E7^2", "z^2+x^3+x*y^3+y^3*z"},
      {"E7^3", "z^2+x^3+x*y^3+x*y*z"},
      {"E8^0", "z^2+x^3+y^5"},
      {"E8^1", "z^2+x^3+y^5+x*y^3*z"},
      {"E8^2", "z^2+x^3+y^5+x*y^2*z"},
      {"E8^3", "z^2+x^3+y^5+y^3*z"},
      {"E8^4", "z^2+x^3+y^5+x*y*z"},
  };
  static const std::vector<CatalogRow> kP3 = {
      {"E6^0", "z^2+x^3+y^4"},
      {"E6^1", "z^2+x^3+y^4+x^2*y^2"},
      {"E7^0", "z^2+x^3+x*y^3"},
      {"E7^1", "z^2+x^3+x*y^3+x^2*y^2"},
      {"E8^0", "z^2+x^3+y^5"},
      {"E8^1", "z^2+x^3+y^5+x^2*y^3"},
      {"E8^2", "z^2+x^3+y^5+x^2*y^2"},
  };
  static const std::vector<CatalogRow> kP5 = {
      {"E8^0", "z^2+x^3+y^5"},
      {"E8^1", "z^2+x^3+y^5+x*y^4"},
  };
  static const std::vector<CatalogRow> kNone;
  switch (p) {
    case 2:
      return kP2;
    case 3:
      return kP3;
    case 5:
      return kP5;
    default:
      return kNone;
  }
}

std::string dseries_equation(const std::string& family, uint32_t n, uint32_t r) {
  std::string eq = "z^2+x^2*y+";
  if (family == "D2n") {
    eq += "x*" + power_text("y", n);
  } else {
    eq += power_text("y", n) + "*z";
  }
  if (r >= 1) eq += "+x*" + power_text("y", n - r) + "*z";
  return eq;
}

uint32_t ceil_log2(uint32_t v) {
  uint32_t lg = 0;
  while ((uint64_t(1) << lg) < v) ++lg;
  return lg;
}

/** Minimal e >= 1 with 2^e (1+alpha) - 2^{e-1} - d >= 0 (resp. - 1 - d),
 *  together with that value, which becomes the next alpha. */
std::pair<uint32_t, uint32_t> alpha_step(uint32_t alpha, uint32_t d,
                                         DVariant variant) {
  for (uint32_t e = 1; e < 62; ++e) {
    int64_t value = (int64_t(1) << e) * (1 + int64_t(alpha));
    value -= (variant == DVariant::kNoXz) ? (int64_t(1) << (e - 1)) : 1;
    value -= d;
    if (value >= 0) return {e, static_cast<uint32_t>(value)};
  }
  throw InternalError("alpha/e step did not terminate");
}

HeightSeq seq_from_cycle(const AlphaESeq& ae) {
  HeightSeq seq;
  seq.preperiod.assign(ae.es.begin(), ae.es.begin() + ae.cycle.first);
  seq.period.assign(ae.es.begin() + ae.cycle.first,
                    ae.es.begin() + ae.cycle.second);
  seq.certified = true;
  seq.canonicalize();
  return seq;
}

DSeriesClosedForm make_closed_form(HeightSeq seq) {
  DSeriesClosedForm form;
  form.ppt = height_seq_to_ppt(seq, 2);
  form.seq = std::move(seq);
  return form;
}

struct ScanTask {
  std::string family;
  uint32_t n;
  uint32_t r;
  std::string g_tag;
};

ScanRow run_scan_task(uint32_t p, const ScanTask& task, uint32_t h_cap,
                      uint32_t r_max) {
  auto t0 = std::chrono::steady_clock::now();
  ScanRow row;
  row.p = p;
  row.family = task.family;
  row.n = task.n;
  row.r = task.r;
  row.g_tag = task.g_tag;
  std::optional<DSeriesClosedForm> closed;
  if (task.g_tag == "0" || task.g_tag == "xz") {
    closed = dseries_closed_form(task.n, task.r, task.g_tag);
  }
  if (closed.has_value()) {
    row.seq = closed->seq;
    row.ppt = closed->ppt;
    row.pipeline = "closed-form";
  } else {
    RdpSpec entry = catalog_equation(p, task.family, task.n, task.r);
    std::string g = "0";
    if (task.g_tag == "xz") {
      g = "x*z";
    } else if (task.g_tag != "0") {
      g = task.g_tag;  // a literal lift polynomial
    }
    LiftSpec spec = LiftSpec::parse(p, entry.equation, g);
    HeightReport rep = multiheight(spec, h_cap, r_max);
    row.seq = rep.seq;
    HeightSeq for_ppt = rep.seq;
    for_ppt.certified = true;  // threshold of the observed fold either way
    row.ppt = height_seq_to_ppt(for_ppt, p);
    row.pipeline = rep.pipeline;
  }
  auto t1 = std::chrono::steady_clock::now();
  row.runtime_ms = static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  return row;
}

}  // namespace

RdpSpec catalog_equation(uint32_t p, const std::string& family, uint32_t n,
                         uint32_t r) {
  RdpSpec spec;
  spec.p = p;
  spec.family = family;
  if (family == "A1") {
    if (p != 2 && p != 3 && p != 5)
      throw ParseError("no catalog entry for A1 at p = " + std::to_string(p), 0);
    spec.equation = "x*y+z^2";
    return spec;
  }
  if (family == "D2n" || family == "D2n+1") {
    if (p != 2) throw ParseError("the D-series catalog requires p = 2", 0);
    if (n == 0 || r >= n)
      throw ParseError("D-series parameters need 0 <= r < n with n >= 1", 0);
    spec.n = n;
    spec.r = r;
    spec.equation = dseries_equation(family, n, r);
    return spec;
  }
  for (const CatalogRow& row : exceptional_rows(p)) {
    if (family == row.family) {
      spec.equation = row.equation;
      return spec;
    }
  }
  throw ParseError("no catalog entry for " + family + " at p = " + std::to_string(p), 0);
}

std::vector<std::string> catalog_families(uint32_t p) {
  std::vector<std::string> out;
  for (const CatalogRow& row : exceptional_rows(p)) out.push_back(row.family);
  return out;
}

std::vector<RdpSpec> taut_catalog(uint32_t p) {
  std::vector<RdpSpec> out;
  switch (p) {
    case 2:
      out.push_back(catalog_equation(2, "E6^1"));
      out.push_back(catalog_equation(2, "E7^3"));
      out.push_back(catalog_equation(2, "E8^4"));
      out.push_back(catalog_equation(2, "A1"));
      out.push_back(catalog_equation(2, "D2n", 3, 2));
      break;
    case 3:
      out.push_back(catalog_equation(3, "E6^1"));
      out.push_back(catalog_equation(3, "E7^1"));
      out.push_back(catalog_equation(3, "E8^2"));
      out.push_back(catalog_equation(3, "A1"));
      break;
    case 5:
      out.push_back(catalog_equation(5, "E8^1"));
      out.push_back(catalog_equation(5, "A1"));
      break;
    default:
      break;
  }
  return out;
}

AlphaESeq alpha_e_sequence(uint32_t n, uint32_t r, DVariant variant,
                           uint32_t step_cap) {
  if (n == 0 || r >= n)
    throw ParseError("alpha/e recursion needs 0 <= r < n with n >= 1", 0);
  uint32_t d = n - r;
  AlphaESeq seq;
  seq.variant = variant;
  seq.alphas.push_back(0);
  for (uint32_t step = 0; step < step_cap; ++step) {
    auto [e, next] = alpha_step(seq.alphas.back(), d, variant);
    seq.es.push_back(e);
    auto seen = std::find(seq.alphas.begin(), seq.alphas.end(), next);
    bool repeated = seen != seq.alphas.end();
    uint32_t first_index = static_cast<uint32_t>(seen - seq.alphas.begin());
    seq.alphas.push_back(next);
    if (repeated) {
      seq.cycle = {first_index, static_cast<uint32_t>(seq.alphas.size() - 1)};
      return seq;
    }
  }
  throw LimitError("alpha/e recursion exceeded the step cap");
}

std::optional<DSeriesClosedForm> dseries_closed_form(uint32_t n, uint32_t r,
                                                     const std::string& g_tag) {
  if (n == 0 || r >= n)
    throw ParseError("D-series closed form needs 0 <= r < n with n >= 1", 0);
  if (g_tag != "0" && g_tag != "xz") return std::nullopt;
  if (r == 0) {
    if (g_tag == "xz") return std::nullopt;
    HeightSeq seq;
    seq.preperiod = {ceil_log2(n) + 1};
    seq.period = {1};
    seq.certified = true;
    seq.canonicalize();
    return make_closed_form(std::move(seq));
  }
  DVariant variant = (g_tag == "xz") ? DVariant::kXz : DVariant::kNoXz;
  AlphaESeq ae = alpha_e_sequence(n, r, variant);
  auto escape = std::find_if(ae.alphas.begin(), ae.alphas.end(),
                             [r](uint32_t a) { return a >= r; });
  if (escape == ae.alphas.end()) return make_closed_form(seq_from_cycle(ae));
  if (g_tag == "xz") return std::nullopt;
  size_t m = static_cast<size_t>(escape - ae.alphas.begin());
  HeightSeq seq;
  seq.preperiod.assign(ae.es.begin(), ae.es.begin() + m);
  seq.period = {1};
  seq.certified = true;
  seq.canonicalize();
  return make_closed_form(std::move(seq));
}

FhShape fh_shape_check(const LiftSpec& spec, uint32_t n, uint32_t r,
                       DVariant variant, uint32_t alpha, uint32_t h) {
  if (spec.p != 2)
    throw InternalError("the D-series shape prediction is specific to p = 2");
  if (h == 0 || n == 0 || r >= n)
    throw InternalError("shape check needs h >= 1 and 0 <= r < n");
  uint32_t q = 1u << h;
  uint32_t cap = h + ceil_log2(alpha + 1);
  Poly fh = fh_ladder(spec, h, cap).fh(h);
  std::vector<Monomial> box = {
      Monomial{q, 0, 0, 0},
      Monomial{0, q * (alpha + 1), 0, 0},
      Monomial{0, 0, q, 0},
  };
  Poly reduced = reduce_mod_monomials(fh, box);
  if (reduced.is_zero()) return FhShape::kZero;
  Monomial predicted{q - 1, 0, q - 1, 0};
  predicted[kVarY] =
      (variant == DVariant::kNoXz) ? (q / 2 - 1 + (n - r)) : (n - r);
  // Local (power-series) reading: the initial term is the grevlex-least one.
  if (reduced.terms().begin()->first == predicted)
    return FhShape::kPredictedMonomial;
  return FhShape::kOther;
}

ScanResult sigma_scan(uint32_t p, uint32_t n_max,
                      const std::vector<std::string>& g_tags, uint32_t h_cap,
                      uint32_t r_max, uint32_t jobs) {
  if (p != 2) throw ParseError("the D-series scan requires p = 2", 0);
  std::vector<std::string> tags = g_tags;
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());

  std::vector<ScanTask> tasks;
  for (const char* family : {"D2n", "D2n+1"}) {
    for (uint32_t n = 2; n <= n_max; ++n) {
      for (uint32_t r = 1; r < n; ++r) {
        for (const std::string& tag : tags) tasks.push_back({family, n, r, tag});
      }
    }
  }

  ScanResult result;
  result.rows.resize(tasks.size());
  uint32_t workers = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
  if (tasks.size() < workers) workers = static_cast<uint32_t>(std::max<size_t>(tasks.size(), 1));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        result.rows[i] = run_scan_task(p, tasks[i], h_cap, r_max);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::set<PptRational> values;
  for (const ScanRow& row : result.rows) values.insert(row.ppt);
  result.stats.distinct_values.assign(values.begin(), values.end());
  for (size_t i = 0; i + 1 < result.stats.distinct_values.size(); ++i) {
    result.stats.gaps.push_back(result.stats.distinct_values[i + 1] -
                                result.stats.distinct_values[i]);
  }
  const uint32_t max_m = 30;
  result.stats.counts_below.assign(max_m + 1, 0);
  for (uint32_t m = 1; m <= max_m; ++m) {
    PptRational bound(1, m);
    size_t count = 0;
    for (const PptRational& v : result.stats.distinct_values) {
      if (v < bound) ++count;
    }
    result.stats.counts_below[m] = count;
  }
  return result;
}

namespace {

std::string joined_entries(const std::vector<uint32_t>& entries) {
  if (entries.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(entries[i]);
  }
  return out;
}

}  // namespace

std::string scan_to_tsv(const ScanResult& scan) {
  std::ostringstream out;
  out << "p\tfamily\tn\tr\tG\tpreperiod\tperiod\tppt\tcertified\tpipeline\t"
         "runtime_ms\n";
  for (const ScanRow& row : scan.rows) {
    out << row.p << '\t' << row.family << '\t' << row.n << '\t' << row.r << '\t'
        << row.g_tag << '\t' << joined_entries(row.seq.preperiod) << '\t'
        << joined_entries(row.seq.period) << '\t' << ppt_to_string(row.ppt)
        << '\t' << (row.seq.certified ? "true" : "false") << '\t'
        << row.pipeline << '\t' << row.runtime_ms << '\n';
  }
  return out.str();
}

std::string scan_to_json(const ScanResult& scan) {
  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const ScanRow& row : scan.rows) {
    nlohmann::json item;
    item["p"] = row.p;
    item["family"] = row.family;
    item["n"] = row.n;
    item["r"] = row.r;
    item["G"] = row.g_tag;
    item["preperiod"] = row.seq.preperiod;
    item["period"] = row.seq.period;
    item["certified"] = row.seq.certified;
    item["ppt"] = ppt_to_string(row.ppt);
    item["pipeline"] = row.pipeline;
    item["runtime_ms"] = row.runtime_ms;
    doc["rows"].push_back(item);
  }
  nlohmann::json stats;
  stats["distinct_values"] = nlohmann::json::array();
  for (const PptRational& v : scan.stats.distinct_values) {
    stats["distinct_values"].push_back(ppt_to_string(v));
  }
  stats["gaps"] = nlohmann::json::array();
  for (const PptRational& g : scan.stats.gaps) {
    stats["gaps"].push_back(ppt_to_string(g));
  }
  stats["counts_below"] = scan.stats.counts_below;
  doc["stats"] = stats;
  return doc.dump();
}

}  // namespace qfs
