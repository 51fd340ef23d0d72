/**
 * qfsplit: quasi-F-split multi-heights and perfectoid pure thresholds for
 * hypersurface lifts W(k)[[x,y,z]]/(f0 + p G) at p in {2, 3, 5}.
 *
 * Exit codes: 0 success, 1 computational limit or negative verdict,
 * 2 malformed input.
 */
#include <cctype>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfs/delta.hpp"
#include "qfs/multiheight.hpp"
#include "qfs/rdp.hpp"
#include "qfs/ring.hpp"
#include "qfs/threshold.hpp"

namespace {

using namespace qfs;

uint32_t to_u32(const std::string& text) {
  if (text.empty()) throw ParseError("expected a number", 0);
  uint64_t value = 0;
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("expected a number, got '" + text + "'", 0);
    value = value * 10 + static_cast<uint64_t>(ch - '0');
    if (value > 0xffffffffULL) throw ParseError("number out of range", 0);
  }
  return static_cast<uint32_t>(value);
}

std::vector<uint32_t> parse_entry_list(const std::string& text) {
  std::vector<uint32_t> out;
  if (text.empty()) return out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      out.push_back(to_u32(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

std::pair<uint32_t, uint32_t> parse_r_range(const std::string& text) {
  size_t dash = text.find('-');
  if (dash == std::string::npos) {
    uint32_t r = to_u32(text);
    return {r, r};
  }
  uint32_t lo = to_u32(text.substr(0, dash));
  uint32_t hi = to_u32(text.substr(dash + 1));
  if (lo > hi) throw ParseError("empty range '" + text + "'", 0);
  return {lo, hi};
}

std::string lift_text_for_tag(const std::string& tag) {
  if (tag == "0") return "0";
  if (tag == "xz") return "x*z";
  return tag;  // a literal lift polynomial
}

/** Threshold of the report's sequence; folds are summed as observed. */
PptRational report_ppt(const HeightReport& rep, uint32_t p) {
  HeightSeq seq = rep.seq;
  seq.certified = true;
  return height_seq_to_ppt(seq, p);
}

std::string joined(const std::vector<uint32_t>& entries, const char* sep) {
  std::string out;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(entries[i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "quasi-F-split multi-heights and perfectoid pure thresholds for "
      "hypersurface lifts"};
  app.require_subcommand(1);

  uint32_t p = 2;
  std::string f_text;
  std::string g_text = "0";
  uint32_t h_cap = 12;
  uint32_t r_max = 64;
  std::string format = "text";

  CLI::App* cmd_ppt = app.add_subcommand(
      "ppt", "exact perfectoid pure threshold of a lift");
  cmd_ppt->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_ppt->add_option("--f", f_text, "defining equation f0")->required();
  cmd_ppt->add_option("--G", g_text, "lift term G (f = f0 + p G)");
  cmd_ppt->add_option("--h-cap", h_cap, "height search cap");
  cmd_ppt->add_option("--r-max", r_max, "maximum number of height entries");

  CLI::App* cmd_height = app.add_subcommand(
      "height", "classical quasi-F-split height of a lift");
  cmd_height->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_height->add_option("--f", f_text, "defining equation f0")->required();
  cmd_height->add_option("--G", g_text, "lift term G (f = f0 + p G)");
  cmd_height->add_option("--h-cap", h_cap, "height search cap");

  CLI::App* cmd_multi = app.add_subcommand(
      "multiheight", "full multi-height report for a lift");
  cmd_multi->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_multi->add_option("--f", f_text, "defining equation f0")->required();
  cmd_multi->add_option("--G", g_text, "lift term G (f = f0 + p G)");
  cmd_multi->add_option("--h-cap", h_cap, "height search cap");
  cmd_multi->add_option("--r-max", r_max, "maximum number of height entries");
  cmd_multi->add_option("--format", format, "text or json");

  CLI::App* cmd_table = app.add_subcommand(
      "table", "thresholds of the exceptional catalog at one characteristic");
  cmd_table->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_table->add_option("--h-cap", h_cap, "height search cap");
  cmd_table->add_option("--r-max", r_max, "maximum number of height entries");

  uint32_t d_n = 0;
  std::string d_r_spec;
  std::string d_g_tag = "0";
  CLI::App* cmd_dseries = app.add_subcommand(
      "dseries", "thresholds along a D-series strip at p = 2");
  cmd_dseries->add_option("--n", d_n, "strip parameter n")->required();
  cmd_dseries->add_option("--r", d_r_spec, "r value or range lo-hi")->required();
  cmd_dseries->add_option("--G", d_g_tag, "lift tag: 0, xz, or a polynomial");
  cmd_dseries->add_option("--h-cap", h_cap, "height search cap");
  cmd_dseries->add_option("--r-max", r_max, "maximum number of height entries");

  uint32_t a_n = 0;
  uint32_t a_r = 0;
  std::string a_g_tag = "0";
  CLI::App* cmd_alpharec = app.add_subcommand(
      "alpharec", "integer alpha/e recursion trace for the D-series");
  cmd_alpharec->add_option("--n", a_n, "strip parameter n")->required();
  cmd_alpharec->add_option("--r", a_r, "strip parameter r")->required();
  cmd_alpharec->add_option("--G", a_g_tag, "lift tag: 0 or xz");

  uint32_t naive_r_max = 8;
  std::optional<uint64_t> naive_bound;
  CLI::App* cmd_naive = app.add_subcommand(
      "naive", "lift-independent naive multi-height of f0 modulo p");
  cmd_naive->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_naive->add_option("--f", f_text, "defining equation f0")->required();
  cmd_naive->add_option("--r-max", naive_r_max, "number of entries");
  cmd_naive->add_option("--h-cap", h_cap, "height search cap");
  cmd_naive->add_option("--bound", naive_bound, "kernel degree bound");

  std::string cert_pre;
  std::string cert_per;
  uint32_t cert_t = 2;
  CLI::App* cmd_certify = app.add_subcommand(
      "certify", "verify a candidate preperiod/period by the ideal pipeline");
  cmd_certify->add_option("--p", p, "characteristic (2, 3, or 5)")->required();
  cmd_certify->add_option("--f", f_text, "defining equation f0")->required();
  cmd_certify->add_option("--G", g_text, "lift term G (f = f0 + p G)");
  cmd_certify->add_option("--preperiod", cert_pre, "comma-separated entries");
  cmd_certify->add_option("--period", cert_per, "comma-separated entries")
      ->required();
  cmd_certify->add_option("--t", cert_t, "period unrollings to verify");

  uint32_t scan_n_max = 6;
  uint32_t scan_jobs = 0;
  std::string scan_format = "tsv";
  CLI::App* cmd_scan = app.add_subcommand(
      "scan", "threshold scan across the D-series at p = 2");
  cmd_scan->add_option("--p", p, "characteristic (must be 2)")->required();
  cmd_scan->add_option("--n-max", scan_n_max, "largest strip parameter n");
  cmd_scan->add_option("--jobs", scan_jobs, "worker threads (0 = hardware)");
  cmd_scan->add_option("--format", scan_format, "tsv or json");
  cmd_scan->add_option("--h-cap", h_cap, "height search cap");
  cmd_scan->add_option("--r-max", r_max, "maximum number of height entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_ppt)) {
      LiftSpec spec = LiftSpec::parse(p, f_text, g_text);
      HeightReport rep = multiheight(spec, h_cap, r_max);
      if (!rep.seq.certified) {
        std::cerr << "height sequence not certified within the configured limits\n";
        return 1;
      }
      std::cout << ppt_to_string(height_seq_to_ppt(rep.seq, p)) << "\n";
    } else if (app.got_subcommand(cmd_height)) {
      LiftSpec spec = LiftSpec::parse(p, f_text, g_text);
      std::optional<uint32_t> h = qfs_height(spec, h_cap);
      if (!h.has_value()) {
        std::cerr << "not quasi-F-split up to height cap " << h_cap << "\n";
        return 1;
      }
      std::cout << *h << "\n";
    } else if (app.got_subcommand(cmd_multi)) {
      if (format != "text" && format != "json")
        throw ParseError("format must be text or json", 0);
      LiftSpec spec = LiftSpec::parse(p, f_text, g_text);
      HeightReport rep = multiheight(spec, h_cap, r_max);
      PptRational ppt = report_ppt(rep, p);
      if (format == "text") {
        std::cout << "heights: " << height_seq_to_string(rep.seq) << "\n";
        std::cout << "ppt: " << ppt_to_string(ppt) << "\n";
        std::cout << "certified: " << (rep.seq.certified ? "true" : "false")
                  << "\n";
        std::cout << "pipeline: " << rep.pipeline << "\n";
      } else {
        nlohmann::json doc;
        doc["input"]["p"] = p;
        doc["input"]["f"] = f_text;
        doc["input"]["G"] = g_text;
        doc["multiheight"]["preperiod"] = rep.seq.preperiod;
        doc["multiheight"]["period"] = rep.seq.period;
        doc["multiheight"]["certified"] = rep.seq.certified;
        doc["ppt"] = ppt_to_string(ppt);
        doc["certified"] = rep.seq.certified;
        doc["pipeline"] = rep.pipeline;
        std::cout << doc.dump() << "\n";
      }
    } else if (app.got_subcommand(cmd_table)) {
      std::vector<std::string> families = catalog_families(p);
      if (families.empty())
        throw ParseError("no exceptional catalog at p = " + std::to_string(p), 0);
      std::vector<std::pair<std::string, std::vector<std::string>>> groups;
      for (const std::string& family : families) {
        std::string base = family.substr(0, family.find('^'));
        RdpSpec entry = catalog_equation(p, family);
        LiftSpec spec = LiftSpec::parse(p, entry.equation, "0");
        HeightReport rep = multiheight(spec, h_cap, r_max);
        std::string value = ppt_to_string(report_ppt(rep, p));
        if (groups.empty() || groups.back().first != base)
          groups.push_back({base, {}});
        groups.back().second.push_back(value);
      }
      for (const auto& [base, values] : groups) {
        std::cout << base << ": ";
        for (size_t i = 0; i < values.size(); ++i) {
          if (i) std::cout << ", ";
          std::cout << values[i];
        }
        std::cout << "\n";
      }
    } else if (app.got_subcommand(cmd_dseries)) {
      auto [lo, hi] = parse_r_range(d_r_spec);
      for (uint32_t r = lo; r <= hi; ++r) {
        std::optional<DSeriesClosedForm> closed;
        if (d_g_tag == "0" || d_g_tag == "xz")
          closed = dseries_closed_form(d_n, r, d_g_tag);
        PptRational value;
        if (closed.has_value()) {
          value = closed->ppt;
        } else {
          RdpSpec entry = catalog_equation(2, "D2n", d_n, r);
          LiftSpec spec =
              LiftSpec::parse(2, entry.equation, lift_text_for_tag(d_g_tag));
          value = report_ppt(multiheight(spec, h_cap, r_max), 2);
        }
        std::cout << "r=" << r << ": " << ppt_to_string(value) << "\n";
      }
    } else if (app.got_subcommand(cmd_alpharec)) {
      DVariant variant;
      if (a_g_tag == "0") {
        variant = DVariant::kNoXz;
      } else if (a_g_tag == "xz") {
        variant = DVariant::kXz;
      } else {
        throw ParseError("the recursion is defined for lift tags 0 and xz", 0);
      }
      AlphaESeq seq = alpha_e_sequence(a_n, a_r, variant);
      std::cout << "alphas: " << joined(seq.alphas, " ") << "\n";
      std::cout << "es: " << joined(seq.es, " ") << "\n";
      std::cout << "cycle: (" << seq.cycle.first << "," << seq.cycle.second
                << ")\n";
    } else if (app.got_subcommand(cmd_naive)) {
      Poly fbar = parse_poly(f_text, p, 1);
      NaiveResult res = naive_multiheight(fbar, naive_r_max, h_cap, naive_bound);
      std::cout << joined(res.entries, " ") << "\n";
    } else if (app.got_subcommand(cmd_certify)) {
      LiftSpec spec = LiftSpec::parse(p, f_text, g_text);
      HeightSeq cand;
      cand.preperiod = parse_entry_list(cert_pre);
      cand.period = parse_entry_list(cert_per);
      if (cand.period.empty()) throw ParseError("period must be nonempty", 0);
      CertifyResult res = certify_preperiodic(spec, cand, cert_t);
      std::cout << (res.ok ? "certified" : "not certified") << "\n";
      for (const std::string& line : res.transcript) {
        std::cout << line << "\n";
      }
      if (!res.ok) return 1;
    } else if (app.got_subcommand(cmd_scan)) {
      if (scan_format != "tsv" && scan_format != "json")
        throw ParseError("format must be tsv or json", 0);
      ScanResult scan =
          sigma_scan(p, scan_n_max, {"0", "xz"}, h_cap, r_max, scan_jobs);
      if (scan_format == "tsv") {
        std::cout << scan_to_tsv(scan);
      } else {
        std::cout << scan_to_json(scan) << "\n";
      }
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotQuasiFSplitUpToError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
