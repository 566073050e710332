#ifndef TRANSDIFF_REPORT_HPP
#define TRANSDIFF_REPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/attribution.hpp"
#include "transdiff/errors.hpp"
#include "transdiff/metrics.hpp"

namespace transdiff {

// one file's outcome for one ordered version pair
struct FilePairResult {
  std::string file_id;
  std::string ref_version;
  std::string hyp_version;
  ErrorCounts counts;
  Attribution attribution;
};

struct PairReport {
  std::string ref_version;
  std::string hyp_version;
  size_t file_count = 0;
  bool zero_errors = false;
  ErrorCounts counts;                         // micro-aggregated
  WerBreakdown breakdown;                     // computed from counts
  std::array<long long, 4> category_counts{};  // indexed by Category
  std::array<double, 4> category_pcts{};       // share of non-MATCH entries
  std::map<std::string, long long> rule_counts;
};

struct CategorySummary {
  double mean_pct = 0.0;
  double stddev_pct = 0.0;
};

struct MatrixReport {
  std::vector<std::string> versions;  // sorted
  std::vector<PairReport> cells;      // sorted by (ref_version, hyp_version)
  std::array<CategorySummary, 4> category_summary{};
};

namespace detail {

constexpr std::array<Category, 4> kCategoryOrder = {
    Category::Morphosyntactic, Category::Reduction, Category::Verbatim,
    Category::Unaccounted};

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline double round_to(double v, int decimals) {
  double scale = decimals == 2 ? 100.0 : 1e6;
  return std::round(v * scale) / scale;
}

// the Fig.-3 style summary averages the two ordered directions of each
// unordered pair first, then takes mean and population stddev over pairs
inline void compute_summary(MatrixReport& m) {
  if (m.cells.empty()) return;
  std::map<std::pair<std::string, std::string>, std::vector<const PairReport*>>
      unordered;
  for (const auto& c : m.cells) {
    auto key = c.ref_version < c.hyp_version
                   ? std::pair(c.ref_version, c.hyp_version)
                   : std::pair(c.hyp_version, c.ref_version);
    unordered[key].push_back(&c);
  }
  for (int cat = 0; cat < 4; ++cat) {
    std::vector<double> values;
    for (const auto& [key, cells] : unordered) {
      double sum = 0;
      for (const auto* c : cells) sum += c->category_pcts[cat];
      values.push_back(sum / static_cast<double>(cells.size()));
    }
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    m.category_summary[cat] = {mean, std::sqrt(var)};
  }
}

}  // namespace detail

inline PairReport build_pair_report(const std::vector<FilePairResult>& per_file) {
  if (per_file.empty())
    throw ConsistencyError("pair report needs at least one file result");
  PairReport r;
  r.ref_version = per_file.front().ref_version;
  r.hyp_version = per_file.front().hyp_version;
  r.file_count = per_file.size();
  std::vector<ErrorCounts> parts;
  for (const auto& f : per_file) {
    if (f.ref_version != r.ref_version || f.hyp_version != r.hyp_version)
      throw ConsistencyError("mixed version pairs in one report: " +
                             r.ref_version + "|" + r.hyp_version + " vs " +
                             f.ref_version + "|" + f.hyp_version);
    long long errors = f.counts.subs + f.counts.inss + f.counts.dels;
    if (static_cast<long long>(f.attribution.entries.size()) != errors)
      throw ConsistencyError(
          "file '" + f.file_id + "' attributes " +
          std::to_string(f.attribution.entries.size()) + " entries but counts show " +
          std::to_string(errors));
    parts.push_back(f.counts);
    for (const auto& e : f.attribution.entries) {
      ++r.category_counts[static_cast<int>(e.category)];
      if (!e.rule_id.empty()) ++r.rule_counts[e.rule_id];
    }
  }
  r.counts = aggregate_counts(parts);
  long long total_errors = r.counts.subs + r.counts.inss + r.counts.dels;
  r.zero_errors = total_errors == 0;
  for (int cat = 0; cat < 4; ++cat)
    r.category_pcts[cat] =
        total_errors > 0
            ? 100.0 * static_cast<double>(r.category_counts[cat]) /
                  static_cast<double>(total_errors)
            : 0.0;
  r.breakdown = wer(r.counts);
  return r;
}

inline MatrixReport build_matrix(std::vector<PairReport> pair_reports) {
  MatrixReport m;
  std::sort(pair_reports.begin(), pair_reports.end(),
            [](const PairReport& a, const PairReport& b) {
              return std::tie(a.ref_version, a.hyp_version) <
                     std::tie(b.ref_version, b.hyp_version);
            });
  for (size_t i = 1; i < pair_reports.size(); ++i)
    if (pair_reports[i].ref_version == pair_reports[i - 1].ref_version &&
        pair_reports[i].hyp_version == pair_reports[i - 1].hyp_version)
      throw ConsistencyError("duplicate cell for pair " +
                             pair_reports[i].ref_version + "|" +
                             pair_reports[i].hyp_version);
  for (const auto& c : pair_reports) {
    m.versions.push_back(c.ref_version);
    m.versions.push_back(c.hyp_version);
  }
  std::sort(m.versions.begin(), m.versions.end());
  m.versions.erase(std::unique(m.versions.begin(), m.versions.end()),
                   m.versions.end());
  m.cells = std::move(pair_reports);
  detail::compute_summary(m);
  return m;
}

inline nlohmann::ordered_json pair_report_to_json(const PairReport& r) {
  nlohmann::ordered_json j;
  j["ref_version"] = r.ref_version;
  j["hyp_version"] = r.hyp_version;
  j["file_count"] = r.file_count;
  j["zero_errors"] = r.zero_errors;
  nlohmann::ordered_json metrics;
  metrics["n_ref"] = r.counts.n_ref;
  metrics["matches"] = r.counts.matches;
  metrics["subs"] = r.counts.subs;
  metrics["inss"] = r.counts.inss;
  metrics["dels"] = r.counts.dels;
  metrics["wer"] = detail::round_to(r.breakdown.wer, 6);
  metrics["sub_rate"] = detail::round_to(r.breakdown.sub_rate, 6);
  metrics["ins_rate"] = detail::round_to(r.breakdown.ins_rate, 6);
  metrics["del_rate"] = detail::round_to(r.breakdown.del_rate, 6);
  j["metrics"] = std::move(metrics);
  nlohmann::ordered_json counts, pcts;
  for (Category cat : detail::kCategoryOrder) {
    counts[to_string(cat)] = r.category_counts[static_cast<int>(cat)];
    pcts[to_string(cat)] =
        detail::round_to(r.category_pcts[static_cast<int>(cat)], 2);
  }
  j["category_counts"] = std::move(counts);
  j["category_pcts"] = std::move(pcts);
  j["rule_counts"] = nlohmann::ordered_json::object();
  for (const auto& [id, n] : r.rule_counts) j["rule_counts"][id] = n;
  return j;
}

inline nlohmann::ordered_json matrix_to_json(const MatrixReport& m) {
  nlohmann::ordered_json j;
  j["versions"] = m.versions;
  j["cells"] = nlohmann::ordered_json::object();
  for (const auto& c : m.cells)
    j["cells"][c.ref_version + "|" + c.hyp_version] = pair_report_to_json(c);
  j["category_summary"] = nlohmann::ordered_json::object();
  if (!m.cells.empty()) {
    for (Category cat : detail::kCategoryOrder) {
      const auto& s = m.category_summary[static_cast<int>(cat)];
      nlohmann::ordered_json js;
      js["mean_pct"] = detail::round_to(s.mean_pct, 2);
      js["stddev_pct"] = detail::round_to(s.stddev_pct, 2);
      j["category_summary"][to_string(cat)] = std::move(js);
    }
  }
  return j;
}

inline MatrixReport matrix_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
  MatrixReport m;
  try {
    m.versions = j.at("versions").get<std::vector<std::string>>();
    for (const auto& [key, c] : j.at("cells").items()) {
      PairReport p;
      p.ref_version = c.at("ref_version").get<std::string>();
      p.hyp_version = c.at("hyp_version").get<std::string>();
      p.file_count = c.at("file_count").get<size_t>();
      p.zero_errors = c.at("zero_errors").get<bool>();
      const auto& metrics = c.at("metrics");
      p.counts.n_ref = metrics.at("n_ref").get<long long>();
      p.counts.matches = metrics.at("matches").get<long long>();
      p.counts.subs = metrics.at("subs").get<long long>();
      p.counts.inss = metrics.at("inss").get<long long>();
      p.counts.dels = metrics.at("dels").get<long long>();
      p.breakdown = p.counts.n_ref > 0 ? wer(p.counts) : WerBreakdown{};
      long long total_errors = p.counts.subs + p.counts.inss + p.counts.dels;
      for (Category cat : detail::kCategoryOrder) {
        long long n = c.at("category_counts").at(to_string(cat)).get<long long>();
        p.category_counts[static_cast<int>(cat)] = n;
        p.category_pcts[static_cast<int>(cat)] =
            total_errors > 0
                ? 100.0 * static_cast<double>(n) / static_cast<double>(total_errors)
                : 0.0;
      }
      for (const auto& [id, n] : c.at("rule_counts").items())
        p.rule_counts[id] = n.get<long long>();
      m.cells.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("matrix JSON: ") + e.what());
  }
  detail::compute_summary(m);
  return m;
}

namespace detail {

inline std::string render_csv(const MatrixReport& m) {
  std::string out = "ref_version,hyp_version,metric,value\n";
  for (const auto& c : m.cells) {
    auto row = [&](const char* metric, const std::string& value) {
      out += c.ref_version + "," + c.hyp_version + "," + metric + "," + value + "\n";
    };
    row("wer", fixed(c.breakdown.wer, 6));
    row("sub_rate", fixed(c.breakdown.sub_rate, 6));
    row("ins_rate", fixed(c.breakdown.ins_rate, 6));
    row("del_rate", fixed(c.breakdown.del_rate, 6));
    row("pct_morphosyntactic",
        fixed(c.category_pcts[static_cast<int>(Category::Morphosyntactic)], 2));
    row("pct_reduction",
        fixed(c.category_pcts[static_cast<int>(Category::Reduction)], 2));
    row("pct_verbatim",
        fixed(c.category_pcts[static_cast<int>(Category::Verbatim)], 2));
    row("pct_unaccounted",
        fixed(c.category_pcts[static_cast<int>(Category::Unaccounted)], 2));
  }
  return out;
}

inline std::string wer_line(const WerBreakdown& b) {
  return "WER " + fixed(100.0 * b.wer, 1) + "% (S " + fixed(100.0 * b.sub_rate, 1) +
         " D " + fixed(100.0 * b.del_rate, 1) + " I " + fixed(100.0 * b.ins_rate, 1) +
         ")";
}

inline std::string render_text(const MatrixReport& m) {
  std::string out = "transcript version matrix\n";
  out += "versions:";
  if (m.versions.empty()) out += " (none)";
  for (size_t i = 0; i < m.versions.size(); ++i)
    out += (i ? ", " : " ") + m.versions[i];
  out += "\n";
  for (const auto& c : m.cells) {
    out += "\n" + c.ref_version + " -> " + c.hyp_version + "  (files " +
           std::to_string(c.file_count) + ")\n";
    out += "  " + wer_line(c.breakdown) + "\n";
    out += " ";
    for (Category cat : kCategoryOrder)
      out += std::string(" ") + to_string(cat) + " " +
             fixed(c.category_pcts[static_cast<int>(cat)], 1) + "%";
    out += c.zero_errors ? "  [no errors]\n" : "\n";
  }
  if (!m.cells.empty()) {
    out += "\ncategory summary over unordered pairs (mean +/- population stddev)\n";
    for (Category cat : kCategoryOrder) {
      const auto& s = m.category_summary[static_cast<int>(cat)];
      char buf[80];
      std::snprintf(buf, sizeof buf, "  %-16s %6.1f +/- %.1f\n", to_string(cat),
                    s.mean_pct, s.stddev_pct);
      out += buf;
    }
  }
  return out;
}

}  // namespace detail

// one-line human summary, the same shape the text matrix uses per cell
inline std::string wer_summary_line(const WerBreakdown& b) {
  return detail::wer_line(b);
}

inline std::string render(const MatrixReport& m, const std::string& format) {
  if (format == "json") return matrix_to_json(m).dump();
  if (format == "csv") return detail::render_csv(m);
  if (format == "text") return detail::render_text(m);
  throw UsageError("unknown output format '" + format + "'");
}

}  // namespace transdiff

#endif  // TRANSDIFF_REPORT_HPP
