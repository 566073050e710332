#ifndef TRANSDIFF_METRICS_HPP
#define TRANSDIFF_METRICS_HPP

#include <vector>

#include <json.hpp>

#include "transdiff/align.hpp"
#include "transdiff/errors.hpp"

namespace transdiff {

struct ErrorCounts {
  long long n_ref = 0;  // always matches + subs + dels
  long long matches = 0;
  long long subs = 0;
  long long inss = 0;
  long long dels = 0;
};

struct WerBreakdown {
  double wer = 0.0;
  double sub_rate = 0.0;
  double ins_rate = 0.0;
  double del_rate = 0.0;
};

inline ErrorCounts count_errors(const Alignment& a) {
  ErrorCounts c;
  for (const auto& e : a.entries) {
    switch (e.op) {
      case AlignOp::Match: ++c.matches; break;
      case AlignOp::Sub: ++c.subs; break;
      case AlignOp::Ins: ++c.inss; break;
      case AlignOp::Del: ++c.dels; break;
    }
  }
  c.n_ref = c.matches + c.subs + c.dels;
  return c;
}

inline WerBreakdown wer(const ErrorCounts& c) {
  if (c.n_ref == 0)
    throw EmptyReferenceError("WER is undefined for an empty reference");
  WerBreakdown b;
  double n = static_cast<double>(c.n_ref);
  b.sub_rate = static_cast<double>(c.subs) / n;
  b.ins_rate = static_cast<double>(c.inss) / n;
  b.del_rate = static_cast<double>(c.dels) / n;
  b.wer = static_cast<double>(c.subs + c.dels + c.inss) / n;
  return b;
}

// pooled (micro) totals; per-file ratios never get averaged
inline ErrorCounts aggregate_counts(const std::vector<ErrorCounts>& parts) {
  ErrorCounts total;
  for (const auto& c : parts) {
    total.n_ref += c.n_ref;
    total.matches += c.matches;
    total.subs += c.subs;
    total.inss += c.inss;
    total.dels += c.dels;
  }
  return total;
}

inline nlohmann::ordered_json metrics_to_json(const ErrorCounts& c, const WerBreakdown& b) {
  nlohmann::ordered_json j;
  j["n_ref"] = c.n_ref;
  j["matches"] = c.matches;
  j["subs"] = c.subs;
  j["inss"] = c.inss;
  j["dels"] = c.dels;
  j["wer"] = b.wer;
  j["sub_rate"] = b.sub_rate;
  j["ins_rate"] = b.ins_rate;
  j["del_rate"] = b.del_rate;
  return j;
}

}  // namespace transdiff

#endif  // TRANSDIFF_METRICS_HPP
