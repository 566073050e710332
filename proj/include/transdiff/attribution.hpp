#ifndef TRANSDIFF_ATTRIBUTION_HPP
#define TRANSDIFF_ATTRIBUTION_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/align.hpp"
#include "transdiff/rules.hpp"
#include "transdiff/token.hpp"

namespace transdiff {

// maximal run of consecutive non-MATCH entries, with the tokens those
// entries consume and up to two matched context tokens on each side
struct DiffRegion {
  size_t entry_begin = 0;  // indices into Alignment::entries
  size_t entry_end = 0;
  std::vector<AlignEntry> entries;
  std::vector<Token> ref_tokens;
  std::vector<Token> hyp_tokens;
  std::vector<Token> left_ref_context;
  std::vector<Token> left_hyp_context;
  std::vector<Token> right_ref_context;
  std::vector<Token> right_hyp_context;
};

struct RuleSpan {
  size_t entry_begin = 0;  // global entry indices, end exclusive
  size_t entry_end = 0;
};

struct VerbatimFinding {
  std::string subtype;
  size_t entry_begin = 0;
  size_t entry_end = 0;
  int battery_index = 0;  // position in the builtin battery
};

struct AttributionEntry {
  size_t entry_index = 0;
  Category category = Category::Unaccounted;
  std::string rule_id;  // empty for builtin and unaccounted entries
  std::string subtype;  // empty for unaccounted entries
};

struct Attribution {
  std::vector<AttributionEntry> entries;  // one per non-MATCH entry, ordered
};

inline std::vector<DiffRegion> extract_regions(const Alignment& a,
                                               const std::vector<Token>& ref,
                                               const std::vector<Token>& hyp) {
  std::vector<DiffRegion> regions;
  const auto& es = a.entries;
  size_t ref_pos = 0, hyp_pos = 0, i = 0;
  while (i < es.size()) {
    if (es[i].op == AlignOp::Match) {
      ++ref_pos;
      ++hyp_pos;
      ++i;
      continue;
    }
    DiffRegion r;
    r.entry_begin = i;
    size_t ref_begin = ref_pos, hyp_begin = hyp_pos;
    while (i < es.size() && es[i].op != AlignOp::Match) {
      r.entries.push_back(es[i]);
      if (es[i].ref_index) ++ref_pos;
      if (es[i].hyp_index) ++hyp_pos;
      ++i;
    }
    r.entry_end = i;
    r.ref_tokens.assign(ref.begin() + ref_begin, ref.begin() + ref_pos);
    r.hyp_tokens.assign(hyp.begin() + hyp_begin, hyp.begin() + hyp_pos);
    auto ctx = [](const std::vector<Token>& side, size_t begin, size_t end) {
      size_t lo = begin >= 2 ? begin - 2 : 0;
      size_t hi = std::min(end + 2, side.size());
      return std::pair(std::vector<Token>(side.begin() + lo, side.begin() + begin),
                       std::vector<Token>(side.begin() + end, side.begin() + hi));
    };
    std::tie(r.left_ref_context, r.right_ref_context) = ctx(ref, ref_begin, ref_pos);
    std::tie(r.left_hyp_context, r.right_hyp_context) = ctx(hyp, hyp_begin, hyp_pos);
    regions.push_back(std::move(r));
  }
  return regions;
}

namespace detail {

// tokens consumed on each side before entry offset i within the region
inline void consumed_prefix(const DiffRegion& region, std::vector<size_t>& ref_before,
                            std::vector<size_t>& hyp_before) {
  size_t k = region.entries.size();
  ref_before.assign(k + 1, 0);
  hyp_before.assign(k + 1, 0);
  for (size_t i = 0; i < k; ++i) {
    ref_before[i + 1] = ref_before[i] + (region.entries[i].ref_index ? 1 : 0);
    hyp_before[i + 1] = hyp_before[i] + (region.entries[i].hyp_index ? 1 : 0);
  }
}

inline bool bind_stem(std::map<char, std::string>& binds, char var,
                      const std::string& stem, int min_stem) {
  if (static_cast<int>(stem.size()) < min_stem) return false;
  auto [it, inserted] = binds.emplace(var, stem);
  return inserted || it->second == stem;
}

// each pattern item consumes exactly one token, so a side matches iff the
// lengths agree and every item accepts its token; Empty is a whole side
inline bool match_side(const std::vector<PatternItem>& items, const Token* toks,
                       size_t n, std::map<char, std::string>& binds, int min_stem) {
  if (items.size() == 1 && items[0].kind == PatternItem::Kind::Empty) return n == 0;
  if (items.size() != n) return false;
  for (size_t i = 0; i < n; ++i) {
    const auto& item = items[i];
    const std::string& w = toks[i].norm;
    switch (item.kind) {
      case PatternItem::Kind::Literal:
        if (w != item.text) return false;
        break;
      case PatternItem::Kind::Alternation: {
        if (std::find(item.alternatives.begin(), item.alternatives.end(), w) ==
            item.alternatives.end())
          return false;
        break;
      }
      case PatternItem::Kind::Stem:
        if (!bind_stem(binds, item.var, w, min_stem)) return false;
        break;
      case PatternItem::Kind::StemSuffix: {
        std::string suffix =
            item.attach == Attach::Apostrophe ? "'" + item.text : item.text;
        if (w.size() <= suffix.size() ||
            w.compare(w.size() - suffix.size(), suffix.size(), suffix) != 0)
          return false;
        if (!bind_stem(binds, item.var, w.substr(0, w.size() - suffix.size()),
                       min_stem))
          return false;
        break;
      }
      case PatternItem::Kind::Empty:
        return false;
    }
  }
  return true;
}

}  // namespace detail

// every contiguous entry sub-span where lhs matches the ref-side tokens and
// rhs the hyp-side tokens under one variable binding; symmetric rules also
// try the two sides exchanged
inline std::vector<RuleSpan> match_rule(const CategoryRule& rule,
                                        const DiffRegion& region) {
  size_t k = region.entries.size();
  std::vector<size_t> ref_before, hyp_before;
  detail::consumed_prefix(region, ref_before, hyp_before);

  std::set<std::pair<size_t, size_t>> spans;
  for (size_t b = 0; b < k; ++b) {
    for (size_t e = b + 1; e <= k; ++e) {
      const Token* rt = region.ref_tokens.data() + ref_before[b];
      const Token* ht = region.hyp_tokens.data() + hyp_before[b];
      size_t rn = ref_before[e] - ref_before[b];
      size_t hn = hyp_before[e] - hyp_before[b];
      {
        std::map<char, std::string> binds;
        if (detail::match_side(rule.lhs, rt, rn, binds, rule.min_stem) &&
            detail::match_side(rule.rhs, ht, hn, binds, rule.min_stem)) {
          spans.insert({b, e});
          continue;
        }
      }
      if (rule.symmetric) {
        std::map<char, std::string> binds;
        if (detail::match_side(rule.lhs, ht, hn, binds, rule.min_stem) &&
            detail::match_side(rule.rhs, rt, rn, binds, rule.min_stem))
          spans.insert({b, e});
      }
    }
  }
  std::vector<RuleSpan> out;
  for (auto [b, e] : spans)
    out.push_back({region.entry_begin + b, region.entry_begin + e});
  return out;
}

// fixed battery checked per entry, in this order:
//   filler_substitution, filler_deletion, restart_indication,
//   restart_deletion, repetition_deletion
// repetition needs adjacency, so it looks at the neighboring token on the
// same side whether that neighbor is matched context or inside the region
inline std::vector<VerbatimFinding> builtin_verbatim_tests(const DiffRegion& region) {
  size_t k = region.entries.size();
  std::vector<size_t> ref_before, hyp_before;
  detail::consumed_prefix(region, ref_before, hyp_before);

  auto padded = [](const std::vector<Token>& left, const std::vector<Token>& mid,
                   const std::vector<Token>& right) {
    std::vector<const Token*> seq;
    for (const auto& t : left) seq.push_back(&t);
    for (const auto& t : mid) seq.push_back(&t);
    for (const auto& t : right) seq.push_back(&t);
    return seq;
  };
  auto ref_seq = padded(region.left_ref_context, region.ref_tokens,
                        region.right_ref_context);
  auto hyp_seq = padded(region.left_hyp_context, region.hyp_tokens,
                        region.right_hyp_context);
  auto repeats_neighbor = [](const std::vector<const Token*>& seq, size_t pos) {
    if (pos > 0 && seq[pos - 1]->norm == seq[pos]->norm) return true;
    return pos + 1 < seq.size() && seq[pos + 1]->norm == seq[pos]->norm;
  };

  std::vector<VerbatimFinding> out;
  auto emit = [&](const char* subtype, size_t i, int battery_index) {
    out.push_back({subtype, region.entry_begin + i, region.entry_begin + i + 1,
                   battery_index});
  };
  for (size_t i = 0; i < k; ++i) {
    const auto& e = region.entries[i];
    const Token* r = e.ref_index ? &region.ref_tokens[ref_before[i]] : nullptr;
    const Token* h = e.hyp_index ? &region.hyp_tokens[hyp_before[i]] : nullptr;
    if (e.op == AlignOp::Sub) {
      if (r->is_filler && h->is_filler) emit("filler_substitution", i, 0);
      if (r->norm == h->norm + "-" || h->norm == r->norm + "-")
        emit("restart_indication", i, 2);
    } else {
      const Token* t = e.op == AlignOp::Del ? r : h;
      if (t->is_filler) emit("filler_deletion", i, 1);
      if (t->is_restart_fragment) emit("restart_deletion", i, 3);
      size_t pos = e.op == AlignOp::Del
                       ? region.left_ref_context.size() + ref_before[i]
                       : region.left_hyp_context.size() + hyp_before[i];
      if (repeats_neighbor(e.op == AlignOp::Del ? ref_seq : hyp_seq, pos))
        emit("repetition_deletion", i, 4);
    }
  }
  return out;
}

// greedy claim pass: candidates from the builtin battery and every rule,
// ordered by category precedence (MS > RED > VERBATIM), then longer span,
// then rule file order (the battery precedes file rules), then leftmost;
// spans claim atomically, leftovers become UNACCOUNTED
inline Attribution attribute(const Alignment& a, const std::vector<Token>& ref,
                             const std::vector<Token>& hyp,
                             const std::vector<CategoryRule>& rules) {
  struct Candidate {
    int cat_rank;
    size_t len;
    long long order;
    size_t begin, end;
    Category category;
    std::string rule_id;
    std::string subtype;
  };
  constexpr long long kBatterySize = 5;

  std::vector<Candidate> cands;
  for (const auto& region : extract_regions(a, ref, hyp)) {
    for (const auto& f : builtin_verbatim_tests(region))
      cands.push_back({static_cast<int>(Category::Verbatim),
                       f.entry_end - f.entry_begin, f.battery_index - kBatterySize,
                       f.entry_begin, f.entry_end, Category::Verbatim, "",
                       f.subtype});
    for (const auto& rule : rules)
      for (const auto& s : match_rule(rule, region))
        cands.push_back({static_cast<int>(rule.category),
                         s.entry_end - s.entry_begin, rule.order, s.entry_begin,
                         s.entry_end, rule.category, rule.rule_id, rule.subtype});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.cat_rank != y.cat_rank) return x.cat_rank < y.cat_rank;
    if (x.len != y.len) return x.len > y.len;
    if (x.order != y.order) return x.order < y.order;
    return x.begin < y.begin;
  });

  std::vector<char> claimed(a.entries.size(), 0);
  Attribution attr;
  for (const auto& c : cands) {
    bool free = true;
    for (size_t i = c.begin; i < c.end && free; ++i) free = !claimed[i];
    if (!free) continue;
    for (size_t i = c.begin; i < c.end; ++i) {
      claimed[i] = 1;
      attr.entries.push_back({i, c.category, c.rule_id, c.subtype});
    }
  }
  for (size_t i = 0; i < a.entries.size(); ++i)
    if (a.entries[i].op != AlignOp::Match && !claimed[i])
      attr.entries.push_back({i, Category::Unaccounted, "", ""});
  std::sort(attr.entries.begin(), attr.entries.end(),
            [](const AttributionEntry& x, const AttributionEntry& y) {
              return x.entry_index < y.entry_index;
            });
  return attr;
}

inline nlohmann::ordered_json attribution_to_json(const Attribution& attr) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : attr.entries) {
    nlohmann::ordered_json je;
    je["entry_index"] = e.entry_index;
    je["category"] = to_string(e.category);
    je["rule_id"] = e.rule_id.empty() ? nlohmann::ordered_json(nullptr)
                                      : nlohmann::ordered_json(e.rule_id);
    je["subtype"] = e.subtype.empty() ? nlohmann::ordered_json(nullptr)
                                      : nlohmann::ordered_json(e.subtype);
    arr.push_back(std::move(je));
  }
  return arr;
}

}  // namespace transdiff

#endif  // TRANSDIFF_ATTRIBUTION_HPP
