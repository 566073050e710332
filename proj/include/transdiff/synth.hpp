#ifndef TRANSDIFF_SYNTH_HPP
#define TRANSDIFF_SYNTH_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/attribution.hpp"
#include "transdiff/errors.hpp"
#include "transdiff/rules.hpp"
#include "transdiff/token.hpp"

namespace transdiff {

// counts per injection subtype, keyed by the names in kInjectionSubtypes
struct InjectionPlan {
  std::map<std::string, long long> counts;
};

struct InjectedEdit {
  std::string subtype;
  Category category = Category::Verbatim;
  size_t ref_begin = 0, ref_end = 0;  // token span touched in the input list
  size_t hyp_begin = 0, hyp_end = 0;  // token span produced in the output list
};

struct InjectionResult {
  std::vector<Token> tokens;
  std::vector<InjectedEdit> edits;
};

namespace detail {

struct SubtypeInfo {
  const char* name;
  Category category;
};

// fixed processing order, scarcest site kinds first so edits that can go
// almost anywhere (filler and repetition insertions) never starve them;
// also the authoritative list of plan keys
inline const std::vector<SubtypeInfo>& injection_subtypes() {
  static const std::vector<SubtypeInfo> kSubtypes = {
      {"reduced_form_swaps", Category::Reduction},
      {"contraction_swaps", Category::Reduction},
      {"copula_deletions", Category::Morphosyntactic},
      {"them_those_swaps", Category::Morphosyntactic},
      {"was_were_swaps", Category::Morphosyntactic},
      {"filler_deletions", Category::Verbatim},
      {"restart_insertions", Category::Verbatim},
      {"repetition_insertions", Category::Verbatim},
      {"filler_insertions", Category::Verbatim},
  };
  return kSubtypes;
}

// every word a rule can mention; tokens outside this set cannot be claimed
// by a pure insertion/deletion rule, so they are safe repetition material
inline std::set<std::string> rule_word_set(const std::vector<CategoryRule>& rules,
                                           const NormalizationConfig& cfg) {
  std::set<std::string> words(cfg.filler_lexicon.begin(), cfg.filler_lexicon.end());
  auto add_side = [&](const std::vector<PatternItem>& items) {
    for (const auto& it : items) {
      if (it.kind == PatternItem::Kind::Literal) words.insert(it.text);
      if (it.kind == PatternItem::Kind::Alternation)
        words.insert(it.alternatives.begin(), it.alternatives.end());
    }
  };
  for (const auto& r : rules) {
    add_side(r.lhs);
    add_side(r.rhs);
  }
  return words;
}

struct PendingEdit {
  size_t subtype_index;
  size_t begin, end;  // input token span consumed (begin == end for pure inserts)
  std::vector<Token> replacement;
};

class InjectionState {
 public:
  InjectionState(const std::vector<Token>& tokens,
                 const std::vector<CategoryRule>& rules,
                 const NormalizationConfig& cfg, uint64_t seed)
      : tokens_(tokens), rules_(rules), cfg_(cfg), rng_(seed),
        blocked_words_(rule_word_set(rules, cfg)) {
    fillers_.assign(cfg.filler_lexicon.begin(), cfg.filler_lexicon.end());
    for (const auto& r : rules) {
      if (r.rule_id.rfind("reduced.", 0) != 0 || r.rhs.size() != 1) continue;
      bool literal = r.rhs[0].kind == PatternItem::Kind::Literal;
      std::vector<std::string> full;
      for (const auto& it : r.lhs) {
        if (it.kind != PatternItem::Kind::Literal) literal = false;
        else full.push_back(it.text);
      }
      if (literal && !full.empty()) reduced_pairs_.push_back({full, r.rhs[0].text});
    }
  }

  std::vector<PendingEdit> run(const InjectionPlan& plan) {
    const auto& subtypes = injection_subtypes();
    for (size_t s = 0; s < subtypes.size(); ++s) {
      auto it = plan.counts.find(subtypes[s].name);
      if (it == plan.counts.end()) continue;
      for (long long k = 0; k < it->second; ++k) place(s, subtypes[s].name, it->second, k);
    }
    return std::move(pending_);
  }

 private:
  using Sites = std::vector<PendingEdit>;

  void place(size_t subtype_index, const std::string& name, long long requested,
             long long placed) {
    Sites sites = enumerate(subtype_index);
    if (sites.empty())
      throw CapacityError("no eligible site left for " + name + " (requested " +
                              std::to_string(requested) + ", placed " +
                              std::to_string(placed) + ")",
                          name);
    PendingEdit choice = sites[rng_() % sites.size()];
    claim(choice.begin, choice.end);
    pending_.push_back(std::move(choice));
  }

  Sites enumerate(size_t s) {
    const size_t n = tokens_.size();
    Sites sites;
    auto free_span = [&](long long a, long long b) {
      for (long long i = a - 1; i < b + 1; ++i)
        if (claimed_.count(i)) return false;
      return true;
    };
    auto word_token = [&](const std::string& norm) {
      Token t;
      t.surface = norm;
      t.norm = norm;
      t.is_filler = cfg_.filler_lexicon.count(norm) > 0;
      t.is_restart_fragment = norm.size() >= 2 && norm.back() == '-' &&
                              norm[norm.size() - 2] != '-';
      return t;
    };
    auto safe_plain = [&](const Token& t) {
      return !t.is_filler && !t.is_restart_fragment &&
             blocked_words_.count(t.norm) == 0;
    };
    // an edit flush against an identical right neighbor is ambiguous: the
    // minimal alignment pins the inserted or deleted token to the right end
    // of the identical run, so such sites would record spans the alignment
    // contradicts
    auto right_differs = [&](size_t i) {
      return i + 1 >= n || tokens_[i + 1].norm != tokens_[i].norm;
    };
    const std::string name = injection_subtypes()[s].name;
    if (name == "filler_insertions") {
      if (!fillers_.empty())
        for (size_t g = 0; g <= n; ++g)
          if (free_span(g, g) && !(g < n && tokens_[g].is_filler))
            sites.push_back({s, g, g, {}});
      if (!sites.empty()) {
        // word drawn once so site enumeration stays rng-neutral
        std::string w = fillers_[rng_() % fillers_.size()];
        for (auto& site : sites) site.replacement = {word_token(w)};
      }
    } else if (name == "filler_deletions") {
      for (size_t i = 0; i < n; ++i)
        if (tokens_[i].is_filler && right_differs(i) && free_span(i, i + 1))
          sites.push_back({s, i, i + 1, {}});
    } else if (name == "repetition_insertions") {
      // duplicate a plain token in place
      for (size_t i = 0; i < n; ++i)
        if (safe_plain(tokens_[i]) && right_differs(i) &&
            free_span(i + 1, i + 1))
          sites.push_back({s, i + 1, i + 1, {word_token(tokens_[i].norm)}});
    } else if (name == "restart_insertions") {
      // cut-off copy before a plain token
      for (size_t i = 0; i < n; ++i)
        if (safe_plain(tokens_[i]) &&
            blocked_words_.count(tokens_[i].norm + "-") == 0 &&
            free_span(i, i + 1))
          sites.push_back({s, i, i, {word_token(tokens_[i].norm + "-")}});
    } else if (name == "reduced_form_swaps") {
      // full form sequence -> reduced form
      for (const auto& [full, reduced] : reduced_pairs_)
        for (size_t i = 0; i + full.size() <= n; ++i) {
          bool hit = free_span(i, i + full.size());
          for (size_t k = 0; hit && k < full.size(); ++k)
            hit = tokens_[i + k].norm == full[k];
          if (hit) sites.push_back({s, i, i + full.size(), {word_token(reduced)}});
        }
    } else if (name == "contraction_swaps") {
      // "<stem> will" -> "<stem>'ll"
      for (size_t i = 0; i + 1 < n; ++i)
        if (tokens_[i + 1].norm == "will" && safe_plain(tokens_[i]) &&
            blocked_words_.count(tokens_[i].norm + "'ll") == 0 &&
            free_span(i, i + 2))
          sites.push_back({s, i, i + 2, {word_token(tokens_[i].norm + "'ll")}});
    } else if (name == "copula_deletions") {
      for (size_t i = 0; i < n; ++i)
        if ((tokens_[i].norm == "is" || tokens_[i].norm == "are" ||
             tokens_[i].norm == "am") &&
            right_differs(i) && free_span(i, i + 1))
          sites.push_back({s, i, i + 1, {}});
    } else if (name == "them_those_swaps") {
      for (size_t i = 0; i < n; ++i)
        if ((tokens_[i].norm == "them" || tokens_[i].norm == "those") &&
            free_span(i, i + 1))
          sites.push_back(
              {s, i, i + 1,
               {word_token(tokens_[i].norm == "them" ? "those" : "them")}});
    } else if (name == "was_were_swaps") {
      for (size_t i = 0; i < n; ++i)
        if ((tokens_[i].norm == "was" || tokens_[i].norm == "were") &&
            free_span(i, i + 1))
          sites.push_back(
              {s, i, i + 1,
               {word_token(tokens_[i].norm == "was" ? "were" : "was")}});
    }
    return sites;
  }

  void claim(size_t begin, size_t end) {
    for (long long i = static_cast<long long>(begin) - 2;
         i < static_cast<long long>(end) + 2; ++i)
      claimed_.insert(i);
  }

  const std::vector<Token>& tokens_;
  const std::vector<CategoryRule>& rules_;
  const NormalizationConfig& cfg_;
  std::mt19937_64 rng_;
  std::set<std::string> blocked_words_;
  std::vector<std::string> fillers_;
  std::vector<std::pair<std::vector<std::string>, std::string>> reduced_pairs_;
  std::set<long long> claimed_;
  std::vector<PendingEdit> pending_;
};

}  // namespace detail

inline InjectionPlan parse_injection_plan(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("injection plan: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("injection plan must be a JSON object");
  InjectionPlan plan;
  const auto& subtypes = detail::injection_subtypes();
  for (const auto& [key, value] : j.items()) {
    bool known = std::any_of(subtypes.begin(), subtypes.end(),
                             [&](const auto& s) { return key == s.name; });
    if (!known) throw FormatError("unknown injection subtype '" + key + "'");
    if (!value.is_number_integer() || value.get<long long>() < 0)
      throw FormatError("count for '" + key + "' must be a non-negative integer");
    plan.counts[key] = value.get<long long>();
  }
  return plan;
}

// mutate a copy of `tokens` per the plan, choosing sites pseudo-randomly but
// reproducibly; sites keep two untouched tokens between edits so alignment
// recovers each edit as its own region
inline InjectionResult inject_differences(
    const std::vector<Token>& tokens, const InjectionPlan& plan, uint64_t seed,
    const std::vector<CategoryRule>& rules = default_rules(),
    const NormalizationConfig& cfg = NormalizationConfig{}) {
  for (const auto& [key, count] : plan.counts) {
    const auto& subtypes = detail::injection_subtypes();
    if (!std::any_of(subtypes.begin(), subtypes.end(),
                     [&](const auto& s) { return key == s.name; }))
      throw FormatError("unknown injection subtype '" + key + "'");
  }
  detail::InjectionState state(tokens, rules, cfg, seed);
  auto pending = state.run(plan);
  std::sort(pending.begin(), pending.end(),
            [](const detail::PendingEdit& a, const detail::PendingEdit& b) {
              return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
            });

  InjectionResult result;
  size_t cursor = 0;
  auto copy_until = [&](size_t stop) {
    for (; cursor < stop; ++cursor) result.tokens.push_back(tokens[cursor]);
  };
  const auto& subtypes = detail::injection_subtypes();
  for (const auto& p : pending) {
    copy_until(p.begin);
    InjectedEdit e;
    e.subtype = subtypes[p.subtype_index].name;
    e.category = subtypes[p.subtype_index].category;
    e.ref_begin = p.begin;
    e.ref_end = p.end;
    e.hyp_begin = result.tokens.size();
    for (const auto& t : p.replacement) result.tokens.push_back(t);
    e.hyp_end = result.tokens.size();
    cursor = p.end;
    result.edits.push_back(std::move(e));
  }
  copy_until(tokens.size());
  for (size_t i = 0; i < result.tokens.size(); ++i)
    result.tokens[i].index = static_cast<int>(i);
  return result;
}

inline nlohmann::ordered_json injection_truth_to_json(const InjectionResult& r,
                                                      uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  auto edits = nlohmann::ordered_json::array();
  for (const auto& e : r.edits) {
    nlohmann::ordered_json je;
    je["subtype"] = e.subtype;
    je["category"] = to_string(e.category);
    je["ref_span"] = {e.ref_begin, e.ref_end};
    je["hyp_span"] = {e.hyp_begin, e.hyp_end};
    edits.push_back(std::move(je));
  }
  j["edits"] = std::move(edits);
  return j;
}

}  // namespace transdiff

#endif  // TRANSDIFF_SYNTH_HPP
