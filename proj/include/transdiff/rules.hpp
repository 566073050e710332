#ifndef TRANSDIFF_RULES_HPP
#define TRANSDIFF_RULES_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "transdiff/errors.hpp"
#include "transdiff/transcript.hpp"

namespace transdiff {

enum class Category { Morphosyntactic = 0, Reduction = 1, Verbatim = 2, Unaccounted = 3 };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::Morphosyntactic: return "MORPHOSYNTACTIC";
    case Category::Reduction: return "REDUCTION";
    case Category::Verbatim: return "VERBATIM";
    case Category::Unaccounted: return "UNACCOUNTED";
  }
  return "?";
}

enum class Attach { Fused, Apostrophe };

struct PatternItem {
  enum class Kind { Literal, Alternation, Stem, StemSuffix, Empty };
  Kind kind = Kind::Literal;
  std::string text;                        // literal word, or suffix text
  std::vector<std::string> alternatives;   // for Alternation
  char var = 0;                            // for Stem / StemSuffix
  Attach attach = Attach::Fused;           // for StemSuffix
};

struct CategoryRule {
  std::string rule_id;
  Category category = Category::Verbatim;
  std::string subtype;  // rule_id up to the first '.'
  std::vector<PatternItem> lhs;
  std::vector<PatternItem> rhs;
  bool symmetric = false;
  int min_stem = 0;  // shortest stem a variable in this rule may bind
  int order = 0;     // position in the rule file, used for tie-breaking
};

namespace detail {

struct RuleTok {
  std::string text;
  int col;  // 1-based
};

inline std::vector<RuleTok> lex_rule(std::string_view s, int base_col) {
  std::vector<RuleTok> toks;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    size_t b = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > b)
      toks.push_back({std::string(s.substr(b, i - b)), base_col + static_cast<int>(b)});
  }
  return toks;
}

inline PatternItem parse_pattern_item(const RuleTok& tok, int line) {
  const std::string& t = tok.text;
  PatternItem item;
  if (t == "_") {
    item.kind = PatternItem::Kind::Empty;
    return item;
  }
  if (t.front() == '{') {
    if (t.back() != '}' || t.size() < 3)
      throw RulesetError("malformed alternation '" + t + "'", line, tok.col);
    item.kind = PatternItem::Kind::Alternation;
    std::string body = t.substr(1, t.size() - 2);
    size_t pos = 0;
    while (true) {
      size_t bar = body.find('|', pos);
      std::string alt = body.substr(pos, bar == std::string::npos ? bar : bar - pos);
      if (alt.empty())
        throw RulesetError("empty alternative in '" + t + "'", line, tok.col);
      item.alternatives.push_back(alt);
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    return item;
  }
  if (t.front() == '$') {
    if (t.size() < 2 || t[1] < 'a' || t[1] > 'z')
      throw RulesetError("stem variables are single lowercase letters: '" + t + "'",
                         line, tok.col);
    item.var = t[1];
    if (t.size() == 2) {
      item.kind = PatternItem::Kind::Stem;
      return item;
    }
    if (t[2] != '+')
      throw RulesetError("expected '+suffix' after stem variable: '" + t + "'",
                         line, tok.col);
    std::string suffix = t.substr(3);
    item.kind = PatternItem::Kind::StemSuffix;
    if (!suffix.empty() && suffix.front() == '\'') {
      item.attach = Attach::Apostrophe;
      suffix.erase(suffix.begin());
    } else {
      item.attach = Attach::Fused;
    }
    if (suffix.empty())
      throw RulesetError("empty suffix in '" + t + "'", line, tok.col);
    item.text = suffix;
    return item;
  }
  item.kind = PatternItem::Kind::Literal;
  item.text = t;
  return item;
}

inline std::vector<PatternItem> parse_pattern_side(const std::vector<RuleTok>& toks,
                                                   size_t begin, size_t end,
                                                   const char* side, int line, int col) {
  if (begin == end)
    throw RulesetError(std::string(side) + " side of rule is empty", line, col);
  std::vector<PatternItem> items;
  for (size_t i = begin; i < end; ++i)
    items.push_back(parse_pattern_item(toks[i], line));
  if (items.size() > 1)
    for (size_t i = begin; i < end; ++i)
      if (items[i - begin].kind == PatternItem::Kind::Empty)
        throw RulesetError("'_' must be the entire side", line, toks[i].col);
  return items;
}

inline void collect_vars(const std::vector<PatternItem>& items,
                         const std::vector<RuleTok>& toks, size_t begin,
                         std::map<char, int>& vars) {
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.kind == PatternItem::Kind::Stem || it.kind == PatternItem::Kind::StemSuffix)
      vars.emplace(it.var, toks[begin + i].col);
  }
}

}  // namespace detail

// rule grammar, one rule per line:
//   <CAT> <rule_id> [SYM] [MINSTEM=<n>]: <lhs> => <rhs>
// CAT is MS, RED or VERB-EXTRA; items are space separated; {a|b} alternates
// single words; $x binds a stem; $x+suf and $x+'suf attach a suffix to a
// bound stem; _ is the empty side; # starts a comment line
inline std::vector<CategoryRule> parse_ruleset(std::string_view text) {
  std::vector<CategoryRule> rules;
  std::map<std::string, int> first_line_of_id;
  int line_no = 0;
  for (auto raw : detail::split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') continue;

    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw RulesetError("missing ':' between rule header and pattern", line_no);

    auto header = detail::lex_rule(line.substr(0, colon), 1);
    if (header.size() < 2)
      throw RulesetError("rule header needs a category and a rule id", line_no, 1);

    CategoryRule rule;
    const std::string& cat = header[0].text;
    if (cat == "MS") {
      rule.category = Category::Morphosyntactic;
    } else if (cat == "RED") {
      rule.category = Category::Reduction;
    } else if (cat == "VERB-EXTRA") {
      rule.category = Category::Verbatim;
    } else {
      throw RulesetError("unknown category '" + cat + "' (expected MS, RED or VERB-EXTRA)",
                         line_no, header[0].col);
    }
    rule.rule_id = header[1].text;
    for (size_t i = 2; i < header.size(); ++i) {
      const std::string& flag = header[i].text;
      if (flag == "SYM") {
        rule.symmetric = true;
      } else if (flag.rfind("MINSTEM=", 0) == 0) {
        try {
          rule.min_stem = std::stoi(flag.substr(8));
        } catch (...) {
          rule.min_stem = 0;
        }
        if (rule.min_stem < 1)
          throw RulesetError("bad MINSTEM value in '" + flag + "'", line_no, header[i].col);
      } else {
        throw RulesetError("unknown rule modifier '" + flag + "'", line_no, header[i].col);
      }
    }

    auto body = detail::lex_rule(line.substr(colon + 1), static_cast<int>(colon) + 2);
    size_t arrow = body.size();
    for (size_t i = 0; i < body.size(); ++i) {
      if (body[i].text == "=>") {
        if (arrow != body.size())
          throw RulesetError("more than one '=>' in rule", line_no, body[i].col);
        arrow = i;
      }
    }
    if (arrow == body.size())
      throw RulesetError("rule pattern needs '=>' between its sides", line_no);

    rule.lhs = detail::parse_pattern_side(body, 0, arrow, "left", line_no,
                                          static_cast<int>(colon) + 2);
    rule.rhs = detail::parse_pattern_side(body, arrow + 1, body.size(), "right", line_no,
                                          static_cast<int>(colon) + 2);
    if (rule.lhs[0].kind == PatternItem::Kind::Empty &&
        rule.rhs[0].kind == PatternItem::Kind::Empty)
      throw RulesetError("rule sides cannot both be empty", line_no);

    std::map<char, int> lhs_vars, rhs_vars;
    detail::collect_vars(rule.lhs, body, 0, lhs_vars);
    detail::collect_vars(rule.rhs, body, arrow + 1, rhs_vars);
    for (const auto& [v, col] : rhs_vars)
      if (!lhs_vars.count(v))
        throw RulesetError("unbound variable $" + std::string(1, v) + " in rule '" +
                               rule.rule_id + "'",
                           line_no, col);
    for (const auto& [v, col] : lhs_vars)
      if (!rhs_vars.count(v))
        throw RulesetError("unbound variable $" + std::string(1, v) + " in rule '" +
                               rule.rule_id + "'",
                           line_no, col);

    auto [it, inserted] = first_line_of_id.emplace(rule.rule_id, line_no);
    if (!inserted)
      throw RulesetError("duplicate rule id '" + rule.rule_id + "' (first defined at line " +
                             std::to_string(it->second) + ")",
                         line_no);

    size_t dot = rule.rule_id.find('.');
    rule.subtype = rule.rule_id.substr(0, dot);
    rule.order = static_cast<int>(rules.size());
    rules.push_back(std::move(rule));
  }
  return rules;
}

// two tab separated columns: reduced form, then its full form; each row
// becomes a symmetric REDUCTION rule
inline std::vector<CategoryRule> rules_from_reduced_forms(std::string_view text) {
  std::vector<CategoryRule> rules;
  int line_no = 0;
  for (auto raw : detail::split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') continue;

    size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw RulesetError("reduced-forms row needs two tab separated columns", line_no);
    std::string reduced(line.substr(0, tab));
    std::string full(line.substr(tab + 1));
    auto full_words = detail::lex_rule(full, 1);
    if (reduced.empty() || reduced.find(' ') != std::string::npos)
      throw RulesetError("reduced form must be a single non-empty token", line_no);
    if (full_words.empty())
      throw RulesetError("full form column is empty", line_no);

    CategoryRule rule;
    rule.rule_id = "reduced." + reduced;
    rule.category = Category::Reduction;
    rule.subtype = "reduced";
    rule.symmetric = true;
    for (const auto& w : full_words) {
      PatternItem item;
      item.kind = PatternItem::Kind::Literal;
      item.text = w.text;
      rule.lhs.push_back(std::move(item));
    }
    PatternItem r;
    r.kind = PatternItem::Kind::Literal;
    r.text = reduced;
    rule.rhs.push_back(std::move(r));
    rule.order = static_cast<int>(rules.size());
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace transdiff

#include "transdiff/default_rules.hpp"

#endif  // TRANSDIFF_RULES_HPP
