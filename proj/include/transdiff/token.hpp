#ifndef TRANSDIFF_TOKEN_HPP
#define TRANSDIFF_TOKEN_HPP

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/errors.hpp"

namespace transdiff {

struct Token {
  std::string surface;  // as written, minus stripped edge punctuation
  std::string norm;     // what alignment and rules operate on
  int index = 0;        // ordinal within the flattened transcript
  bool is_filler = false;
  bool is_restart_fragment = false;
  bool is_nonspeech_tag = false;
};

struct NormalizationConfig {
  bool lowercase = true;
  // characters removed from token edges; apostrophes and hyphens are never
  // stripped no matter what this is set to (contractions and restart
  // fragments depend on them)
  std::string strip_punctuation = ".,!?;:\"()[]<>{}*_=+~`|\\/";
  bool drop_nonspeech_tags = true;
  // opening/closing delimiter pairs that mark annotations like [laugh]
  std::vector<std::pair<char, char>> tag_delimiters = {
      {'(', ')'}, {'[', ']'}, {'<', '>'}};
  std::set<std::string> filler_lexicon = {
      "uh", "um", "er", "ah", "eh", "hm", "hmm",
      "mm", "mhm", "mm-hmm", "uh-huh", "huh"};
};

namespace detail {

inline bool strippable(char c, const NormalizationConfig& cfg) {
  if (c == '\'' || c == '-') return false;
  return cfg.strip_punctuation.find(c) != std::string::npos;
}

inline std::string strip_edges(std::string_view word, const NormalizationConfig& cfg) {
  size_t b = 0;
  size_t e = word.size();
  while (b < e && strippable(word[b], cfg)) ++b;
  while (e > b && strippable(word[e - 1], cfg)) --e;
  return std::string(word.substr(b, e - b));
}

inline std::string lower_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

inline bool ends_with_single_hyphen(const std::string& s) {
  return s.size() >= 2 && s.back() == '-' && s[s.size() - 2] != '-';
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> units;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > b) units.push_back(text.substr(b, i - b));
  }
  return units;
}

// peels strippable punctuation hanging off the end of a unit until the
// wanted closer surfaces, so that "(laughs)," still reads as closed by ')';
// returns the unit up to and including the closer, or empty when the unit
// does not end with it
inline std::string_view closed_by(std::string_view u, char close,
                                  const NormalizationConfig& cfg) {
  size_t e = u.size();
  while (e > 0 && u[e - 1] != close && strippable(u[e - 1], cfg)) --e;
  if (e == 0 || u[e - 1] != close) return {};
  return u.substr(0, e);
}

// a unit beginning with an opening delimiter starts a tag that runs until
// the first unit ending with the matching closer; returns the index one
// past the tag, or `begin` when no closer exists in the utterance
inline size_t tag_span_end(const std::vector<std::string_view>& units, size_t begin,
                           const NormalizationConfig& cfg) {
  for (const auto& [open, close] : cfg.tag_delimiters) {
    if (units[begin].front() != open) continue;
    for (size_t j = begin; j < units.size(); ++j) {
      auto u = closed_by(units[j], close, cfg);
      if (!u.empty() && !(j == begin && u.size() == 1 && open == close)) {
        return j + 1;
      }
    }
  }
  return begin;
}

}  // namespace detail

// splits one utterance into normalized tokens; indices are 0-based within
// this call (transcript-level flattening reindexes afterwards)
inline std::vector<Token> tokenize_text(std::string_view text,
                                        const NormalizationConfig& cfg) {
  std::vector<Token> out;
  auto units = detail::split_whitespace(text);
  size_t i = 0;
  while (i < units.size()) {
    size_t tag_end = detail::tag_span_end(units, i, cfg);
    if (tag_end > i) {
      if (!cfg.drop_nonspeech_tags) {
        std::string_view last = units[tag_end - 1];
        for (const auto& [open, close] : cfg.tag_delimiters) {
          if (units[i].front() != open) continue;
          auto trimmed = detail::closed_by(last, close, cfg);
          if (!trimmed.empty()) {
            last = trimmed;
            break;
          }
        }
        Token t;
        for (size_t j = i; j < tag_end; ++j) {
          if (!t.surface.empty()) t.surface += ' ';
          t.surface.append(j + 1 == tag_end ? last : units[j]);
        }
        t.norm = cfg.lowercase ? detail::lower_ascii(t.surface) : t.surface;
        t.is_nonspeech_tag = true;
        t.index = static_cast<int>(out.size());
        out.push_back(std::move(t));
      }
      i = tag_end;
      continue;
    }

    Token t;
    t.surface = detail::strip_edges(units[i], cfg);
    ++i;
    if (t.surface.empty()) continue;
    t.norm = cfg.lowercase ? detail::lower_ascii(t.surface) : t.surface;
    t.is_filler = cfg.filler_lexicon.count(t.norm) > 0;
    t.is_restart_fragment = detail::ends_with_single_hyphen(t.norm);
    t.index = static_cast<int>(out.size());
    out.push_back(std::move(t));
  }
  return out;
}

// loads a NormalizationConfig from JSON text; absent keys keep defaults
inline NormalizationConfig normalization_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("normalization config is not valid JSON: ") + e.what());
  }
  NormalizationConfig cfg;
  try {
    if (j.contains("lowercase")) cfg.lowercase = j.at("lowercase").get<bool>();
    if (j.contains("strip_punctuation"))
      cfg.strip_punctuation = j.at("strip_punctuation").get<std::string>();
    if (j.contains("drop_nonspeech_tags"))
      cfg.drop_nonspeech_tags = j.at("drop_nonspeech_tags").get<bool>();
    if (j.contains("tag_delimiters")) {
      cfg.tag_delimiters.clear();
      for (const auto& d : j.at("tag_delimiters")) {
        auto s = d.get<std::string>();
        if (s.size() != 2)
          throw FormatError("tag_delimiters entries must be exactly two characters: '" + s + "'");
        cfg.tag_delimiters.emplace_back(s[0], s[1]);
      }
    }
    if (j.contains("filler_lexicon")) {
      cfg.filler_lexicon.clear();
      for (const auto& f : j.at("filler_lexicon"))
        cfg.filler_lexicon.insert(f.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad normalization config field: ") + e.what());
  }
  // the lexicon must already be in normalized form or membership tests
  // against normalized tokens could never fire
  for (const auto& f : cfg.filler_lexicon) {
    std::string n = detail::strip_edges(f, cfg);
    if (cfg.lowercase) n = detail::lower_ascii(n);
    if (n != f)
      throw FormatError("filler_lexicon entry '" + f + "' is not normalized under this config");
  }
  return cfg;
}

inline nlohmann::ordered_json normalization_config_to_json(const NormalizationConfig& cfg) {
  nlohmann::ordered_json j;
  j["lowercase"] = cfg.lowercase;
  j["strip_punctuation"] = cfg.strip_punctuation;
  j["drop_nonspeech_tags"] = cfg.drop_nonspeech_tags;
  auto delims = nlohmann::ordered_json::array();
  for (const auto& [open, close] : cfg.tag_delimiters)
    delims.push_back(std::string{open, close});
  j["tag_delimiters"] = delims;
  j["filler_lexicon"] = cfg.filler_lexicon;
  return j;
}

}  // namespace transdiff

#endif  // TRANSDIFF_TOKEN_HPP
