#ifndef TRANSDIFF_TRANSCRIPT_HPP
#define TRANSDIFF_TRANSCRIPT_HPP

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transdiff/errors.hpp"
#include "transdiff/token.hpp"

namespace transdiff {

struct Utterance {
  std::string speaker;
  std::optional<double> start_s;
  std::optional<double> end_s;
  std::string raw_text;
};

struct Transcript {
  std::string file_id;
  std::string version_id;
  std::vector<Utterance> utterances;
};

namespace detail {

// returns the offset of the first invalid byte, or npos if the buffer is
// well-formed UTF-8
inline size_t first_invalid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      if (c < 0xC2) return i;  // overlong
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      if (c > 0xF4) return i;  // beyond U+10FFFF
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return i;
    }
    i += len;
  }
  return std::string_view::npos;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

inline bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (true) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return fields;
}

inline double parse_time_field(std::string_view field, const char* column, size_t row) {
  std::string buf(field);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw FormatError("row " + std::to_string(row) + ": unparseable " + column + " '" +
                      buf + "'");
  return v;
}

}  // namespace detail

// one utterance per line; an optional "speaker:<TAB>" prefix names the
// speaker, everything else gets speaker UNK
inline Transcript parse_plaintext(std::string_view bytes, std::string file_id,
                                  std::string version_id) {
  size_t bad = detail::first_invalid_utf8(bytes);
  if (bad != std::string_view::npos)
    throw FormatError("input is not valid UTF-8 at byte offset " + std::to_string(bad));

  Transcript t;
  t.file_id = std::move(file_id);
  t.version_id = std::move(version_id);
  for (auto line : detail::split_lines(bytes)) {
    if (detail::blank(line)) continue;
    Utterance u;
    size_t sep = line.find(":\t");
    if (sep != std::string_view::npos && sep > 0 &&
        line.substr(0, sep).find('\t') == std::string_view::npos) {
      u.speaker = std::string(line.substr(0, sep));
      u.raw_text = std::string(line.substr(sep + 2));
    } else {
      u.speaker = "UNK";
      u.raw_text = std::string(line);
    }
    t.utterances.push_back(std::move(u));
  }
  return t;
}

// CORAAL distribution format: tab separated with a header row naming at
// least Line, Spkr, StTime, Content and EnTime; rows are re-sorted by Line
inline Transcript parse_coraal_tsv(std::string_view bytes, std::string file_id,
                                   std::string version_id) {
  auto lines = detail::split_lines(bytes);
  size_t header_row = 0;
  while (header_row < lines.size() && detail::blank(lines[header_row])) ++header_row;
  if (header_row == lines.size()) throw FormatError("CORAAL TSV is empty");

  auto header = detail::split_tabs(lines[header_row]);
  auto column = [&](const char* name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw FormatError(std::string("CORAAL TSV is missing required column '") + name + "'");
  };
  size_t c_line = column("Line");
  size_t c_spkr = column("Spkr");
  size_t c_st = column("StTime");
  size_t c_content = column("Content");
  size_t c_en = column("EnTime");
  size_t need = std::max({c_line, c_spkr, c_st, c_content, c_en}) + 1;

  std::vector<std::pair<long long, Utterance>> rows;
  for (size_t i = header_row + 1; i < lines.size(); ++i) {
    if (detail::blank(lines[i])) continue;
    size_t row_no = i + 1;  // 1-based, counting the header
    auto fields = detail::split_tabs(lines[i]);
    if (fields.size() < need)
      throw FormatError("row " + std::to_string(row_no) + " has " +
                        std::to_string(fields.size()) + " columns, expected at least " +
                        std::to_string(need));
    std::string line_field(fields[c_line]);
    char* end = nullptr;
    long long line_no = std::strtoll(line_field.c_str(), &end, 10);
    if (line_field.empty() || end != line_field.c_str() + line_field.size())
      throw FormatError("row " + std::to_string(row_no) + ": unparseable Line '" +
                        line_field + "'");
    Utterance u;
    u.speaker = std::string(fields[c_spkr]);
    u.start_s = detail::parse_time_field(fields[c_st], "StTime", row_no);
    u.end_s = detail::parse_time_field(fields[c_en], "EnTime", row_no);
    u.raw_text = std::string(fields[c_content]);
    rows.emplace_back(line_no, std::move(u));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  Transcript t;
  t.file_id = std::move(file_id);
  t.version_id = std::move(version_id);
  for (auto& [line_no, u] : rows) t.utterances.push_back(std::move(u));
  return t;
}

// flattens a transcript into one token stream; indices are contiguous and
// 0-based across utterance boundaries
inline std::vector<Token> tokenize_and_normalize(const Transcript& t,
                                                 const NormalizationConfig& cfg) {
  std::vector<Token> out;
  for (const auto& u : t.utterances) {
    auto toks = tokenize_text(u.raw_text, cfg);
    for (auto& tok : toks) {
      tok.index = static_cast<int>(out.size());
      out.push_back(std::move(tok));
    }
  }
  return out;
}

}  // namespace transdiff

#endif  // TRANSDIFF_TRANSCRIPT_HPP
