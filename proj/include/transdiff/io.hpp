#ifndef TRANSDIFF_IO_HPP
#define TRANSDIFF_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/errors.hpp"
#include "transdiff/transcript.hpp"

namespace transdiff {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FormatError("read failed for '" + path.string() + "'");
  return std::move(buf).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write file '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw FormatError("write failed for '" + path.string() + "'");
}

// FNV-1a over the raw bytes; used to fingerprint rule files in run metadata
inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// one row of the corpus manifest; `path` is already resolved against the
// directory the manifest itself lives in
struct ManifestEntry {
  std::string file_id;
  std::string version_id;
  std::filesystem::path path;
  std::string format;  // "plaintext" or "coraal"
};

// .tsv means the CORAAL distribution layout, anything else is plain text
inline std::string infer_format(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? "coraal" : "plaintext";
}

inline std::vector<ManifestEntry> parse_manifest(const std::string& json_text,
                                                 const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw FormatError("manifest must be a JSON array");

  std::vector<ManifestEntry> entries;
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& row = j[i];
    auto field = [&](const char* key) -> std::string {
      if (!row.is_object() || !row.contains(key) || !row.at(key).is_string())
        throw FormatError("manifest entry " + std::to_string(i) +
                          " needs a string field '" + key + "'");
      return row.at(key).get<std::string>();
    };
    ManifestEntry e;
    e.file_id = field("file_id");
    e.version_id = field("version_id");
    std::filesystem::path p = field("path");
    e.path = p.is_absolute() ? p : base_dir / p;
    e.format = field("format");
    if (e.format != "plaintext" && e.format != "coraal")
      throw FormatError("manifest entry " + std::to_string(i) + ": unknown format '" +
                        e.format + "' (expected 'plaintext' or 'coraal')");
    if (!seen.insert({e.file_id, e.version_id}).second)
      throw FormatError("manifest lists (" + e.file_id + ", " + e.version_id +
                        ") more than once");
    entries.push_back(std::move(e));
  }
  return entries;
}

inline Transcript load_transcript(const std::filesystem::path& path,
                                  const std::string& format, std::string file_id,
                                  std::string version_id) {
  std::string bytes = read_file(path);
  try {
    if (format == "coraal")
      return parse_coraal_tsv(bytes, std::move(file_id), std::move(version_id));
    if (format == "plaintext")
      return parse_plaintext(bytes, std::move(file_id), std::move(version_id));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  throw FormatError("unknown transcript format '" + format +
                    "' (expected 'plaintext' or 'coraal')");
}

}  // namespace transdiff

#endif  // TRANSDIFF_IO_HPP
