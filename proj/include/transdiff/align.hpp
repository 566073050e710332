#ifndef TRANSDIFF_ALIGN_HPP
#define TRANSDIFF_ALIGN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "transdiff/errors.hpp"
#include "transdiff/token.hpp"

namespace transdiff {

enum class AlignOp : std::uint8_t { Match = 0, Sub = 1, Del = 2, Ins = 3 };

inline const char* to_string(AlignOp op) {
  switch (op) {
    case AlignOp::Match: return "MATCH";
    case AlignOp::Sub: return "SUB";
    case AlignOp::Del: return "DEL";
    case AlignOp::Ins: return "INS";
  }
  return "?";
}

struct AlignEntry {
  AlignOp op = AlignOp::Match;
  std::optional<int> ref_index;  // absent for INS
  std::optional<int> hyp_index;  // absent for DEL
};

struct CostModel {
  long long sub_cost = 1;
  long long ins_cost = 1;
  long long del_cost = 1;
};

struct SourceId {
  std::string file_id;
  std::string version_id;
};

struct AlignOptions {
  // (|ref|+1) * (|hyp|+1) cells must fit under this before the table is
  // allocated
  std::uint64_t cell_budget = 4000000000ULL;
};

struct Alignment {
  SourceId ref;
  SourceId hyp;
  long long cost = 0;
  std::vector<AlignEntry> entries;
};

// Levenshtein over token norms. The objective is lexicographic: minimum
// cost first, then the fewest substitutions among equal-cost scripts. The
// second key pins the SUB/DEL/INS counts regardless of direction (the count
// of substitutions is what a role swap preserves, and the deletion and
// insertion counts follow from it and the length difference), so reversing
// reference and hypothesis exactly swaps INS with DEL. Cost and substitution
// tables are kept as two pairs of rolling rows; a full byte table records
// the op chosen per cell so the backtrace is a straight walk. The table is
// filled from the suffix side, which makes the recorded op at each cell the
// highest-priority (MATCH > SUB > DEL > INS) continuation of an optimal
// script, so the forward walk reads off the script that resolves remaining
// ties toward consuming the reference first.
inline Alignment align(const std::vector<Token>& ref, const std::vector<Token>& hyp,
                       const CostModel& costs = {}, const AlignOptions& opt = {}) {
  if (costs.sub_cost < 1 || costs.ins_cost < 1 || costs.del_cost < 1)
    throw UsageError("alignment costs must all be >= 1");

  const std::uint64_t n = ref.size();
  const std::uint64_t m = hyp.size();
  if (m + 1 != 0 && n + 1 > opt.cell_budget / (m + 1))
    throw ResourceError("alignment table of " + std::to_string(n) + "x" +
                        std::to_string(m) + " tokens exceeds the cell budget of " +
                        std::to_string(opt.cell_budget) +
                        "; chunk the inputs into smaller sections");

  // intern norms so cell comparisons are integer compares
  std::unordered_map<std::string_view, std::int32_t> ids;
  auto intern = [&](const std::vector<Token>& toks) {
    std::vector<std::int32_t> v;
    v.reserve(toks.size());
    for (const auto& t : toks) {
      auto [it, inserted] = ids.emplace(t.norm, static_cast<std::int32_t>(ids.size()));
      v.push_back(it->second);
    }
    return v;
  };
  auto rid = intern(ref);
  auto hid = intern(hyp);

  std::vector<std::uint8_t> op_table((n + 1) * (m + 1), static_cast<std::uint8_t>(AlignOp::Match));
  auto op_at = [&](std::uint64_t i, std::uint64_t j) -> std::uint8_t& {
    return op_table[i * (m + 1) + j];
  };

  std::vector<long long> next_row(m + 1), row(m + 1);
  std::vector<long long> next_subs(m + 1), subs_row(m + 1);
  for (std::uint64_t j = 0; j <= m; ++j) {
    next_row[j] = static_cast<long long>(m - j) * costs.ins_cost;
    next_subs[j] = 0;
    if (j < m) op_at(n, j) = static_cast<std::uint8_t>(AlignOp::Ins);
  }

  for (std::uint64_t ii = n; ii-- > 0;) {
    row[m] = next_row[m] + costs.del_cost;
    subs_row[m] = 0;
    op_at(ii, m) = static_cast<std::uint8_t>(AlignOp::Del);
    for (std::uint64_t jj = m; jj-- > 0;) {
      long long best, best_subs;
      AlignOp op;
      if (rid[ii] == hid[jj]) {
        best = next_row[jj + 1];
        best_subs = next_subs[jj + 1];
        op = AlignOp::Match;
      } else {
        best = next_row[jj + 1] + costs.sub_cost;
        best_subs = next_subs[jj + 1] + 1;
        op = AlignOp::Sub;
      }
      long long del_cand = next_row[jj] + costs.del_cost;
      if (del_cand < best || (del_cand == best && next_subs[jj] < best_subs)) {
        best = del_cand;
        best_subs = next_subs[jj];
        op = AlignOp::Del;
      }
      long long ins_cand = row[jj + 1] + costs.ins_cost;
      if (ins_cand < best || (ins_cand == best && subs_row[jj + 1] < best_subs)) {
        best = ins_cand;
        best_subs = subs_row[jj + 1];
        op = AlignOp::Ins;
      }
      row[jj] = best;
      subs_row[jj] = best_subs;
      op_at(ii, jj) = static_cast<std::uint8_t>(op);
    }
    std::swap(row, next_row);
    std::swap(subs_row, next_subs);
  }

  Alignment out;
  out.cost = next_row[0];
  std::uint64_t i = 0, j = 0;
  while (i < n || j < m) {
    AlignEntry e;
    e.op = static_cast<AlignOp>(op_at(i, j));
    switch (e.op) {
      case AlignOp::Match:
      case AlignOp::Sub:
        e.ref_index = static_cast<int>(i++);
        e.hyp_index = static_cast<int>(j++);
        break;
      case AlignOp::Del:
        e.ref_index = static_cast<int>(i++);
        break;
      case AlignOp::Ins:
        e.hyp_index = static_cast<int>(j++);
        break;
    }
    out.entries.push_back(e);
  }
  return out;
}

// view of the same alignment with reference and hypothesis exchanged; cost
// is re-priced because ins/del swap roles in the model
inline Alignment swap_roles(const Alignment& a, const CostModel& costs = {}) {
  Alignment out;
  out.ref = a.hyp;
  out.hyp = a.ref;
  out.entries.reserve(a.entries.size());
  long long cost = 0;
  for (const auto& e : a.entries) {
    AlignEntry s;
    s.ref_index = e.hyp_index;
    s.hyp_index = e.ref_index;
    switch (e.op) {
      case AlignOp::Match: s.op = AlignOp::Match; break;
      case AlignOp::Sub:
        s.op = AlignOp::Sub;
        cost += costs.sub_cost;
        break;
      case AlignOp::Del:
        s.op = AlignOp::Ins;
        cost += costs.ins_cost;
        break;
      case AlignOp::Ins:
        s.op = AlignOp::Del;
        cost += costs.del_cost;
        break;
    }
    out.entries.push_back(s);
  }
  out.cost = cost;
  return out;
}

inline nlohmann::ordered_json alignment_to_json(const Alignment& a) {
  nlohmann::ordered_json j;
  j["ref"] = {{"file_id", a.ref.file_id}, {"version_id", a.ref.version_id}};
  j["hyp"] = {{"file_id", a.hyp.file_id}, {"version_id", a.hyp.version_id}};
  j["cost"] = a.cost;
  auto entries = nlohmann::ordered_json::array();
  for (const auto& e : a.entries) {
    nlohmann::ordered_json je;
    je["op"] = to_string(e.op);
    if (e.ref_index) je["ref_index"] = *e.ref_index;
    if (e.hyp_index) je["hyp_index"] = *e.hyp_index;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

}  // namespace transdiff

#endif  // TRANSDIFF_ALIGN_HPP
