#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <initializer_list>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "transdiff/align.hpp"
#include "transdiff/attribution.hpp"
#include "transdiff/errors.hpp"
#include "transdiff/io.hpp"
#include "transdiff/metrics.hpp"
#include "transdiff/report.hpp"
#include "transdiff/rules.hpp"
#include "transdiff/synth.hpp"

namespace {

using namespace transdiff;
namespace fs = std::filesystem;

// exit codes are part of the tool's interface; the README documents this
// table and must stay in sync with it
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,  // unexpected failure
  kParse = 2,     // unreadable or unparseable input, missing files
  kBudget = 3,    // alignment table would exceed the cell budget
  kEmptyRef = 4,  // metrics against an empty reference
  kRuleset = 5,   // rule or reduced-forms syntax error
  kNoShared = 6,  // manifest versions share no file ids
  kCapacity = 7,  // synthesis plan wants more edits than sites exist
  kConflict = 8,  // output exists and --overwrite not given
  kUsage = 64,    // command line misuse
};

// cli-local signals with dedicated exit codes
struct NoSharedFiles {
  std::string message;
};
struct OutputConflict {
  fs::path path;
};

struct CommonOpts {
  std::vector<std::string> formats;
  std::string norm_config_path;
  std::string rules_path;
  std::string reduced_forms_path;
  std::string costs_spec;
  int jobs = 0;
  std::string out_dir;
  bool overwrite = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.formats, "output format: json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--norm-config", o.norm_config_path,
                  "normalization config JSON (defaults applied when absent)");
  cmd->add_option("--rules", o.rules_path,
                  "category rule file replacing the built-in set");
  cmd->add_option("--reduced-forms", o.reduced_forms_path,
                  "reduced-forms table replacing the built-in one");
  cmd->add_option("--costs", o.costs_spec, "alignment costs as SUB,INS,DEL");
  cmd->add_option("--jobs", o.jobs, "worker threads, 0 = one per core")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out_dir,
                  "write outputs into this directory instead of stdout");
  cmd->add_flag("--overwrite", o.overwrite, "replace existing output files");
}

NormalizationConfig load_norm_config(const CommonOpts& o) {
  if (o.norm_config_path.empty()) return {};
  return normalization_config_from_json(read_file(o.norm_config_path));
}

struct RuleSetup {
  std::vector<CategoryRule> rules;
  std::string rules_text;
  std::string reduced_text;
};

RuleSetup load_rules(const CommonOpts& o) {
  RuleSetup s;
  s.rules_text =
      o.rules_path.empty() ? default_ruleset_text() : read_file(o.rules_path);
  s.reduced_text = o.reduced_forms_path.empty() ? default_reduced_forms_text()
                                                : read_file(o.reduced_forms_path);
  std::vector<CategoryRule> base, reduced;
  try {
    base = parse_ruleset(s.rules_text);
  } catch (const RulesetError& e) {
    std::string name = o.rules_path.empty() ? "built-in rules" : o.rules_path;
    throw RulesetError(name + ": " + e.what(), e.line(), e.column());
  }
  try {
    reduced = rules_from_reduced_forms(s.reduced_text);
  } catch (const RulesetError& e) {
    std::string name = o.reduced_forms_path.empty() ? "built-in reduced forms"
                                                    : o.reduced_forms_path;
    throw RulesetError(name + ": " + e.what(), e.line(), e.column());
  }
  s.rules = combine_rules(std::move(base), std::move(reduced));
  return s;
}

CostModel parse_costs(const std::string& spec) {
  CostModel costs;
  if (spec.empty()) return costs;
  long long s = 0, i = 0, d = 0;
  char trail = 0;
  if (std::sscanf(spec.c_str(), "%lld ,%lld ,%lld %c", &s, &i, &d, &trail) != 3)
    throw UsageError("--costs expects three integers as SUB,INS,DEL");
  costs.sub_cost = s;
  costs.ins_cost = i;
  costs.del_cost = d;
  return costs;
}

std::string pick_format(const CommonOpts& o,
                        std::initializer_list<const char*> allowed,
                        const char* fallback) {
  if (o.formats.empty()) return fallback;
  if (o.formats.size() > 1)
    throw UsageError("this subcommand takes a single --format");
  for (const char* a : allowed)
    if (o.formats[0] == a) return o.formats[0];
  throw UsageError("--format '" + o.formats[0] +
                   "' is not supported by this subcommand");
}

// data goes to stdout unless --out names a directory; diagnostics always go
// to stderr so stdout stays machine readable
void emit(const CommonOpts& o, const std::string& filename,
          const std::string& content) {
  if (o.out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::path dir(o.out_dir);
  fs::create_directories(dir);
  fs::path path = dir / filename;
  if (fs::exists(path) && !o.overwrite) throw OutputConflict{path};
  write_file(path, content);
  std::cerr << "wrote " << path.string() << "\n";
}

std::vector<Token> load_tokens(const std::string& path_str,
                               const NormalizationConfig& cfg,
                               SourceId* id = nullptr) {
  fs::path p(path_str);
  Transcript t = load_transcript(p, infer_format(p), p.stem().string(), path_str);
  if (id) *id = SourceId{t.file_id, t.version_id};
  return tokenize_and_normalize(t, cfg);
}

int cmd_align(const std::string& ref_path, const std::string& hyp_path,
              const CommonOpts& o) {
  pick_format(o, {"json"}, "json");
  // rules play no part in alignment, but a supplied file must still parse
  if (!o.rules_path.empty() || !o.reduced_forms_path.empty()) load_rules(o);
  auto cfg = load_norm_config(o);
  auto costs = parse_costs(o.costs_spec);
  SourceId ref_id, hyp_id;
  auto ref = load_tokens(ref_path, cfg, &ref_id);
  auto hyp = load_tokens(hyp_path, cfg, &hyp_id);
  Alignment a = align(ref, hyp, costs);
  a.ref = ref_id;
  a.hyp = hyp_id;
  emit(o, "alignment.json", alignment_to_json(a).dump() + "\n");
  return kOk;
}

int cmd_wer(const std::string& ref_path, const std::string& hyp_path,
            const CommonOpts& o) {
  std::string format = pick_format(o, {"json", "text"}, "text");
  // rules play no part in the rates, but a supplied file must still parse
  if (!o.rules_path.empty() || !o.reduced_forms_path.empty()) load_rules(o);
  auto cfg = load_norm_config(o);
  auto costs = parse_costs(o.costs_spec);
  auto ref = load_tokens(ref_path, cfg);
  auto hyp = load_tokens(hyp_path, cfg);
  Alignment a = align(ref, hyp, costs);
  ErrorCounts counts = count_errors(a);
  WerBreakdown b = wer(counts);
  if (format == "text")
    emit(o, "wer.txt", wer_summary_line(b) + "\n");
  else
    emit(o, "wer.json", metrics_to_json(counts, b).dump() + "\n");
  return kOk;
}

int cmd_categorize(const std::string& ref_path, const std::string& hyp_path,
                   const CommonOpts& o) {
  pick_format(o, {"json"}, "json");
  auto cfg = load_norm_config(o);
  auto costs = parse_costs(o.costs_spec);
  RuleSetup rs = load_rules(o);
  SourceId ref_id;
  auto ref = load_tokens(ref_path, cfg, &ref_id);
  auto hyp = load_tokens(hyp_path, cfg);
  Alignment a = align(ref, hyp, costs);

  FilePairResult r;
  r.file_id = ref_id.file_id;
  r.ref_version = ref_path;
  r.hyp_version = hyp_path;
  r.counts = count_errors(a);
  r.attribution = attribute(a, ref, hyp, rs.rules);
  PairReport report = build_pair_report({r});

  nlohmann::ordered_json out;
  out["report"] = pair_report_to_json(report);
  out["attribution"] = attribution_to_json(r.attribution);
  emit(o, "categorize.json", out.dump() + "\n");
  return kOk;
}

int cmd_matrix(const std::string& manifest_path, const CommonOpts& o) {
  if (o.out_dir.empty()) throw UsageError("matrix writes files and needs --out DIR");
  std::set<std::string> requested(o.formats.begin(), o.formats.end());
  std::vector<std::string> formats;
  for (const char* f : {"json", "csv", "text"})
    if (requested.empty() || requested.count(f)) formats.push_back(f);

  auto cfg = load_norm_config(o);
  auto costs = parse_costs(o.costs_spec);
  RuleSetup rs = load_rules(o);

  auto entries = parse_manifest(read_file(manifest_path),
                                fs::path(manifest_path).parent_path());
  if (entries.empty()) throw FormatError("manifest is empty");

  // report every missing file before giving up on any of them
  std::vector<std::string> missing;
  for (const auto& e : entries)
    if (!fs::exists(e.path)) missing.push_back(e.path.string());
  if (!missing.empty()) {
    for (const auto& m : missing) std::cerr << "missing file: " << m << "\n";
    throw FormatError("manifest references " + std::to_string(missing.size()) +
                      " missing file(s)");
  }

  std::map<std::string, std::map<std::string, std::vector<Token>>> by_file;
  std::set<std::string> version_set;
  for (const auto& e : entries) {
    Transcript t = load_transcript(e.path, e.format, e.file_id, e.version_id);
    by_file[e.file_id][e.version_id] = tokenize_and_normalize(t, cfg);
    version_set.insert(e.version_id);
  }
  std::vector<std::string> versions(version_set.begin(), version_set.end());
  if (versions.size() < 2)
    throw NoSharedFiles{"manifest must list at least two transcript versions"};

  // one task per (file, ordered version pair), enumerated pair-major so the
  // merge below can walk contiguous groups
  struct Pair {
    std::string ref_v, hyp_v;
  };
  struct Task {
    std::string file_id;
    const std::vector<Token>* ref;
    const std::vector<Token>* hyp;
    size_t pair_index;
  };
  std::vector<Pair> pairs;
  std::vector<Task> tasks;
  std::vector<std::string> unpaired;
  for (const auto& rv : versions)
    for (const auto& hv : versions) {
      if (rv == hv) continue;
      size_t pair_index = pairs.size();
      pairs.push_back({rv, hv});
      size_t before = tasks.size();
      for (const auto& [file_id, by_version] : by_file) {
        auto r = by_version.find(rv);
        auto h = by_version.find(hv);
        if (r != by_version.end() && h != by_version.end())
          tasks.push_back({file_id, &r->second, &h->second, pair_index});
      }
      if (tasks.size() == before && rv < hv)
        unpaired.push_back("'" + rv + "' and '" + hv + "'");
    }
  if (!unpaired.empty()) {
    for (const auto& u : unpaired)
      std::cerr << "versions " << u << " share no file ids\n";
    throw NoSharedFiles{"the matrix needs every version pair to share at least one file id"};
  }

  // fan out over tasks; results land in preallocated slots so the merge
  // order (and therefore the output bytes) cannot depend on thread timing
  std::vector<FilePairResult> results(tasks.size());
  {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned n = o.jobs > 0 ? static_cast<unsigned>(o.jobs) : (hw ? hw : 1);
    if (n > tasks.size()) n = static_cast<unsigned>(tasks.size());
    if (n == 0) n = 1;
    std::atomic<size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          const Task& t = tasks[i];
          Alignment a = align(*t.ref, *t.hyp, costs);
          FilePairResult r;
          r.file_id = t.file_id;
          r.ref_version = pairs[t.pair_index].ref_v;
          r.hyp_version = pairs[t.pair_index].hyp_v;
          r.counts = count_errors(a);
          r.attribution = attribute(a, *t.ref, *t.hyp, rs.rules);
          results[i] = std::move(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (unsigned k = 0; k < n; ++k) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::vector<PairReport> cells;
  for (size_t i = 0; i < tasks.size();) {
    size_t j = i;
    std::vector<FilePairResult> group;
    while (j < tasks.size() && tasks[j].pair_index == tasks[i].pair_index)
      group.push_back(std::move(results[j++]));
    const Pair& p = pairs[tasks[i].pair_index];
    try {
      cells.push_back(build_pair_report(group));
    } catch (const EmptyReferenceError& e) {
      throw EmptyReferenceError(p.ref_v + " vs " + p.hyp_v + ": " + e.what());
    }
    i = j;
  }
  MatrixReport matrix = build_matrix(cells);

  for (const auto& f : formats) {
    std::string name = f == "text" ? "matrix.txt" : "matrix." + f;
    std::string content = render(matrix, f);
    if (f == "json") content += "\n";
    emit(o, name, content);
  }

  nlohmann::ordered_json meta;
  meta["tool"] = "transdiff";
  meta["tool_version"] = TRANSDIFF_VERSION;
  meta["manifest"] = manifest_path;
  meta["ruleset_source"] = o.rules_path.empty() ? "built-in" : o.rules_path;
  meta["reduced_forms_source"] =
      o.reduced_forms_path.empty() ? "built-in" : o.reduced_forms_path;
  meta["ruleset_hash"] =
      "fnv1a64:" + fnv1a64_hex(rs.rules_text + '\0' + rs.reduced_text);
  meta["normalization"] = normalization_config_to_json(cfg);
  meta["costs"] = nlohmann::ordered_json{
      {"sub", costs.sub_cost}, {"ins", costs.ins_cost}, {"del", costs.del_cost}};
  meta["formats"] = formats;
  emit(o, "run_meta.json", meta.dump() + "\n");
  return kOk;
}

int cmd_synth(const std::string& plan_path, const std::string& base_path,
              std::uint64_t seed, const CommonOpts& o) {
  if (o.out_dir.empty()) throw UsageError("synth writes files and needs --out DIR");
  auto cfg = load_norm_config(o);
  RuleSetup rs = load_rules(o);
  InjectionPlan plan = parse_injection_plan(read_file(plan_path));
  fs::path bp(base_path);
  Transcript t = load_transcript(bp, infer_format(bp), bp.stem().string(), base_path);
  std::vector<Token> base = tokenize_and_normalize(t, cfg);
  InjectionResult result = inject_differences(base, plan, seed, rs.rules, cfg);

  auto joined = [](const std::vector<Token>& toks) {
    std::string out;
    for (const auto& tok : toks) {
      if (!out.empty()) out += ' ';
      out += tok.norm;
    }
    out += '\n';
    return out;
  };
  emit(o, "original.txt", joined(base));
  emit(o, "mutated.txt", joined(result.tokens));
  emit(o, "truth.json", injection_truth_to_json(result, seed).dump() + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transcript difference analysis: word alignment, error rates "
               "and category attribution"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string ref_path, hyp_path, manifest_path, plan_path, base_path;
  std::uint64_t seed = 0;

  CLI::App* c_align = app.add_subcommand("align", "align two transcript files");
  c_align->add_option("ref", ref_path, "reference transcript")->required();
  c_align->add_option("hyp", hyp_path, "hypothesis transcript")->required();
  add_common_flags(c_align, opts);

  CLI::App* c_wer = app.add_subcommand("wer", "word error rate for one pair");
  c_wer->add_option("ref", ref_path, "reference transcript")->required();
  c_wer->add_option("hyp", hyp_path, "hypothesis transcript")->required();
  add_common_flags(c_wer, opts);

  CLI::App* c_cat =
      app.add_subcommand("categorize", "attribute differences for one pair");
  c_cat->add_option("ref", ref_path, "reference transcript")->required();
  c_cat->add_option("hyp", hyp_path, "hypothesis transcript")->required();
  add_common_flags(c_cat, opts);

  CLI::App* c_matrix =
      app.add_subcommand("matrix", "pairwise matrix over a corpus manifest");
  c_matrix->add_option("manifest", manifest_path, "corpus manifest JSON")
      ->required();
  add_common_flags(c_matrix, opts);

  CLI::App* c_synth =
      app.add_subcommand("synth", "inject known differences into a base text");
  c_synth->add_option("plan", plan_path, "injection plan JSON")->required();
  c_synth->add_option("base", base_path, "base transcript")->required();
  c_synth->add_option("--seed", seed, "rng seed for site selection");
  add_common_flags(c_synth, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_align->parsed()) return cmd_align(ref_path, hyp_path, opts);
    if (c_wer->parsed()) return cmd_wer(ref_path, hyp_path, opts);
    if (c_cat->parsed()) return cmd_categorize(ref_path, hyp_path, opts);
    if (c_matrix->parsed()) return cmd_matrix(manifest_path, opts);
    if (c_synth->parsed()) return cmd_synth(plan_path, base_path, seed, opts);
    return kUsage;
  } catch (const OutputConflict& c) {
    std::cerr << "error: output file '" << c.path.string()
              << "' exists; pass --overwrite to replace it\n";
    return kConflict;
  } catch (const NoSharedFiles& n) {
    std::cerr << "error: " << n.message << "\n";
    return kNoShared;
  } catch (const RulesetError& e) {
    std::cerr << "ruleset error at line " << e.line();
    if (e.column() > 0) std::cerr << ", column " << e.column();
    std::cerr << ": " << e.what() << "\n";
    return kRuleset;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const EmptyReferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEmptyRef;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
