#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "transdiff/align.hpp"
#include "transdiff/attribution.hpp"
#include "transdiff/rules.hpp"
#include "transdiff/token.hpp"

namespace transdiff {
namespace {

std::vector<Token> toks(const std::string& text,
                        const NormalizationConfig& cfg = NormalizationConfig{}) {
  return tokenize_text(text, cfg);
}

std::vector<std::string> norms(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.norm);
  return out;
}

TEST(ExtractRegions, MiddleRegionWithContext) {
  auto ref = toks("a b x y c");
  auto hyp = toks("a b z c");
  auto a = align(ref, hyp);
  auto regions = extract_regions(a, ref, hyp);
  ASSERT_EQ(regions.size(), 1u);
  const auto& r = regions[0];
  EXPECT_EQ(r.entry_begin, 2u);
  EXPECT_EQ(r.entry_end, 4u);
  EXPECT_EQ(norms(r.ref_tokens), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(norms(r.hyp_tokens), (std::vector<std::string>{"z"}));
  EXPECT_EQ(norms(r.left_ref_context), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(norms(r.left_hyp_context), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(norms(r.right_ref_context), (std::vector<std::string>{"c"}));
  EXPECT_EQ(norms(r.right_hyp_context), (std::vector<std::string>{"c"}));
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].op, AlignOp::Sub);
  EXPECT_EQ(r.entries[1].op, AlignOp::Del);
}

TEST(ExtractRegions, NoErrorsNoRegions) {
  auto ref = toks("a b c");
  auto a = align(ref, ref);
  EXPECT_TRUE(extract_regions(a, ref, ref).empty());
}

TEST(ExtractRegions, EdgeRegionHasOneSidedContext) {
  auto ref = toks("x a b");
  auto hyp = toks("y a b");
  auto a = align(ref, hyp);
  auto regions = extract_regions(a, ref, hyp);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_TRUE(regions[0].left_ref_context.empty());
  EXPECT_EQ(norms(regions[0].right_ref_context), (std::vector<std::string>{"a", "b"}));
}

TEST(ExtractRegions, InsertionOnlyRegionHasEmptyRefSide) {
  auto ref = toks("a b");
  auto hyp = toks("a x b");
  auto a = align(ref, hyp);
  auto regions = extract_regions(a, ref, hyp);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_TRUE(regions[0].ref_tokens.empty());
  EXPECT_EQ(norms(regions[0].hyp_tokens), (std::vector<std::string>{"x"}));
  EXPECT_EQ(norms(regions[0].left_ref_context), (std::vector<std::string>{"a"}));
  EXPECT_EQ(norms(regions[0].right_ref_context), (std::vector<std::string>{"b"}));
}

TEST(ExtractRegions, TwoRegionsSplitByOneMatch) {
  auto ref = toks("a x b y c");
  auto hyp = toks("a q b r c");
  auto a = align(ref, hyp);
  auto regions = extract_regions(a, ref, hyp);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[0].entry_begin, 1u);
  EXPECT_EQ(regions[1].entry_begin, 3u);
}

class RuleMatchTest : public ::testing::Test {
 protected:
  std::vector<DiffRegion> regions_for(const std::string& ref_text,
                                      const std::string& hyp_text) {
    ref_ = toks(ref_text);
    hyp_ = toks(hyp_text);
    align_ = align(ref_, hyp_);
    return extract_regions(align_, ref_, hyp_);
  }
  CategoryRule rule(const std::string& line) { return parse_ruleset(line).at(0); }

  std::vector<Token> ref_, hyp_;
  Alignment align_;
};

TEST_F(RuleMatchTest, ContractionCoversWholeRegion) {
  auto regions = regions_for("oh she will go", "oh she'll go");
  ASSERT_EQ(regions.size(), 1u);
  auto spans = match_rule(rule("RED contraction.will SYM: $x will => $x+'ll"), regions[0]);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].entry_begin, 1u);
  EXPECT_EQ(spans[0].entry_end, 3u);
}

TEST_F(RuleMatchTest, StemBindingMustAgreeAcrossSides) {
  auto regions = regions_for("she will", "he'll");
  ASSERT_EQ(regions.size(), 1u);
  auto spans = match_rule(rule("RED contraction.will SYM: $x will => $x+'ll"), regions[0]);
  EXPECT_TRUE(spans.empty());
}

TEST_F(RuleMatchTest, EmptySideMatchesPureDeletion) {
  auto regions = regions_for("he is tall", "he tall");
  ASSERT_EQ(regions.size(), 1u);
  auto spans = match_rule(rule("MS copula.absence SYM: {is|are|am|'s|'re|'m} => _"),
                          regions[0]);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0].entry_begin, 1u);
  EXPECT_EQ(spans[0].entry_end, 2u);
}

TEST_F(RuleMatchTest, SymmetricRuleMatchesMirrored) {
  auto regions = regions_for("he tall", "he is tall");
  ASSERT_EQ(regions.size(), 1u);
  auto spans = match_rule(rule("MS copula.absence SYM: {is|are|am|'s|'re|'m} => _"),
                          regions[0]);
  ASSERT_EQ(spans.size(), 1u);
}

TEST_F(RuleMatchTest, NonSymmetricRuleIsOneWay) {
  auto fwd = regions_for("aye sir", "yes sir");
  auto spans = match_rule(rule("VERB-EXTRA custom.aye: aye => yes"), fwd[0]);
  EXPECT_EQ(spans.size(), 1u);

  auto rev = regions_for("yes sir", "aye sir");
  spans = match_rule(rule("VERB-EXTRA custom.aye: aye => yes"), rev[0]);
  EXPECT_TRUE(spans.empty());
}

TEST_F(RuleMatchTest, MinStemBlocksShortStems) {
  auto r = rule("MS verbal-s.absence SYM MINSTEM=3: $x => $x+s");
  auto regions = regions_for("a cat", "as cat");
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_TRUE(match_rule(r, regions[0]).empty());

  regions = regions_for("he say that", "he says that");
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(match_rule(r, regions[0]).size(), 1u);
}

TEST_F(RuleMatchTest, AlternationBindsEitherWord) {
  auto r = rule("RED contraction.is-has SYM: $x {is|has} => $x+'s");
  auto regions = regions_for("she is here", "she's here");
  EXPECT_EQ(match_rule(r, regions[0]).size(), 1u);
  regions = regions_for("she has gone", "she's gone");
  EXPECT_EQ(match_rule(r, regions[0]).size(), 1u);
  regions = regions_for("she was here", "she's here");
  EXPECT_TRUE(match_rule(r, regions[0]).empty());
}

TEST_F(RuleMatchTest, RepeatedPatternYieldsMultipleSpans) {
  auto r = rule("MS copula.absence SYM: {is|are|am|'s|'re|'m} => _");
  auto regions = regions_for("is is", "");
  ASSERT_EQ(regions.size(), 1u);
  auto spans = match_rule(r, regions[0]);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].entry_begin, 0u);
  EXPECT_EQ(spans[1].entry_begin, 1u);
}

class BuiltinTest : public RuleMatchTest {};

TEST_F(BuiltinTest, FillerSubstitution) {
  auto regions = regions_for("uh you know", "um you know");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "filler_substitution");
}

TEST_F(BuiltinTest, FillerInsertionAndDeletion) {
  auto regions = regions_for("you know", "you um know");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "filler_deletion");

  regions = regions_for("you uh know", "you know");
  found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "filler_deletion");
}

TEST_F(BuiltinTest, RestartIndicationBothDirections) {
  auto regions = regions_for("well you- stop", "well you stop");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "restart_indication");

  regions = regions_for("well you stop", "well you- stop");
  found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "restart_indication");
}

TEST_F(BuiltinTest, RestartFragmentDeletion) {
  auto regions = regions_for("so you- you know", "so you know");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  ASSERT_GE(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "restart_deletion");
}

TEST_F(BuiltinTest, RepetitionAgainstMatchedNeighbor) {
  auto regions = regions_for("you you know", "you know");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "repetition_deletion");

  regions = regions_for("you know", "you you know");
  found = builtin_verbatim_tests(regions[0]);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].subtype, "repetition_deletion");
}

TEST_F(BuiltinTest, RepetitionWithinRegion) {
  // both copies inserted, so the twin is another region token rather than
  // a matched context token
  auto regions = regions_for("so bye", "so no no bye");
  ASSERT_EQ(regions.size(), 1u);
  auto found = builtin_verbatim_tests(regions[0]);
  EXPECT_EQ(found.size(), 2u);
  for (const auto& f : found) EXPECT_EQ(f.subtype, "repetition_deletion");
}

class AttributeTest : public ::testing::Test {
 protected:
  Attribution run(const std::string& ref_text, const std::string& hyp_text,
                  const std::vector<CategoryRule>& rules = default_rules(),
                  const NormalizationConfig& cfg = NormalizationConfig{}) {
    ref_ = tokenize_text(ref_text, cfg);
    hyp_ = tokenize_text(hyp_text, cfg);
    align_ = align(ref_, hyp_);
    return attribute(align_, ref_, hyp_, rules);
  }
  std::vector<Token> ref_, hyp_;
  Alignment align_;
};

TEST_F(AttributeTest, ContractionClaimsBothEntries) {
  auto attr = run("she will", "she'll");
  ASSERT_EQ(attr.entries.size(), 2u);
  for (const auto& e : attr.entries) {
    EXPECT_EQ(e.category, Category::Reduction);
    EXPECT_EQ(e.rule_id, "contraction.will");
  }
}

TEST_F(AttributeTest, ReducedFormClaimsBothEntries) {
  auto attr = run("going to", "gonna");
  ASSERT_EQ(attr.entries.size(), 2u);
  for (const auto& e : attr.entries) {
    EXPECT_EQ(e.category, Category::Reduction);
    EXPECT_EQ(e.rule_id, "reduced.gonna");
  }
}

TEST_F(AttributeTest, FillerSwapIsVerbatim) {
  auto attr = run("uh", "um");
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].category, Category::Verbatim);
  EXPECT_EQ(attr.entries[0].subtype, "filler_substitution");
}

TEST_F(AttributeTest, RestartIndicationIsVerbatim) {
  auto attr = run("you-", "you");
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].category, Category::Verbatim);
  EXPECT_EQ(attr.entries[0].subtype, "restart_indication");
}

TEST_F(AttributeTest, CopulaAbsenceIsMorphosyntactic) {
  auto attr = run("he is tall", "he tall");
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].category, Category::Morphosyntactic);
  EXPECT_EQ(attr.entries[0].rule_id, "copula.absence");
}

TEST_F(AttributeTest, ReductionOutranksVerbatimOnSameEntries) {
  // mark both words as fillers so the verbatim filler test also fires;
  // the reduction rule must still win the claim
  NormalizationConfig cfg;
  cfg.filler_lexicon.insert("gonna");
  cfg.filler_lexicon.insert("going");
  auto attr = run("going to", "gonna", default_rules(), cfg);
  ASSERT_EQ(attr.entries.size(), 2u);
  for (const auto& e : attr.entries) EXPECT_EQ(e.category, Category::Reduction);
}

TEST_F(AttributeTest, MorphosyntacticOutranksReduction) {
  auto rules = parse_ruleset(
      "RED fake-red.them SYM: them => those\n"
      "MS them-those.swap SYM: them => those\n");
  auto attr = run("see them there", "see those there", rules);
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].category, Category::Morphosyntactic);
  EXPECT_EQ(attr.entries[0].rule_id, "them-those.swap");
}

TEST_F(AttributeTest, LongerSpanBeatsShorterWithinCategory) {
  auto rules = parse_ruleset(
      "VERB-EXTRA short.x: x => y\n"
      "VERB-EXTRA long.xq: x q => y\n");
  auto attr = run("a x q b", "a y b", rules);
  ASSERT_EQ(attr.entries.size(), 2u);
  for (const auto& e : attr.entries) EXPECT_EQ(e.rule_id, "long.xq");
}

TEST_F(AttributeTest, FileOrderBreaksExactTies) {
  auto rules = parse_ruleset(
      "VERB-EXTRA first.x SYM: x => y\n"
      "VERB-EXTRA second.x SYM: x => y\n");
  auto attr = run("a x b", "a y b", rules);
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].rule_id, "first.x");
}

TEST_F(AttributeTest, BuiltinOrderPrefersFillerOverRepetition) {
  // an inserted filler next to a matching filler satisfies both builtin
  // tests; the filler test comes first in the battery
  auto attr = run("so um yes", "so um um yes");
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].subtype, "filler_deletion");
}

TEST_F(AttributeTest, UnmatchedErrorsAreUnaccounted) {
  auto attr = run("the cat sat", "the dog sat");
  ASSERT_EQ(attr.entries.size(), 1u);
  EXPECT_EQ(attr.entries[0].category, Category::Unaccounted);
  EXPECT_TRUE(attr.entries[0].rule_id.empty());
}

TEST_F(AttributeTest, NoErrorsNoEntries) {
  auto attr = run("same text here", "same text here");
  EXPECT_TRUE(attr.entries.empty());
}

TEST_F(AttributeTest, ClaimedSpansNeverOverlap) {
  // she's could read as possessive-s or as the is/has contraction; either
  // way each entry is claimed exactly once
  auto attr = run("she is here and she will go", "she's here and she'll go");
  std::set<size_t> seen;
  for (const auto& e : attr.entries) EXPECT_TRUE(seen.insert(e.entry_index).second);
}

TEST_F(AttributeTest, PartitionPropertyOnRandomPairs) {
  std::mt19937_64 rng(23);
  std::vector<std::string> vocab = {"uh",   "um",  "you-", "you",  "know", "he",
                                    "is",   "are", "cat",  "cats", "them", "those",
                                    "gonna", "going", "to", "she'll", "she", "will",
                                    "don't", "doesn't", "was", "were", "ain't", "tall"};
  auto rules = default_rules();
  NormalizationConfig cfg;
  for (int trial = 0; trial < 150; ++trial) {
    std::string a, b;
    size_t la = rng() % 12, lb = rng() % 12;
    for (size_t i = 0; i < la; ++i) a += vocab[rng() % vocab.size()] + " ";
    for (size_t i = 0; i < lb; ++i) b += vocab[rng() % vocab.size()] + " ";
    auto ref = tokenize_text(a, cfg);
    auto hyp = tokenize_text(b, cfg);
    auto al = align(ref, hyp);
    auto attr = attribute(al, ref, hyp, rules);

    size_t non_match = 0;
    for (const auto& e : al.entries)
      if (e.op != AlignOp::Match) ++non_match;
    EXPECT_EQ(attr.entries.size(), non_match) << "trial " << trial;

    std::set<size_t> seen;
    for (const auto& e : attr.entries) {
      EXPECT_TRUE(seen.insert(e.entry_index).second);
      EXPECT_NE(al.entries[e.entry_index].op, AlignOp::Match);
    }
  }
}

TEST_F(AttributeTest, DeterministicAcrossRuns) {
  auto a1 = run("he is gonna see them uh now", "he gonna see those um now");
  auto a2 = run("he is gonna see them uh now", "he gonna see those um now");
  ASSERT_EQ(a1.entries.size(), a2.entries.size());
  for (size_t i = 0; i < a1.entries.size(); ++i) {
    EXPECT_EQ(a1.entries[i].rule_id, a2.entries[i].rule_id);
    EXPECT_EQ(a1.entries[i].category, a2.entries[i].category);
  }
}

TEST_F(AttributeTest, JsonShape) {
  auto attr = run("she will stay", "she'll go");
  auto j = attribution_to_json(attr);
  ASSERT_EQ(j.size(), attr.entries.size());
  bool saw_unaccounted = false;
  for (const auto& e : j) {
    ASSERT_TRUE(e.contains("entry_index"));
    ASSERT_TRUE(e.contains("category"));
    ASSERT_TRUE(e.contains("rule_id"));
    ASSERT_TRUE(e.contains("subtype"));
    if (e["category"] == "UNACCOUNTED") {
      saw_unaccounted = true;
      EXPECT_TRUE(e["rule_id"].is_null());
      EXPECT_TRUE(e["subtype"].is_null());
    }
  }
  EXPECT_TRUE(saw_unaccounted);
}

}  // namespace
}  // namespace transdiff
