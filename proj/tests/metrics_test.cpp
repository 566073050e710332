#include <gtest/gtest.h>

#include <vector>

#include "transdiff/align.hpp"
#include "transdiff/errors.hpp"
#include "transdiff/metrics.hpp"

namespace transdiff {
namespace {

std::vector<Token> make_tokens(const std::vector<std::string>& norms) {
  std::vector<Token> out;
  for (size_t i = 0; i < norms.size(); ++i) {
    Token t;
    t.surface = norms[i];
    t.norm = norms[i];
    t.index = static_cast<int>(i);
    out.push_back(t);
  }
  return out;
}

TEST(Metrics, CountsFromAlignment) {
  auto a = align(make_tokens({"she", "will"}), make_tokens({"she'll"}));
  auto c = count_errors(a);
  EXPECT_EQ(c.n_ref, 2);
  EXPECT_EQ(c.matches, 0);
  EXPECT_EQ(c.subs, 1);
  EXPECT_EQ(c.dels, 1);
  EXPECT_EQ(c.inss, 0);
}

TEST(Metrics, CountsIdentity) {
  auto a = align(make_tokens({"a", "b", "c"}), make_tokens({"a", "b", "c"}));
  auto c = count_errors(a);
  EXPECT_EQ(c.n_ref, 3);
  EXPECT_EQ(c.matches, 3);
  EXPECT_EQ(c.n_ref, c.matches + c.subs + c.dels);
  auto b = wer(c);
  EXPECT_DOUBLE_EQ(b.wer, 0.0);
}

TEST(Metrics, OneDeletionOfThree) {
  auto a = align(make_tokens({"the", "cat", "sat"}), make_tokens({"the", "cat"}));
  auto b = wer(count_errors(a));
  EXPECT_DOUBLE_EQ(b.wer, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.del_rate, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(b.sub_rate, 0.0);
  EXPECT_DOUBLE_EQ(b.ins_rate, 0.0);
}

TEST(Metrics, WerMayExceedOne) {
  auto a = align(make_tokens({"a"}), make_tokens({"x", "y", "z"}));
  auto b = wer(count_errors(a));
  EXPECT_GT(b.wer, 1.0);
}

TEST(Metrics, EmptyReferenceIsAnError) {
  ErrorCounts c;
  EXPECT_THROW(wer(c), EmptyReferenceError);
}

TEST(Metrics, AggregateIsMicroNotMacro) {
  ErrorCounts big;  // 10 errors over 100 reference tokens
  big.n_ref = 100;
  big.matches = 90;
  big.subs = 10;
  ErrorCounts tiny;  // 1 error over 1 reference token
  tiny.n_ref = 1;
  tiny.subs = 1;
  auto total = aggregate_counts({big, tiny});
  EXPECT_EQ(total.n_ref, 101);
  EXPECT_EQ(total.subs, 11);
  auto b = wer(total);
  // pooled counts, not the 0.55 a mean of per-file WERs would give
  EXPECT_NEAR(b.wer, 11.0 / 101.0, 1e-12);
}

TEST(Metrics, AggregateOrderInvariant) {
  ErrorCounts a, b, c;
  a.n_ref = 10; a.matches = 7; a.subs = 1; a.dels = 2; a.inss = 3;
  b.n_ref = 5; b.matches = 5; b.inss = 1;
  c.n_ref = 8; c.matches = 4; c.subs = 4;
  auto x = aggregate_counts({a, b, c});
  auto y = aggregate_counts({c, a, b});
  EXPECT_EQ(x.n_ref, y.n_ref);
  EXPECT_EQ(x.matches, y.matches);
  EXPECT_EQ(x.subs, y.subs);
  EXPECT_EQ(x.dels, y.dels);
  EXPECT_EQ(x.inss, y.inss);
}

TEST(Metrics, JsonFragmentShape) {
  auto a = align(make_tokens({"the", "cat", "sat"}), make_tokens({"the", "cat"}));
  auto c = count_errors(a);
  auto j = metrics_to_json(c, wer(c));
  EXPECT_EQ(j["n_ref"], 3);
  EXPECT_EQ(j["matches"], 2);
  EXPECT_EQ(j["subs"], 0);
  EXPECT_EQ(j["inss"], 0);
  EXPECT_EQ(j["dels"], 1);
  EXPECT_NEAR(j["wer"].get<double>(), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(j["del_rate"].get<double>(), 1.0 / 3.0, 1e-6);
}

}  // namespace
}  // namespace transdiff
