#include "doctest.h"

#include <set>

#include "svx/model.hpp"
#include "svx/sampling.hpp"

using namespace svx;

TEST_CASE("validate_spec accepts a normalized non-degenerate pair of dice") {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{1.0 / 3, 2.0 / 3}}, Distribution{{2.0 / 3, 1.0 / 3}}};
  auto rep = validate_spec(s);
  CHECK(rep.ok);
  CHECK_FALSE(rep.degenerate);
}

TEST_CASE("validate_spec flags a die that sums to 1.1") {
  SourceSpec s;
  s.alphabet_size = 3;
  s.dice = {Distribution{{0.5, 0.5, 0.1}}};
  auto rep = validate_spec(s);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].find("sum") != std::string::npos);
}

TEST_CASE("validate_spec sets the degeneracy flag for zero entries") {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{1.0, 0.0}}, Distribution{{0.0, 1.0}}};
  auto rep = validate_spec(s);
  CHECK(rep.ok);
  CHECK(rep.degenerate);
}

TEST_CASE("enumerate_strings lexicographic order") {
  auto s22 = enumerate_strings(2, 2);
  REQUIRE(s22.size() == 4);
  CHECK(s22[0] == std::vector<int>{0, 0});
  CHECK(s22[1] == std::vector<int>{0, 1});
  CHECK(s22[2] == std::vector<int>{1, 0});
  CHECK(s22[3] == std::vector<int>{1, 1});

  auto s31 = enumerate_strings(3, 1);
  REQUIRE(s31.size() == 3);
  CHECK(s31[2] == std::vector<int>{2});

  auto s20 = enumerate_strings(2, 0);
  REQUIRE(s20.size() == 1);
  CHECK(s20[0].empty());
}

TEST_CASE("enumerate_strings enforces the budget") {
  CHECK_THROWS_AS(enumerate_strings(2, 40, 1u << 20), BudgetError);
}

TEST_CASE("rank and unrank are inverse") {
  for (std::uint64_t r = 0; r < 27; ++r) {
    auto s = unrank_string(r, 3, 3);
    CHECK(rank_string(s, 3) == r);
  }
}

TEST_CASE("extractor table child slicing and rejoining round-trips") {
  ExtractorTable t = make_table(3, 2, {0, 1, 0, 1, 1, 0, 0, 0, 1});
  std::vector<ExtractorTable> children;
  for (int c = 0; c < 3; ++c) children.push_back(t.child(c));
  CHECK(children[0].labels == std::vector<std::uint8_t>{0, 1, 0});
  CHECK(children[1].labels == std::vector<std::uint8_t>{1, 1, 0});
  ExtractorTable back = join_children(children);
  CHECK(back.labels == t.labels);
  CHECK(back.depth == t.depth);
}

TEST_CASE("sample_sequence with a deterministic die is constant") {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{1.0, 0.0}}};
  ConstantStrategy strat(0);
  auto seq = sample_sequence(s, strat, 4, 7);
  CHECK(seq == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("sample_sequence n=0 gives an empty sequence") {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{0.5, 0.5}}};
  ConstantStrategy strat(0);
  CHECK(sample_sequence(s, strat, 0, 1).empty());
}

TEST_CASE("sample_sequence is reproducible from the seed") {
  SourceSpec s;
  s.alphabet_size = 3;
  s.dice = {Distribution{{0.2, 0.3, 0.5}}, Distribution{{0.6, 0.3, 0.1}}};
  UniformRandomStrategy strat(2);
  auto a = sample_sequence(s, strat, 1000, 42);
  auto b = sample_sequence(s, strat, 1000, 42);
  CHECK(a == b);
  auto c = sample_sequence(s, strat, 1000, 43);
  CHECK(a != c);
}

TEST_CASE("constant-strategy frequencies converge to the die") {
  // law of large numbers check at n = 1e5, tolerance 0.01
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{1.0 / 3, 2.0 / 3}}, Distribution{{2.0 / 3, 1.0 / 3}}};
  ConstantStrategy strat(0);
  auto seq = sample_sequence(s, strat, 100000, 11);
  long zeros = 0;
  for (int c : seq) zeros += c == 0;
  double freq = static_cast<double>(zeros) / seq.size();
  CHECK(freq == doctest::Approx(1.0 / 3).epsilon(0.03));
  CHECK(std::fabs(freq - 1.0 / 3) < 0.01);
}

TEST_CASE("tree strategy depth shorter than n is rejected") {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{0.5, 0.5}}};
  StrategyTree tree = make_constant_tree(2, 3, 0);
  CHECK_THROWS_AS(sample_sequence(s, tree, 4, 0), SpecError);
  CHECK(sample_sequence(s, tree, 3, 0).size() == 3);
}
