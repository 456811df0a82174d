#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "svx/adversary.hpp"
#include "svx/binary_sv.hpp"
#include "svx/extractor.hpp"
#include "svx/instances.hpp"
#include "svx/sampling.hpp"

using namespace svx;

namespace {

ExtractorTable table_from_mask(int alphabet, int n, std::uint64_t mask) {
  std::uint64_t leaves = upow(alphabet, n);
  ExtractorTable t;
  t.alphabet_size = alphabet;
  t.depth = n;
  t.labels.resize(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i)
    t.labels[i] = (mask >> i) & 1 ? 0 : 1;
  return t;
}

}  // namespace

TEST_CASE("alpha_beta on the binary singleton table") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  auto ab = alpha_beta<Rational>(spec, table_from_mask(2, 1, 0b01));
  CHECK(ab.alpha == Rational(1, 3));
  CHECK(ab.beta == Rational(2, 3));
}

TEST_CASE("alpha_beta on constant extractors") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  auto empty = alpha_beta<Rational>(spec, table_from_mask(2, 2, 0));
  CHECK(empty.alpha == 0);
  CHECK(empty.beta == 0);
  auto full = alpha_beta<Rational>(spec, table_from_mask(2, 2, 0b1111));
  CHECK(full.alpha == 1);
  CHECK(full.beta == 1);
}

TEST_CASE("DP equals the all-strategies brute force exactly") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    auto t = table_from_mask(2, 2, mask);
    auto dp = alpha_beta<Rational>(spec, t);
    auto [lo, hi] = oracle::alpha_beta_bruteforce<Rational>(spec, t);
    CHECK(dp.alpha == lo);
    CHECK(dp.beta == hi);
  }
}

TEST_CASE("DP equals brute force on a 3-symbol spec") {
  SourceSpec spec;
  spec.alphabet_size = 3;
  spec.dice = {Distribution{{0.5, 0.25, 0.25}},
               Distribution{{0.25, 0.5, 0.25}}};
  SplitMix64 rng(17);
  for (int t = 0; t < 10; ++t) {
    std::uint64_t mask = rng.next() % 512;
    auto table = table_from_mask(3, 2, mask);
    auto dp = alpha_beta<double>(spec, table);
    auto [lo, hi] = oracle::alpha_beta_bruteforce<double>(spec, table);
    CHECK(dp.alpha == doctest::Approx(lo).epsilon(1e-12));
    CHECK(dp.beta == doctest::Approx(hi).epsilon(1e-12));
  }
}

TEST_CASE("left-prefix beta equals the base-delta expansion") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  auto ab = alpha_beta<Rational>(spec, left_prefix_table(3, 3));
  CHECK(ab.beta == base_delta<Rational>(std::vector<int>{0, 1, 1},
                                        Rational(1, 3)));
  CHECK(ab.beta == Rational(16, 27));
}

TEST_CASE("parallel DP equals serial DP") {
  SplitMix64 rng(23);
  SourceSpec spec = random_spec(rng, 3, 4);
  auto t = table_from_mask(3, 5, 0x5a5a5a5a5a5aULL);
  auto a = alpha_beta<double>(spec, t);
  auto b = alpha_beta_serial<double>(spec, t);
  CHECK(a.alpha == b.alpha);
  CHECK(a.beta == b.beta);
}

TEST_CASE("optimal strategies achieve the DP values") {
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);

  SUBCASE("singleton: MAX picks the die loaded toward 0") {
    auto tree = optimal_strategy(spec, table_from_mask(2, 1, 0b01),
                                 Objective::Max);
    CHECK(tree.levels[0][0] == 1);
  }

  SUBCASE("constant table: ties break to die 0") {
    auto tree = optimal_strategy(spec, table_from_mask(2, 2, 0),
                                 Objective::Max);
    for (const auto& lvl : tree.levels)
      for (int c : lvl) CHECK(c == 0);
  }

  SUBCASE("simulated play of the MAX strategy reproduces beta") {
    auto t = table_from_mask(2, 3, 0b00101101);
    auto ab = alpha_beta<double>(spec, t);
    auto tree = optimal_strategy(spec, t, Objective::Max);
    const long trials = 100000;
    long hits = 0;
    TreeStrategy strat(tree);
    for (long r = 0; r < trials; ++r) {
      auto seq = sample_sequence(spec, *strat.clone(), 3, 900 + r);
      std::uint64_t rank = rank_string(seq, 2);
      hits += t.labels[rank] == 0;
    }
    double freq = static_cast<double>(hits) / trials;
    double sigma = std::sqrt(ab.beta * (1 - ab.beta) / trials);
    CHECK(std::fabs(freq - ab.beta) <= 4 * sigma + 1e-9);
  }

  SUBCASE("simulated play of the MIN strategy reproduces alpha") {
    auto t = table_from_mask(2, 3, 0b01101001);
    auto ab = alpha_beta<double>(spec, t);
    auto tree = optimal_strategy(spec, t, Objective::Min);
    const long trials = 100000;
    long hits = 0;
    TreeStrategy strat(tree);
    for (long r = 0; r < trials; ++r) {
      auto seq = sample_sequence(spec, *strat.clone(), 3, 1700 + r);
      hits += t.labels[rank_string(seq, 2)] == 0;
    }
    double freq = static_cast<double>(hits) / trials;
    double sigma = std::sqrt(std::max(ab.alpha * (1 - ab.alpha), 0.01) / trials);
    CHECK(std::fabs(freq - ab.alpha) <= 4 * sigma + 1e-9);
  }
}

TEST_CASE("phi sets") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));

  SUBCASE("n = 0 is the two constants") {
    auto phi = phi_set<Rational>(spec, 0);
    REQUIRE(phi.points.size() == 2);
    CHECK(phi.points[0] == std::pair<Rational, Rational>(0, 0));
    CHECK(phi.points[1] == std::pair<Rational, Rational>(1, 1));
  }

  SUBCASE("n = 1 has three distinct points") {
    auto phi = phi_set<Rational>(spec, 1);
    REQUIRE(phi.points.size() == 3);
    CHECK(phi.points[1] ==
          std::pair<Rational, Rational>(Rational(1, 3), Rational(2, 3)));
  }

  SUBCASE("parallel equals serial") {
    auto a = phi_set<double>(spec, 3);
    auto b = phi_set_serial<double>(spec, 3);
    CHECK(a.points == b.points);
  }

  SUBCASE("budget errors") {
    CHECK_THROWS_AS(phi_set<double>(spec, 5), BudgetError);
    CHECK_THROWS_AS(
        alpha_beta<double>(spec, left_prefix_table(3, 1), 4), BudgetError);
  }
}

TEST_CASE("complement identity and monotonicity over all n<=3 tables") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  for (int n = 1; n <= 3; ++n) {
    std::uint64_t leaves = upow(2, n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << leaves); ++mask) {
      auto ab = alpha_beta_serial<Rational>(spec, table_from_mask(2, n, mask));
      auto abc = alpha_beta_serial<Rational>(
          spec, table_from_mask(2, n, ~mask & ((std::uint64_t{1} << leaves) - 1)));
      CHECK(ab.alpha + abc.beta == 1);
      // adding any string never decreases alpha or beta
      for (std::uint64_t i = 0; i < leaves; ++i) {
        if ((mask >> i) & 1) continue;
        auto bigger = alpha_beta_serial<Rational>(
            spec, table_from_mask(2, n, mask | (std::uint64_t{1} << i)));
        CHECK(bigger.alpha >= ab.alpha);
        CHECK(bigger.beta >= ab.beta);
      }
      if (n == 3 && mask > 40) break;  // the exhaustive pass runs in verify
    }
  }
}

TEST_CASE("g certificate for the binary source is exact") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  auto cert = build_g_certificate(spec);
  REQUIRE(cert.has_value());
  CHECK_FALSE(cert->numerical);
  REQUIRE(cert->delta_exact.has_value());
  CHECK(*cert->delta_exact == Rational(2, 3));
  CHECK(*cert->epsilon_exact == Rational(1, 12));
  CHECK(cert->g(0.5) == doctest::Approx(0.5 + 1.0 / 48).epsilon(1e-12));
  CHECK(cert->g(0.0) == 0.0);
  CHECK(cert->g(1.0) == 1.0);
  // monotone on [0,1] since eps < 1
  for (int i = 0; i < 100; ++i) {
    CHECK(cert->g((i + 1) / 100.0) > cert->g(i / 100.0));
  }
}

TEST_CASE("no g certificate when a psi witness exists") {
  SourceSpec spec;
  spec.alphabet_size = 3;
  spec.dice = {Distribution{{0.5, 0.25, 0.25}},
               Distribution{{0.25, 0.5, 0.25}}};
  CHECK_FALSE(build_g_certificate(spec).has_value());
}

TEST_CASE("g dominates the phi cloud; synthetic center point fails") {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  auto cert = build_g_certificate(spec);
  REQUIRE(cert.has_value());
  for (int n = 0; n <= 3; ++n) {
    auto phi = phi_set<double>(binary_sv_spec(1.0 / 3.0), n);
    CHECK(check_g_dominates(*cert, phi));
  }
  PhiSet bad;
  bad.n = 0;
  bad.points = {{0.5, 0.5}};
  CHECK_FALSE(check_g_dominates(*cert, bad));
  PhiSet origin;
  origin.points = {{0.0, 0.0}};
  CHECK(check_g_dominates(*cert, origin));
}

TEST_CASE("the cloud stays a positive distance from (1/2, 1/2)") {
  // g continuity turns the certificate into a quantitative margin
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);
  auto cert = build_g_certificate(binary_sv_spec(Rational(1, 3)));
  REQUIRE(cert.has_value());
  double margin = 1e9;
  for (int n = 0; n <= 3; ++n) {
    auto phi = phi_set<double>(spec, n);
    for (auto& [a, b] : phi.points) {
      margin = std::min(margin, std::max(std::fabs(a - 0.5),
                                         std::fabs(b - 0.5)));
    }
  }
  CHECK(margin > 0.0);
  // from beta >= g(alpha): a point at Chebyshev distance r satisfies
  // 2r >= eps(1/4 - r^2), so r < eps/16 is impossible
  CHECK(margin >= cert->epsilon / 16.0);
}

TEST_CASE("tilting adversary at depth 1") {
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);
  Distribution q{{0.5, 0.5}};

  SUBCASE("eps = 0.1 tilts the singleton to 0.55") {
    auto r = tilt_adversary(spec, table_from_mask(2, 1, 0b01), q, 0.1);
    CHECK_FALSE(r.complemented);
    CHECK(r.q_mass_i0 == doctest::Approx(0.5));
    CHECK(r.achieved == doctest::Approx(0.55));
    REQUIRE(r.conditionals[0].size() == 1);
    CHECK(r.conditionals[0][0][0] == doctest::Approx(0.55));
  }

  SUBCASE("eps = 0.5 exits the hull") {
    CHECK_THROWS_AS(
        tilt_adversary(spec, table_from_mask(2, 1, 0b01), q, 0.5), HullError);
  }

  SUBCASE("q outside the hull interior is rejected") {
    Distribution bad{{0.9, 0.1}};
    CHECK_THROWS_AS(
        tilt_adversary(spec, table_from_mask(2, 1, 0b01), bad, 0.01),
        HullError);
  }
}

TEST_CASE("tilting adversary at depth 3 is consistent with the DP") {
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);
  Distribution q{{0.5, 0.5}};
  // a 4-leaf subset: q^3-mass exactly 1/2
  std::uint64_t mask = 0b01011010;
  auto table = table_from_mask(2, 3, mask);
  auto r = tilt_adversary(spec, table, q, 0.05);
  CHECK(r.achieved == doctest::Approx(0.525));
  auto ab = alpha_beta<double>(spec, table);
  CHECK(ab.beta >= r.achieved - 1e-12);

  // played as a strategy, the tilt reaches its promised probability
  TableMixtureStrategy strat(2, r.hull_weights);
  const long trials = 200000;
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    auto seq = sample_sequence(spec, *strat.clone(), 3, 4200 + t);
    hits += table.labels[rank_string(seq, 2)] == 0;
  }
  double freq = static_cast<double>(hits) / trials;
  CHECK(freq == doctest::Approx(r.achieved).epsilon(0.02));
}

TEST_CASE("tilt achieved probability never exceeds the DP beta") {
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);
  Distribution q{{0.5, 0.5}};
  SplitMix64 rng(77);
  for (int t = 0; t < 20; ++t) {
    std::uint64_t mask = rng.next() & 0xff;
    auto table = table_from_mask(2, 3, mask);
    try {
      auto r = tilt_adversary(spec, table, q, 0.02);
      auto ab = alpha_beta<double>(spec, table);
      double beta_working = r.complemented ? 1.0 - ab.alpha : ab.beta;
      CHECK(r.achieved <= beta_working + 1e-12);
      CHECK(r.achieved >= (1.0 + 0.02) * 0.5 - 1e-12);
    } catch (const HullError&) {
      // legitimately infeasible for this eps; nothing to check
    }
  }
}
