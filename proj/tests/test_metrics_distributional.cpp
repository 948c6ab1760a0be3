#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "synteval/baselines.hpp"
#include "synteval/metrics_distributional.hpp"
#include "test_util.hpp"

using namespace synteval;
using namespace synteval::test;

namespace {

Table two_cat_table(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                    std::size_t k = 2) {
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < k; ++c) labels.push_back("v" + std::to_string(c));
  std::vector<std::vector<Cell>> rows;
  for (auto [a, b] : pairs) rows.push_back({K(a), K(b)});
  return table_of(Codebook({cat_col("a", labels), cat_col("b", labels)}), rows);
}

Table two_num_table(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<std::vector<Cell>> rows;
  for (auto [a, b] : pairs) rows.push_back({C(a), C(b)});
  return table_of(Codebook({num_col("x"), num_col("y")}), rows);
}

// mixed table with MCAR missingness in two columns driven by a seed
Table missing_table(std::size_t n, std::uint64_t seed, double rate_a, double rate_b,
                    bool co_occur = false, bool anti_occur = false) {
  Codebook cb({num_col("m1", true), num_col("m2", true), num_col("z"),
               cat_col("g", {"p", "q"})});
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0, 1);
  std::vector<std::vector<Cell>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    bool miss_a = unif(rng) < rate_a;
    bool miss_b = co_occur ? miss_a : anti_occur ? !miss_a : unif(rng) < rate_b;
    std::vector<Cell> row;
    row.push_back(miss_a ? NA() : C(unif(rng)));
    row.push_back(miss_b ? NA() : C(unif(rng)));
    row.push_back(C(unif(rng)));
    row.push_back(K(unif(rng) < 0.5 ? 0 : 1));
    rows.push_back(std::move(row));
  }
  return table_of(cb, rows);
}

}  // namespace

TEST_CASE("tv_complement matches the stated examples") {
  Table identical = one_cat_table({0, 0, 1, 1});
  CHECK(tv_complement(identical, identical, 0).value == 1.0);

  Table left = one_cat_table({0, 0}, 3);
  Table right = one_cat_table({1, 2}, 3);
  CHECK(tv_complement(left, right, 0).value == 0.0);

  Table real = one_cat_table({0, 0, 0, 1});   // counts (3,1)
  Table synth = one_cat_table({0, 1, 1, 1});  // counts (1,3)
  CHECK(tv_complement(real, synth, 0).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tv_complement equals brute-force TV on all enumerable inputs") {
  // all multisets of size 1..4 over 3 categories, both sides
  std::vector<std::vector<std::size_t>> multisets;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::size_t> v(n, 0);
    while (true) {
      multisets.push_back(v);
      std::size_t i = n;
      while (i > 0 && v[i - 1] == 2) --i;
      if (i == 0) break;
      ++v[i - 1];
      for (std::size_t j = i; j < n; ++j) v[j] = v[i - 1];
    }
  }
  for (const auto& a : multisets) {
    for (const auto& b : multisets) {
      Table ta = one_cat_table(a, 3), tb = one_cat_table(b, 3);
      double got = tv_complement(ta, tb, 0).value;
      double want = 1.0 - oracle::tv_distance(a, b);
      CHECK(std::abs(got - want) <= 1e-12);
    }
  }
}

TEST_CASE("marginal metrics reject wrong column kinds and empty columns") {
  Table nums = one_num_table({1, 2});
  Table cats = one_cat_table({0, 1});
  CHECK_THROWS_AS(tv_complement(nums, nums, 0), DataError);
  CHECK_THROWS_AS(ks_complement(cats, cats, 0), DataError);
  Codebook cb({cat_col("a", {"x", "y"}, true)});
  Table all_missing = table_of(cb, {{NA()}, {NA()}});
  CHECK_THROWS_AS(tv_complement(all_missing, all_missing, 0), DataError);
}

TEST_CASE("tv_complement and ks_complement are symmetric") {
  Table a = one_cat_table({0, 1, 1, 2, 2}, 3);
  Table b = one_cat_table({0, 0, 2}, 3);
  CHECK(tv_complement(a, b, 0).value == tv_complement(b, a, 0).value);

  Table x = one_num_table({1, 2, 2.5, 7});
  Table y = one_num_table({0, 2, 3});
  CHECK(ks_complement(x, y, 0).value == ks_complement(y, x, 0).value);
}

TEST_CASE("ks_complement matches the stated examples and the oracle") {
  Table same = one_num_table({1, 2, 3});
  CHECK(ks_complement(same, same, 0).value == 1.0);

  CHECK(ks_complement(one_num_table({0, 0}), one_num_table({1, 1}), 0).value == 0.0);

  CHECK(ks_complement(one_num_table({1, 2, 3, 4}), one_num_table({3, 4, 5, 6}), 0)
            .value == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng = make_rng(3);
  std::uniform_int_distribution<int> coarse(0, 5);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 6; ++i) a.push_back(coarse(rng) / 5.0);
    for (int i = 0; i < 5; ++i) b.push_back(coarse(rng) / 5.0);
    double got = ks_complement(one_num_table(a), one_num_table(b), 0).value;
    CHECK(std::abs(got - (1.0 - oracle::ks_statistic(a, b))) <= 1e-12);
  }
}

TEST_CASE("stat similarities match the stated examples") {
  Table real = one_num_table({0, 2, 4});   // mean 2, range 4
  Table synth = one_num_table({3, 3, 3});  // mean 3
  CHECK(stat_similarity(StatKind::Mean, real, synth, 0).value ==
        doctest::Approx(0.75).epsilon(1e-12));
  for (StatKind kind : {StatKind::Mean, StatKind::Median, StatKind::Std,
                        StatKind::RangeCoverage, StatKind::BoundaryAdherence})
    CHECK(stat_similarity(kind, real, real, 0).value == 1.0);

  Table r3 = one_cat_table({0, 1, 2}, 3);
  Table s2 = one_cat_table({0, 2, 2}, 3);
  CHECK(stat_similarity(StatKind::CategoryCoverage, r3, s2, 0).value ==
        doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(stat_similarity(StatKind::CategoryCoverage, r3, r3, 0).value == 1.0);

  CHECK(stat_similarity(StatKind::BoundaryAdherence, real,
                        one_num_table({-1, 2, 5, 4}), 0)
            .value == 0.5);
  CHECK(stat_similarity(StatKind::RangeCoverage, one_num_table({0, 10}),
                        one_num_table({2, 11}), 0)
            .value == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(stat_similarity(StatKind::Mean, real, one_num_table({100.0}), 0).value == 0.0);
  CHECK_THROWS_AS(stat_similarity(StatKind::Mean, r3, r3, 0), DataError);
}

TEST_CASE("contingency_similarity matches examples and brute force") {
  Table same = two_cat_table({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(contingency_similarity(same, same, 0, 1).value == 1.0);

  Table diag = two_cat_table({{0, 0}, {0, 0}});
  Table anti = two_cat_table({{1, 1}, {1, 1}});
  CHECK(contingency_similarity(diag, anti, 0, 1).value == 0.0);

  Table uniform = two_cat_table({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  Table paired = two_cat_table({{0, 0}, {0, 0}, {1, 1}, {1, 1}});
  CHECK(contingency_similarity(uniform, paired, 0, 1).value ==
        doctest::Approx(0.5).epsilon(1e-12));

  Rng rng = make_rng(8);
  std::uniform_int_distribution<std::size_t> cat(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<std::size_t, std::size_t>> pa, pb;
    for (int i = 0; i < 6; ++i) pa.emplace_back(cat(rng), cat(rng));
    for (int i = 0; i < 5; ++i) pb.emplace_back(cat(rng), cat(rng));
    std::vector<std::size_t> codes_a, codes_b;
    for (auto [x, y] : pa) codes_a.push_back(x * 2 + y);
    for (auto [x, y] : pb) codes_b.push_back(x * 2 + y);
    double got =
        contingency_similarity(two_cat_table(pa), two_cat_table(pb), 0, 1).value;
    CHECK(std::abs(got - (1.0 - oracle::tv_distance(codes_a, codes_b))) <= 1e-12);
  }
}

TEST_CASE("correlation_similarity follows 1 - |rho_s - rho_r|/2") {
  Table up = two_num_table({{0, 0}, {1, 1}, {2, 2}, {3, 3.5}});
  CHECK(correlation_similarity(up, up, 0, 1)->value == 1.0);

  Table perfect_up = two_num_table({{0, 0}, {1, 1}, {2, 2}});
  Table perfect_down = two_num_table({{0, 2}, {1, 1}, {2, 0}});
  CHECK(correlation_similarity(perfect_up, perfect_down, 0, 1)->value ==
        doctest::Approx(0.0).epsilon(1e-12));

  // rho 1/3 vs 0 -> 1 - (1/3)/2
  Table third = two_num_table({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}, {1, 1}, {-1, -1}});
  Table zero = two_num_table({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}});
  CHECK(correlation_similarity(third, zero, 0, 1)->value ==
        doctest::Approx(1.0 - (1.0 / 3) / 2).epsilon(1e-12));

  Table constant = two_num_table({{1, 0}, {1, 1}, {1, 3}});
  CHECK_FALSE(correlation_similarity(constant, zero, 0, 1).has_value());
}

TEST_CASE("mi_estimate: independence, perfect dependence, non-negativity") {
  Table indep = two_cat_table({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(mi_estimate(indep, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));

  Table matched = two_cat_table({{0, 0}, {0, 0}, {1, 1}, {1, 1}});
  CHECK(mi_estimate(matched, 0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // mixed categorical x continuous stays non-negative
  Rng rng = make_rng(12);
  std::uniform_int_distribution<std::size_t> cat(0, 2);
  std::uniform_real_distribution<double> unif(0, 1);
  Codebook cb({cat_col("a", {"x", "y", "z"}), num_col("v")});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<Cell>> rows;
    for (int i = 0; i < 30; ++i) rows.push_back({K(cat(rng)), C(unif(rng))});
    CHECK(mi_estimate(table_of(cb, rows), 0, 1) >= 0.0);
  }
}

TEST_CASE("mi_estimate matches the plug-in oracle for categorical pairs") {
  Rng rng = make_rng(2);
  std::uniform_int_distribution<std::size_t> cat(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> a, b;
    for (int i = 0; i < 12; ++i) {
      pairs.emplace_back(cat(rng), cat(rng));
      a.push_back(pairs.back().first);
      b.push_back(pairs.back().second);
    }
    Table t = two_cat_table(pairs, 3);
    CHECK(std::abs(mi_estimate(t, 0, 1) - oracle::mutual_information(a, b)) <= 1e-12);
  }
}

TEST_CASE("mutual_information_similarity anchors") {
  Codebook cb({cat_col("a", {"0", "1"}), cat_col("b", {"0", "1"}),
               cat_col("c", {"0", "1"}), cat_col("d", {"0", "1"})});
  // real has one dependent pair (a,b); synth a different one (c,d); the
  // remaining columns cycle through all combinations so their MI is 0
  std::vector<std::vector<Cell>> real_rows, synth_rows;
  for (std::size_t i = 0; i < 16; ++i) {
    std::size_t bits[3] = {i & 1, (i >> 1) & 1, (i >> 2) & 1};
    real_rows.push_back({K(bits[0]), K(bits[0]), K(bits[1]), K(bits[2])});
    synth_rows.push_back({K(bits[0]), K(bits[1]), K(bits[2]), K(bits[2])});
  }
  Table real = table_of(cb, real_rows);
  Table synth = table_of(cb, synth_rows);
  CHECK(mutual_information_similarity(real, real).value == 1.0);
  CHECK(mutual_information_similarity(real, synth).value ==
        doctest::Approx(0.0).epsilon(1e-12));

  // all columns pairwise independent with exact counts: both matrices stay
  // all-zero and the score is exactly 1
  Codebook cb3({cat_col("a", {"0", "1"}), cat_col("b", {"0", "1"}),
                cat_col("c", {"0", "1"})});
  std::vector<std::vector<Cell>> indep3;
  for (std::size_t i = 0; i < 8; ++i)
    indep3.push_back({K(i & 1), K((i >> 1) & 1), K((i >> 2) & 1)});
  Table t3 = table_of(cb3, indep3);
  CHECK(mutual_information_similarity(t3, t3).value == 1.0);
}

TEST_CASE("mutual_information_similarity is invariant under joint relabeling") {
  Rng rng = make_rng(14);
  std::uniform_int_distribution<std::size_t> cat(0, 2);
  std::vector<std::vector<Cell>> ra, rb;
  for (int i = 0; i < 60; ++i) {
    std::size_t a = cat(rng), b = (a + cat(rng)) % 3;
    ra.push_back({K(a), K(b)});
    rb.push_back({K(cat(rng)), K(cat(rng))});
  }
  Codebook cb({cat_col("a", {"0", "1", "2"}), cat_col("b", {"0", "1", "2"})});
  Table real = table_of(cb, ra), synth = table_of(cb, rb);
  double base = mutual_information_similarity(real, synth).value;

  auto relabel = [&](const Table& t) {
    std::vector<std::vector<Cell>> rows;  // category permutation 0->2,1->0,2->1
    for (std::size_t i = 0; i < t.n_rows(); ++i)
      rows.push_back({K((t.at(i, 0).category() + 2) % 3),
                      K((t.at(i, 1).category() + 2) % 3)});
    return table_of(cb, rows);
  };
  CHECK(mutual_information_similarity(relabel(real), relabel(synth)).value ==
        doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("missing_value_similarity follows 1 - |frac - frac|") {
  Codebook cb({num_col("x", true)});
  Table a = table_of(cb, {{NA()}, {C(1)}, {C(1)}, {C(1)}, {C(1)}});  // frac 0.2
  Table b = table_of(cb, {{NA()}, {NA()}, {C(1)}, {C(1)}, {NA()}});  // frac 0.6
  CHECK(missing_value_similarity(a, a, 0).value == 1.0);
  CHECK(missing_value_similarity(a, b, 0).value == doctest::Approx(0.6));
  Table none = table_of(cb, {{C(1)}, {C(1)}});
  Table all = table_of(cb, {{NA()}, {NA()}});
  CHECK(missing_value_similarity(none, all, 0).value == 0.0);
}

TEST_CASE("mnar_similarity: hand-computed single pair and Monte-Carlo limit") {
  // real missingness perfectly co-occurring, synth anti-occurring:
  // one pair with |corr diff| = 2, Z = 4 -> t = 0.5
  Table real = missing_table(400, 5, 0.3, 0.3, /*co_occur=*/true);
  Table synth = missing_table(400, 6, 0.3, 0.3, false, /*anti_occur=*/true);
  auto s = mnar_similarity(real, synth);
  REQUIRE(s.has_value());
  CHECK(s->value == doctest::Approx(0.5).epsilon(1e-9));

  CHECK(mnar_similarity(real, real)->value == 1.0);

  Table big_r = missing_table(10000, 7, 0.3, 0.4);
  Table big_s = missing_table(10000, 8, 0.3, 0.4);
  CHECK(mnar_similarity(big_r, big_s)->value >= 0.95);

  Table no_missing = one_num_table({1, 2, 3});
  CHECK_FALSE(mnar_similarity(no_missing, no_missing).has_value());
}

TEST_CASE("covariate_dependent_missing_similarity anchors") {
  // missingness of m decided by the binary covariate g in real (V = 1),
  // independent in synth (V ~ 0), one admissible pair -> t ~ 0
  Codebook cb({num_col("m", true), cat_col("g", {"p", "q"})});
  std::vector<std::vector<Cell>> real_rows, synth_rows;
  Rng rng = make_rng(4);
  std::uniform_real_distribution<double> unif(0, 1);
  for (int i = 0; i < 2000; ++i) {
    std::size_t g = i % 2;
    real_rows.push_back({g == 0 ? NA() : C(unif(rng)), K(g)});
    synth_rows.push_back({unif(rng) < 0.5 ? NA() : C(unif(rng)), K(g)});
  }
  Table real = table_of(cb, real_rows), synth = table_of(cb, synth_rows);
  auto s = covariate_dependent_missing_similarity(real, synth);
  REQUIRE(s.has_value());
  CHECK(s->value <= 0.05);
  CHECK(covariate_dependent_missing_similarity(real, real)->value == 1.0);

  Table br = missing_table(10000, 9, 0.3, 0.3);
  Table bs = missing_table(10000, 10, 0.3, 0.3);
  CHECK(covariate_dependent_missing_similarity(br, bs)->value >= 0.95);

  Table no_admissible = one_num_table({1, 2});
  CHECK_FALSE(
      covariate_dependent_missing_similarity(no_admissible, no_admissible).has_value());
}

TEST_CASE("cramers_v matches examples and the chi-square oracle") {
  std::vector<std::size_t> a{0, 0, 1, 1}, b{0, 0, 1, 1};
  CHECK(cramers_v(a, b) == 1.0);

  std::vector<std::size_t> ind_a{0, 0, 1, 1}, ind_b{0, 1, 0, 1};
  CHECK(cramers_v(ind_a, ind_b) == 0.0);

  // counts [[3,1],[1,3]]: chi2 = 2, n = 8 -> V = 0.5
  std::vector<std::size_t> xa{0, 0, 0, 0, 1, 1, 1, 1};
  std::vector<std::size_t> xb{0, 0, 0, 1, 0, 1, 1, 1};
  CHECK(cramers_v(xa, xb) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(cramers_v(std::vector<std::size_t>{0, 0, 0},
                  std::vector<std::size_t>{0, 1, 0}) == 0.0);  // constant convention

  Rng rng = make_rng(6);
  std::uniform_int_distribution<std::size_t> cat(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> u, v;
    for (int i = 0; i < 15; ++i) {
      u.push_back(cat(rng));
      v.push_back(cat(rng));
    }
    CHECK(std::abs(cramers_v(u, v) - oracle::cramers_v(u, v)) <= 1e-12);
  }
}

TEST_CASE("SELF yields exactly 1 for every distributional metric") {
  Table t = missing_table(300, 20, 0.2, 0.25);
  BaselinePair self = baseline_self(t);
  CHECK(ks_complement(self.real, self.synth, 0).value == 1.0);
  CHECK(ks_complement(self.real, self.synth, 2).value == 1.0);
  CHECK(tv_complement(self.real, self.synth, 3).value == 1.0);
  for (StatKind kind : {StatKind::Mean, StatKind::Median, StatKind::Std,
                        StatKind::RangeCoverage, StatKind::BoundaryAdherence})
    CHECK(stat_similarity(kind, self.real, self.synth, 2).value == 1.0);
  CHECK(correlation_similarity(self.real, self.synth, 0, 2)->value == 1.0);
  CHECK(mutual_information_similarity(self.real, self.synth).value == 1.0);
  CHECK(missing_value_similarity(self.real, self.synth, 0).value == 1.0);
  CHECK(mnar_similarity(self.real, self.synth)->value == 1.0);
  CHECK(covariate_dependent_missing_similarity(self.real, self.synth)->value == 1.0);
}

TEST_CASE("PERM keeps every marginal and missingness metric at its SELF value") {
  Table t = missing_table(300, 21, 0.2, 0.25);
  BaselinePair perm = baseline_perm(t, 77);
  CHECK(ks_complement(perm.real, perm.synth, 0).value == 1.0);
  CHECK(tv_complement(perm.real, perm.synth, 3).value == 1.0);
  for (StatKind kind : {StatKind::Mean, StatKind::Median, StatKind::Std,
                        StatKind::RangeCoverage, StatKind::BoundaryAdherence})
    CHECK(stat_similarity(kind, perm.real, perm.synth, 2).value == 1.0);
  CHECK(missing_value_similarity(perm.real, perm.synth, 0).value == 1.0);
  CHECK(missing_value_similarity(perm.real, perm.synth, 1).value == 1.0);
}

TEST_CASE("scores stay in [0,1] on adversarial pairs") {
  Rng rng = make_rng(33);
  std::uniform_real_distribution<double> unif(-5, 5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 20; ++i) {
      a.push_back(unif(rng));
      b.push_back(unif(rng) * 100);
    }
    Table ta = one_num_table(a), tb = one_num_table(b);
    for (StatKind kind : {StatKind::Mean, StatKind::Median, StatKind::Std,
                          StatKind::RangeCoverage, StatKind::BoundaryAdherence}) {
      double v = stat_similarity(kind, ta, tb, 0).value;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    double ks = ks_complement(ta, tb, 0).value;
    CHECK(ks >= 0.0);
    CHECK(ks <= 1.0);
  }
}
