#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "vvmean/compensated.hpp"
#include "vvmean/estimators.hpp"
#include "vvmean/tensor_space.hpp"

using namespace vvmean;

namespace {

// Locates a master seed whose stream opens with the wanted uniform_index
// draws. Lets hand-computed examples pin exact sampled indices.
std::uint64_t seed_with_draws(index_t n, const std::vector<index_t>& wanted) {
  for (std::uint64_t seed = 0; seed < 200000; ++seed) {
    Stream s = derive({seed, {}});
    bool ok = true;
    for (index_t w : wanted) {
      if (s.uniform_index(n) != w) {
        ok = false;
        break;
      }
    }
    if (ok) return seed;
  }
  REQUIRE_MESSAGE(false, "no seed found with the wanted draws");
  return 0;
}

index_t ceil_div(index_t a, index_t b) { return (a + b - 1) / b; }

}  // namespace

TEST_CASE("holder_exponent_p1") {
  CHECK(holder_exponent_p1(Exponent(4.0), 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(holder_exponent_p1(Exponent(2.0), 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(holder_exponent_p1(Exponent::infinity(), 1.0) == 3.0);
  CHECK(holder_exponent_p1(Exponent::infinity(), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(holder_exponent_p1(Exponent(2.0), 2.0), std::domain_error);
  CHECK_THROWS_AS(holder_exponent_p1(Exponent(2.0), 3.0), std::domain_error);
}

TEST_CASE("a1_norm_estimate on constant rows") {
  std::vector<double> row(17, -3.5);
  Stream s = derive({1, {}});
  for (double q : {1.0, 2.0, 3.0}) {
    CHECK(a1_norm_estimate(row, q, 5, s) == doctest::Approx(3.5).epsilon(1e-12));
  }
}

TEST_CASE("a1_norm_estimate unbiased in the q-th power") {
  // row (0,2), q=2, n=1: the two equiprobable outcomes give estimates 0 and
  // 2, so E[est^2] = 2 = ||row||^2 in L_2. Binomial 4-sigma band at T=20000.
  std::vector<double> row{0.0, 2.0};
  constexpr int kTrials = 20000;
  double sum_sq = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    Stream s = derive({static_cast<std::uint64_t>(t), {1}});
    const double est = a1_norm_estimate(row, 2.0, 1, s);
    REQUIRE((est == 0.0 || est == doctest::Approx(2.0).epsilon(1e-15)));
    sum_sq += est * est;
  }
  const double mean = sum_sq / kTrials;  // each est^2 is 0 or 4, sd = 2
  CHECK(std::abs(mean - 2.0) <= 4.0 * 2.0 / std::sqrt(static_cast<double>(kTrials)));
}

TEST_CASE("a1_norm_estimate with pinned draws") {
  // draws (2,2) on row (0,2) with q=1, n=2 evaluate to (2+2)/2 = 2
  const std::uint64_t seed = seed_with_draws(2, {2, 2});
  Stream s = derive({seed, {}});
  CHECK(a1_norm_estimate(std::vector<double>{0.0, 2.0}, 1.0, 2, s) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("a1_norm_estimate homogeneity on replayed streams") {
  std::vector<double> row{1.0, -2.0, 0.5, 3.0, -0.25};
  std::vector<double> scaled(row);
  for (auto& v : scaled) v *= 4.0;
  Stream s1 = derive({9, {0}});
  Stream s2 = derive({9, {0}});
  const double e1 = a1_norm_estimate(row, 3.0, 7, s1);
  const double e2 = a1_norm_estimate(scaled, 3.0, 7, s2);
  CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));
}

TEST_CASE("a1_norm_estimate rejects bad input") {
  Stream s = derive({0, {}});
  CHECK_THROWS_AS(a1_norm_estimate(std::vector<double>{}, 2.0, 1, s), std::invalid_argument);
  std::vector<double> row{1.0};
  CHECK_THROWS_AS(a1_norm_estimate(row, 2.0, 0, s), std::invalid_argument);
  CHECK_THROWS_AS(a1_norm_estimate(row, std::numeric_limits<double>::infinity(), 1, s), std::domain_error);
  CHECK_THROWS_AS(a1_norm_estimate(row, 0.5, 1, s), std::domain_error);
}

TEST_CASE("a1 error moments match exact binomial enumeration on a spike row") {
  // row with a single spike of height N2^(1/4): the estimate is a function of
  // the binomial hit count alone, so E|truth - est|^w has a closed form that
  // enumerates h = 0..n. Monte Carlo must agree within its own 5-sigma band.
  constexpr index_t kN2 = 16;
  std::vector<double> row(kN2, 0.0);
  row[0] = 2.0;                 // 16^(1/4)
  const double truth = 0.5;     // ((1/16)*4)^(1/2)
  const double w = 4.0 / 3.0;

  for (index_t n : {index_t{4}, index_t{16}}) {
    // exact moment via the binomial pmf, running-product form
    double exact = 0.0;
    double pmf = std::pow(15.0 / 16.0, static_cast<double>(n));  // h = 0
    for (index_t h = 0; h <= n; ++h) {
      const double est = 2.0 * std::sqrt(static_cast<double>(h) / static_cast<double>(n));
      exact += pmf * std::pow(std::abs(truth - est), w);
      pmf *= static_cast<double>(n - h) / (static_cast<double>(h + 1) * 15.0);
    }

    constexpr index_t kTrials = 200000;
    NeumaierSum acc, acc2;
    for (index_t t = 0; t < kTrials; ++t) {
      Stream s = derive({606060, {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(t)}});
      const double v = std::pow(std::abs(truth - a1_norm_estimate(row, 2.0, n, s)), w);
      acc.add(v);
      acc2.add(v * v);
    }
    const double mean = acc.value() / kTrials;
    const double var = (acc2.value() - kTrials * mean * mean) / (kTrials - 1);
    const double se = std::sqrt(var / kTrials);
    CHECK(std::abs(mean - exact) <= 5.0 * se);
  }
}

TEST_CASE("median_scalar order statistics") {
  CHECK(median_scalar(std::vector<double>{3, 1, 2}) == 2.0);
  CHECK(median_scalar(std::vector<double>{1, 2, 3, 4}) == 2.5);
  CHECK_THROWS_AS(median_scalar(std::vector<double>{}), std::invalid_argument);

  using cd = std::complex<double>;
  const cd m = median_scalar(std::vector<cd>{{1, 2}, {3, 0}, {2, 1}});
  CHECK(m.real() == 2.0);
  CHECK(m.imag() == 1.0);

  // permutation invariance
  std::vector<double> v{0.5, -1.0, 2.25, 7.0, 3.0, -4.5};
  std::sort(v.begin(), v.end());
  const double ref = median_scalar(v);
  do {
    CHECK(median_scalar(v) == ref);
  } while (std::next_permutation(v.begin(), v.end()));
}

TEST_CASE("a2_mean small-budget and constant cases") {
  SUBCASE("n < N1 gives zeros and no calls") {
    DiscreteFunction f(4, 5, std::vector<double>(20, 1.0));
    Stream s = derive({3, {}});
    const auto [values, audit] = a2_mean(f, 3, s);
    for (double v : values) CHECK(v == 0.0);
    CHECK(audit.total_calls() == 0);
  }
  SUBCASE("constant input is reproduced exactly") {
    DiscreteFunction f(3, 6, std::vector<double>(18, -0.75));
    Stream s = derive({4, {}});
    const auto [values, audit] = a2_mean(f, 7, s);
    for (double v : values) CHECK(v == -0.75);
    CHECK(audit.total_calls() == 3 * ceil_div(7, 3));
  }
  SUBCASE("n >= N1*N2 is a domain error") {
    DiscreteFunction f(2, 3);
    Stream s = derive({5, {}});
    CHECK_THROWS_AS(a2_mean(f, 6, s), std::domain_error);
  }
}

TEST_CASE("a2_mean with pinned draws") {
  // N1=2, N2=3, n=5: ceil(5/2)=3 shared draws (1,1,1) pick column 1 for both
  // rows; audit charges 2*3 = 6 <= 10 calls.
  const std::uint64_t seed = seed_with_draws(3, {1, 1, 1});
  DiscreteFunction f(2, 3, {10, 20, -7, 30, 40, 11});
  Stream s = derive({seed, {}});
  const auto [values, audit] = a2_mean(f, 5, s);
  CHECK(values[0] == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(values[1] == doctest::Approx(30.0).epsilon(1e-15));
  CHECK(audit.total_calls() == 6);
  CHECK(audit.total_calls() <= 2 * 5);
}

TEST_CASE("a2_mean is unbiased") {
  // fixed input, many streams: average output approaches the true row means
  DiscreteFunction f(3, 16, [] {
    std::vector<double> v(48);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(static_cast<double>(k) * 1.7) * 3.0;
    return v;
  }());
  const auto truth = mean_rows(f);
  constexpr int kTrials = 4000;
  const index_t n = 9;
  std::vector<double> sum(3, 0.0), sumsq(3, 0.0);
  for (int t = 0; t < kTrials; ++t) {
    Stream s = derive({909, {static_cast<std::uint32_t>(t)}});
    const auto [values, audit] = a2_mean(f, n, s);
    for (int i = 0; i < 3; ++i) {
      sum[i] += values[i];
      sumsq[i] += values[i] * values[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / kTrials;
    const double var = (sumsq[i] - kTrials * mean * mean) / (kTrials - 1);
    const double se = std::sqrt(var / kTrials);
    CHECK(std::abs(mean - truth[i]) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("a3_first_stage basics") {
  SUBCASE("constant magnitudes") {
    DiscreteFunction f(3, 8, [] {
      std::vector<double> v(24);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = (k % 2 == 0) ? 2.0 : -2.0;
      return v;
    }());
    Stream s = derive({6, {}});
    for (double a : a3_first_stage(f, 6, 5, s)) CHECK(a == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("zero rows give zero estimates") {
    DiscreteFunction f(2, 4);
    Stream s = derive({6, {}});
    for (double a : a3_first_stage(f, 4, 3, s)) CHECK(a == 0.0);
  }
  SUBCASE("pinned trace: median over three repetitions") {
    // single row (0,2), ceil(n/N1)=2, m=3, draws per repetition (1,1),(2,2),(1,2):
    // estimates (0, 2, sqrt(2)), median sqrt(2)
    const std::uint64_t seed = seed_with_draws(2, {1, 1, 2, 2, 1, 2});
    DiscreteFunction f(1, 2, {0, 2});
    Stream s = derive({seed, {}});
    const auto atilde = a3_first_stage(f, 2, 3, s);
    CHECK(atilde[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }
}

TEST_CASE("a3_allocate case split") {
  SUBCASE("equal estimates take the base branch, including all-zero") {
    const auto alloc = a3_allocate(std::vector<double>{1.5, 1.5, 1.5}, 10);
    for (index_t v : alloc) CHECK(v == ceil_div(10, 3));
    const auto zeros = a3_allocate(std::vector<double>{0, 0, 0, 0}, 9);
    for (index_t v : zeros) CHECK(v == ceil_div(9, 4));
  }
  SUBCASE("hand-evaluated splits") {
    const auto a = a3_allocate(std::vector<double>{0.0, 1.0}, 10);
    CHECK(a[0] == 5);
    CHECK(a[1] == 10);
    const auto b = a3_allocate(std::vector<double>{1.0, 1.0, 2.0}, 12);
    CHECK(b[0] == 4);
    CHECK(b[1] == 4);
    CHECK(b[2] == 8);
  }
  SUBCASE("allocation floor and total bound on random sweeps") {
    Stream s = derive({1234, {}});
    for (int rep = 0; rep < 200; ++rep) {
      const index_t n1 = s.uniform_index(8);
      const index_t n = n1 + s.uniform_index(100) - 1;
      std::vector<double> atilde(static_cast<std::size_t>(n1));
      for (auto& a : atilde) a = static_cast<double>(s.uniform_index(1000) - 1) / 100.0;
      const auto alloc = a3_allocate(atilde, n);
      index_t total = 0;
      for (index_t v : alloc) {
        CHECK(v >= ceil_div(n, n1));
        total += v;
      }
      CHECK(total <= 2 * n + n1);
    }
  }
  SUBCASE("rejects negative estimates") {
    CHECK_THROWS_AS(a3_allocate(std::vector<double>{1.0, -0.5}, 4), std::invalid_argument);
  }
  SUBCASE("the branch test is scale-invariant") {
    Stream s = derive({5678, {}});
    for (int rep = 0; rep < 100; ++rep) {
      const index_t n1 = s.uniform_index(10);
      const index_t n = n1 + s.uniform_index(80) - 1;
      std::vector<double> atilde(static_cast<std::size_t>(n1));
      for (auto& a : atilde) a = static_cast<double>(s.uniform_index(997)) / 131.0;
      const auto base = a3_allocate(atilde, n);
      for (double scale : {3.0, 0.7, 1000.0}) {
        std::vector<double> scaled(atilde);
        for (auto& a : scaled) a *= scale;
        CHECK(a3_allocate(scaled, n) == base);
      }
    }
  }
}

TEST_CASE("a3_mean basics") {
  SUBCASE("n < N1 gives zeros with an empty audit") {
    DiscreteFunction f(5, 4, std::vector<double>(20, 3.0));
    Stream s = derive({8, {}});
    const auto [values, audit] = a3_mean(f, {3, 3, 1.0}, s);
    for (double v : values) CHECK(v == 0.0);
    CHECK(audit.total_calls() == 0);
  }
  SUBCASE("constant input is exact for any m") {
    DiscreteFunction f(3, 7, std::vector<double>(21, 1.25));
    for (index_t m : {1, 3, 9}) {
      Stream s = derive({8, {static_cast<std::uint32_t>(m)}});
      const auto [values, audit] = a3_mean(f, {9, m, 1.0}, s);
      for (double v : values) CHECK(v == 1.25);
      CHECK(audit.total_calls() <= 6 * m * 9);
    }
  }
  SUBCASE("zero input: closed-form audit") {
    DiscreteFunction f(4, 10);
    const index_t n = 13, m = 3;
    Stream s = derive({8, {7}});
    const auto [values, audit] = a3_mean(f, {n, m, 1.0}, s);
    for (double v : values) CHECK(v == 0.0);
    const index_t lp = ceil_div(n, 4);
    CHECK(audit.stage1_calls == m * 4 * lp);
    CHECK(audit.stage2_calls == m * 4 * lp);  // uniform allocation on the zero input
    CHECK(audit.total_calls() == 2 * m * 4 * lp);
    CHECK(audit.total_calls() <= 6 * m * n);
  }
  SUBCASE("n >= N1*N2 is a domain error") {
    DiscreteFunction f(2, 3);
    Stream s = derive({8, {}});
    CHECK_THROWS_AS(a3_mean(f, {6, 1, 1.0}, s), std::domain_error);
  }
}

TEST_CASE("a3_mean with m=1 on constant-magnitude input matches a shared-draw mean") {
  // constant |f| forces the uniform allocation, so with m=1 the output is an
  // a2-style mean over the second-stage draws; replay the stream to verify.
  DiscreteFunction f(3, 11, [] {
    std::vector<double> v(33);
    Stream g = derive({4242, {}});
    for (auto& x : v) x = 3.0 * g.bernoulli_sign();
    return v;
  }());
  const index_t n = 8;
  const index_t lp = ceil_div(n, 3);
  const SeedSpec seed{777, {3}};

  Stream run = derive(seed);
  const auto [values, audit] = a3_mean(f, {n, 1, 1.0}, run);

  Stream replay = derive(seed);
  for (index_t k = 0; k < lp; ++k) replay.uniform_index(11);  // first-stage table
  std::vector<index_t> eta(static_cast<std::size_t>(lp));
  for (auto& e : eta) e = replay.uniform_index(11) - 1;
  for (index_t i = 0; i < 3; ++i) {
    double sum = 0.0;
    for (index_t e : eta) sum += f(i, e);
    CHECK(values[static_cast<std::size_t>(i)] == doctest::Approx(sum / lp).epsilon(1e-15));
  }
  CHECK(audit.stage2_calls == 3 * lp);
}

TEST_CASE("scaling by powers of two leaves the allocation identical and scales outputs exactly") {
  DiscreteFunction f(4, 9, [] {
    std::vector<double> v(36);
    Stream g = derive({31, {}});
    for (auto& x : v) x = static_cast<double>(g.uniform_index(19)) - 10.0;
    return v;
  }());
  for (double a : {0.5, 2.0, 8.0}) {
    std::vector<double> scaled(f.values().begin(), f.values().end());
    for (auto& x : scaled) x *= a;
    DiscreteFunction g(4, 9, std::move(scaled));

    Stream s1 = derive({66, {0}});
    Stream s2 = derive({66, {0}});
    const auto r1 = a3_mean(f, {11, 3, 1.0}, s1);
    const auto r2 = a3_mean(g, {11, 3, 1.0}, s2);
    CHECK(r1.audit.stage2_calls == r2.audit.stage2_calls);  // same allocation
    for (std::size_t i = 0; i < r1.values.size(); ++i) {
      CHECK(r2.values[i] == a * r1.values[i]);
    }

    Stream s3 = derive({66, {1}});
    Stream s4 = derive({66, {1}});
    const auto m1 = a2_mean(f, 11, s3);
    const auto m2 = a2_mean(g, 11, s4);
    for (std::size_t i = 0; i < m1.values.size(); ++i) CHECK(m2.values[i] == a * m1.values[i]);
  }
}

TEST_CASE("default_m theoretical constant") {
  CHECK(default_m(1, 1, 1.0) == 13);
  CHECK(default_m(2, 2, 1.0) == 23);
  index_t prev = 0;
  for (index_t k : {2, 4, 8, 16, 64, 256}) {
    const index_t m = default_m(k, k, 1.0);
    CHECK(m >= prev);
    CHECK(m % 2 == 1);
    prev = m;
  }
  CHECK(default_m(4, 4, 2.0) >= default_m(4, 4, 1.0));
}

TEST_CASE("zero_algorithm") {
  DiscreteFunction w = norm_witness(Exponent(2.0), Exponent::infinity(), 9, 4);
  const auto [values, audit] = zero_algorithm(w);
  for (double v : values) CHECK(v == 0.0);
  CHECK(audit.total_calls() == 0);
  // error of the zero output on the witness is the operator norm
  CHECK(lp_norm(mean_rows(w), Exponent::infinity()) ==
        doctest::Approx(operator_norm(Exponent(2.0), Exponent::infinity(), 9)).epsilon(1e-12));
}

TEST_CASE("median boosting tail bound (light sweep)") {
  // three-point distribution with success probability exactly 3/4: values
  // {-2, 0, +2} with probabilities {1/8, 3/4, 1/8}; success means the median
  // lands within radius 1 of 0.
  constexpr int kTrials = 20000;
  for (index_t m : {9, 17}) {
    int failures = 0;
    std::vector<double> draws(static_cast<std::size_t>(m));
    for (int t = 0; t < kTrials; ++t) {
      Stream s = derive({4000 + static_cast<std::uint64_t>(m), {static_cast<std::uint32_t>(t)}});
      for (auto& d : draws) {
        const index_t u = s.uniform_index(8);
        d = (u == 1) ? -2.0 : (u == 2 ? 2.0 : 0.0);
      }
      if (std::abs(median_scalar(draws)) > 1.0) ++failures;
    }
    const double bound = std::exp(-static_cast<double>(m) / 8.0);
    const double sigma = std::sqrt(bound * (1.0 - bound) / kTrials);
    CHECK(static_cast<double>(failures) / kTrials <= bound + 3.0 * sigma);
  }
}

TEST_CASE("budget audit closed forms (light sweep)") {
  DiscreteFunction f(6, 40, [] {
    std::vector<double> v(240);
    Stream g = derive({17, {}});
    for (auto& x : v) x = static_cast<double>(g.uniform_index(7)) - 4.0;
    return v;
  }());
  for (index_t n = 1; n <= 60; ++n) {
    Stream s = derive({70, {static_cast<std::uint32_t>(n)}});
    const auto [v2, audit2] = a2_mean(f, n, s);
    if (n < 6) {
      CHECK(audit2.total_calls() == 0);
    } else {
      CHECK(audit2.total_calls() == 6 * ceil_div(n, 6));
      CHECK(audit2.total_calls() <= 2 * n);
    }
    for (index_t m : {3, 9}) {
      Stream t = derive({71, {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)}});
      const auto [v3, audit3] = a3_mean(f, {n, m, 1.0}, t);
      CHECK(audit3.total_calls() <= 6 * m * n);
      CHECK(audit3.total_calls() == audit3.stage1_calls + audit3.stage2_calls);
    }
  }
}
