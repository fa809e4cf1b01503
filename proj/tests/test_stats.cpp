#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ssrlab/genmodels.hpp"
#include "ssrlab/ssr.hpp"
#include "ssrlab/stats.hpp"

using namespace ssrlab;
using Catch::Approx;

namespace {

using Rows = std::vector<std::vector<double>>;

// Naive 1-based sums with the bounds i = 1..n, j = i..n-1.
double skew_naive(const Rows& a) {
  const std::size_t n = a.size();
  double s = 0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n - 1; ++j) s += a[i - 1][j - 1] - a[j - 1][i - 1];
  return s;
}

double cos_naive(const Rows& a) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0), av(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) av[i] += a[i][j] * v[j];
  double dot = 0, nv = 0, nav = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dot += v[i] * av[i];
    nv += v[i] * v[i];
    nav += av[i] * av[i];
  }
  return dot / (std::sqrt(nv) * std::sqrt(nav));
}

Rows random_rows(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Rows r(n, std::vector<double>(n));
  for (auto& row : r)
    for (auto& x : row) x = u(gen);
  return r;
}

}  // namespace

TEST_CASE("count_transitions hand example", "[stats]") {
  const auto c = build_corpus({{"1", "2", "1", "2"}});
  const WordId one = *c.lexicon.id("1"), two = *c.lexicon.id("2");
  const auto tc = count_transitions(c, 2);
  CHECK(tc.count(two, one) == 2);
  CHECK(tc.count(one, two) == 1);
  CHECK(tc.count(one, one) == 0);
  CHECK(tc.marginal_of(one) == 2);
  CHECK(tc.marginal_of(two) == 2);

  const auto a = normalize(tc);
  const auto r1 = static_cast<std::size_t>(tc.slot[one]);
  const auto r2 = static_cast<std::size_t>(tc.slot[two]);
  CHECK(a(r2, r1) == 1.0);
  CHECK(a(r1, r2) == 0.5);
}

TEST_CASE("count_transitions edge cases", "[stats]") {
  SECTION("no adjacencies") {
    const auto c = build_corpus({{"a"}, {"b"}, {"a"}});
    const auto tc = count_transitions(c, 2);
    CHECK(tc.entries.empty());
    const auto a = normalize(tc);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(a(i, j) == 0.0);
  }
  SECTION("pairs never cross sentence boundaries") {
    const auto c = build_corpus({{"a", "b"}, {"c", "a"}});
    const auto tc = count_transitions(c, 3);
    CHECK(tc.count(*c.lexicon.id("c"), *c.lexicon.id("b")) == 0);
    CHECK(tc.entries.size() == 2);
  }
  SECTION("words outside the top set are skipped, marginals are not") {
    const auto c = build_corpus({{"a", "a", "a", "b", "b", "c"}});
    const auto tc = count_transitions(c, 2);
    const WordId a = *c.lexicon.id("a"), b = *c.lexicon.id("b"), x = *c.lexicon.id("c");
    CHECK(tc.count(a, a) == 2);
    CHECK(tc.count(b, a) == 1);
    CHECK(tc.count(b, b) == 1);
    CHECK(tc.count(x, b) == 0);
    CHECK(tc.marginal_of(x) == 1);
    CHECK(tc.slot[x] == -1);
  }
  SECTION("W_max larger than W") {
    const auto c = build_corpus({{"a", "b"}});
    CHECK_THROWS_AS(count_transitions(c, 3), Error);
    CHECK_THROWS_AS(count_transitions(c, 0), Error);
  }
}

TEST_CASE("SSR transitions are triangular", "[stats][ssr]") {
  const std::vector<std::size_t> lengths(2000, 25);
  const auto corpus = ssr_corpus({300, 5}, lengths);
  const auto tc = count_transitions(corpus, 200);
  REQUIRE(!tc.entries.empty());
  for (const auto& e : tc.entries) {
    const auto i = std::stoul(corpus.lexicon.word(e.follower));
    const auto j = std::stoul(corpus.lexicon.word(e.predecessor));
    if (j != 1) REQUIRE(i < j);
  }
}

TEST_CASE("normalized columns never exceed one", "[stats][property]") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TokenSentence> s(1 + gen() % 20);
    for (auto& sent : s) {
      sent.resize(1 + gen() % 15);
      for (auto& w : sent) w = std::to_string(gen() % 12);
    }
    const auto c = build_corpus(s);
    const auto a = transition_matrix(c, std::min<std::size_t>(8, c.lexicon.size()));
    for (std::size_t j = 0; j < a.side(); ++j) {
      double col = 0;
      for (std::size_t i = 0; i < a.side(); ++i) {
        REQUIRE(a(i, j) >= 0.0);
        col += a(i, j);
      }
      REQUIRE(col <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("Bernoulli shuffles keep the marginals", "[stats]") {
  const std::vector<std::size_t> lengths(300, 12);
  const auto c = ssr_corpus({150, 8}, lengths);
  const auto base = count_transitions(c, 50);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto shuffled = count_transitions(bernoulli_shuffle(c, s), 50);
    CHECK(shuffled.marginal == base.marginal);
    CHECK(shuffled.top_set.size() == base.top_set.size());
  }
}

TEST_CASE("skew", "[stats]") {
  SECTION("symmetric matrices give zero") {
    const auto a = TransitionMatrix::from_rows({{0.1, 0.2, 0.3}, {0.2, 0.5, 0.6}, {0.3, 0.6, 0.0}});
    CHECK(skew(a) == 0.0);
  }
  SECTION("three by three hand case") {
    const auto a = TransitionMatrix::from_rows({{0.0, 0.4, 0.7}, {0.1, 0.0, 0.2}, {0.7, 0.2, 0.0}});
    CHECK(skew(a) == Approx(0.3).margin(1e-15));
  }
  SECTION("pairs with the last index do not contribute") {
    const auto a = TransitionMatrix::from_rows({{0.0, 0.4, 0.9}, {0.1, 0.0, 0.8}, {0.2, 0.0, 0.0}});
    CHECK(skew(a) == Approx(0.3).margin(1e-15));
  }
  SECTION("non-square input") {
    CHECK_THROWS_AS(TransitionMatrix::from_rows({{1.0, 2.0}, {3.0}}), Error);
  }
}

TEST_CASE("skew and cos match naive versions", "[stats][property]") {
  std::mt19937_64 gen(1234);
  for (std::size_t n : {5u, 6u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto rows = random_rows(n, gen);
      const auto a = TransitionMatrix::from_rows(rows);
      REQUIRE(std::abs(skew(a) - skew_naive(rows)) <= 1e-12);
      REQUIRE(std::abs(cos_measure(a) - cos_naive(rows)) <= 1e-12);
      REQUIRE(std::abs(skew(a.transposed()) + skew(a)) <= 1e-12);
      const double c = cos_measure(a);
      REQUIRE(c > 0.0);
      REQUIRE(c <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("cos_measure", "[stats]") {
  SECTION("identity") {
    TransitionMatrix id(7);
    for (std::size_t i = 0; i < 7; ++i) id(i, i) = 1.0;
    CHECK(cos_measure(id) == Approx(1.0).margin(1e-15));
  }
  SECTION("two by two with row sums (2, 0)") {
    const auto a = TransitionMatrix::from_rows({{1.0, 1.0}, {0.0, 0.0}});
    CHECK(cos_measure(a) == Approx(0.70711).margin(1e-5));
    CHECK(cos_measure(a) == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  }
  SECTION("equal row sums") {
    const auto a = TransitionMatrix::from_rows({{0.5, 0.25, 0.25}, {0.0, 1.0, 0.0}, {0.9, 0.0, 0.1}});
    CHECK(cos_measure(a) == Approx(1.0).margin(1e-15));
  }
  SECTION("zero matrix") {
    try {
      cos_measure(TransitionMatrix(3));
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::domain);
    }
  }
}

TEST_CASE("rank_increments", "[stats]") {
  SECTION("ranks (1, 3, 2)") {
    // counts a=4, b=3, c=1 so ranks a=1, b=2, c=3
    const auto c = build_corpus({{"a", "c", "b"}, {"a", "b"}, {"a", "b"}, {"a"}});
    REQUIRE(c.lexicon.rank(*c.lexicon.id("c")) == 3);
    const auto d = rank_increments(Corpus{{c.sentences.front()}, c.lexicon});
    CHECK(d.samples == 2);
    CHECK(d.probability == std::map<std::int64_t, double>{{-1, 0.5}, {2, 0.5}});
  }
  SECTION("repeated word is a point mass at zero") {
    const auto d = rank_increments(build_corpus({{"x", "x", "x"}}));
    CHECK(d.probability == std::map<std::int64_t, double>{{0, 1.0}});
  }
  SECTION("normalized") {
    const std::vector<std::size_t> lengths(100, 9);
    const auto d = rank_increments(ssr_corpus({60, 2}, lengths));
    double sum = 0;
    for (auto [k, p] : d.probability) {
      sum += p;
      CHECK(std::abs(k) <= 59);
    }
    CHECK(sum == Approx(1.0).margin(1e-12));
  }
  SECTION("no adjacencies") {
    CHECK_THROWS_AS(rank_increments(build_corpus({{"a"}, {"b"}})), Error);
  }
}

TEST_CASE("dist_distance", "[stats]") {
  auto dist = [](std::map<std::int64_t, double> p, std::uint64_t n = 100) {
    return RankIncrementDist{std::move(p), n};
  };
  const auto p1 = dist({{0, 0.5}, {1, 0.5}});
  const auto p2 = dist({{0, 0.25}, {1, 0.75}});
  const auto at0 = dist({{0, 1.0}});
  const auto at1 = dist({{1, 1.0}});

  for (auto kind : {Distance::ks, Distance::l1, Distance::kl})
    CHECK(dist_distance(p1, p1, kind) == Approx(0.0).margin(1e-3));
  CHECK(dist_distance(p1, p1, Distance::ks) == 0.0);
  CHECK(dist_distance(p1, p1, Distance::l1) == 0.0);

  CHECK(dist_distance(at0, at1, Distance::ks) == 1.0);
  CHECK(dist_distance(at0, at1, Distance::l1) == 2.0);
  CHECK(dist_distance(p1, p2, Distance::ks) == Approx(0.25).margin(1e-15));
  CHECK(dist_distance(p1, p2, Distance::l1) == Approx(0.5).margin(1e-15));

  SECTION("KL with smoothing") {
    // eps = 1/1000 over two support points
    const double eps = 1e-3, z = 1.0 + 2 * eps;
    const double expected = 0.5 * std::log(0.5 / ((0.25 + eps) / z)) +
                            0.5 * std::log(0.5 / ((0.75 + eps) / z));
    CHECK(dist_distance(p1, p2, Distance::kl) == Approx(expected).epsilon(1e-12));
    CHECK(std::isfinite(dist_distance(at0, at1, Distance::kl)));
    CHECK(dist_distance(at0, at1, Distance::kl) > 5.0);
  }
  SECTION("unnormalized input") {
    CHECK_THROWS_AS(dist_distance(dist({{0, 0.7}}), p1, Distance::ks), Error);
  }
  SECTION("names") {
    CHECK(parse_distance("ks") == Distance::ks);
    CHECK(parse_distance("KL") == Distance::kl);
    CHECK(!parse_distance("chi2"));
  }
}
