#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "ssrlab/genmodels.hpp"

using namespace ssrlab;
using Catch::Approx;

namespace {

Corpus small_template() {
  return build_corpus({{"the", "cat", "sat", "on", "the", "mat"},
                       {"a", "dog"},
                       {"the", "dog", "saw", "the", "cat", "and", "the", "mat"},
                       {"end"}});
}

}  // namespace

TEST_CASE("bernoulli_shuffle", "[genmodels]") {
  const auto templ = small_template();
  const auto shuffled = bernoulli_shuffle(templ, 9);

  SECTION("same lexicon, lengths and multiset") {
    CHECK(shuffled.lexicon == templ.lexicon);
    CHECK(shuffled.sentence_lengths() == templ.sentence_lengths());
    auto a = templ.flatten(), b = shuffled.flatten();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(rank_frequency(shuffled) == rank_frequency(templ));
  }
  SECTION("seeded") {
    CHECK(bernoulli_shuffle(templ, 9).sentences == shuffled.sentences);
    bool differs = false;
    for (std::uint64_t s = 10; s < 20 && !differs; ++s)
      differs = bernoulli_shuffle(templ, s).sentences != shuffled.sentences;
    CHECK(differs);
  }
  SECTION("single-token corpus is returned unchanged") {
    const auto one = build_corpus({{"x"}});
    CHECK(bernoulli_shuffle(one, 1).sentences == one.sentences);
  }
}

TEST_CASE("bernoulli_shuffle moves each token to a uniform position", "[genmodels]") {
  // token at position 0 of a 4-token stream lands anywhere with prob 1/4
  const auto templ = build_corpus({{"a", "b"}, {"c", "d"}});
  std::vector<double> where(4, 0.0);
  constexpr int trials = 40000;
  for (int s = 0; s < trials; ++s) {
    const auto flat = bernoulli_shuffle(templ, s).flatten();
    for (std::size_t i = 0; i < flat.size(); ++i)
      if (flat[i] == 1) ++where[i];
  }
  for (double w : where) CHECK(w / trials == Approx(0.25).margin(0.01));
}

TEST_CASE("Simon process", "[genmodels]") {
  SECTION("W = W_0 only recycles the initial words") {
    SimonProcess p({5, 1000, 5, 1, 3});
    for (int t = 0; t < 1000; ++t) {
      const WordId w = p.step();
      REQUIRE(w >= 1);
      REQUIRE(w <= 5);
    }
    CHECK(p.vocabulary_size() == 5);
  }
  SECTION("N = W - W_0 forces a new word every step") {
    SimonProcess p({20, 10, 10, 1, 3});
    for (WordId expected = 11; expected <= 20; ++expected) CHECK(p.step() == expected);
  }
  SECTION("infeasible and invalid configurations") {
    try {
      SimonProcess p({100, 50, 10, 1, 0});
      FAIL("expected an infeasible error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::infeasible);
    }
    CHECK_THROWS_AS(SimonProcess({10, 100, 0, 1, 0}), Error);
    CHECK_THROWS_AS(SimonProcess({10, 100, 11, 1, 0}), Error);
    CHECK_THROWS_AS(SimonProcess({10, 100, 5, 0, 0}), Error);
  }
  SECTION("stepping past N is an error") {
    SimonProcess p({3, 2, 1, 1, 0});
    p.step();
    p.step();
    CHECK_THROWS_AS(p.step(), Error);
  }
}

TEST_CASE("Simon reaches exactly W and conserves weight", "[genmodels][property]") {
  for (std::uint32_t w0 : {1u, 5u, 10u}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SimonProcess p({100, 10000, w0, 1, seed});
      std::vector<std::uint64_t> emitted(101, 0);
      for (std::size_t t = 1; t <= 10000; ++t) {
        const WordId w = p.step();
        ++emitted[w];
        if (t % 97 == 0 || t == 10000) {
          std::uint64_t sum = 0;
          for (WordId id = 1; id <= 100; ++id) sum += p.weight(id);
          REQUIRE(sum == p.total_weight());
          REQUIRE(sum == w0 + t);
          for (WordId id = 1; id <= 100; ++id)
            REQUIRE(p.weight(id) == (id <= w0 ? 1 : 0) + emitted[id]);
        }
      }
      REQUIRE(p.vocabulary_size() == 100);
    }
  }
}

TEST_CASE("Simon copying follows the weights", "[genmodels]") {
  // W = W_0 = 2 with k_0 = 1: the first step picks word 1 with probability 1/2.
  int ones = 0;
  constexpr int trials = 20000;
  for (int s = 0; s < trials; ++s) {
    SimonProcess p({2, 1, 2, 1, static_cast<std::uint64_t>(s)});
    ones += p.step() == 1;
  }
  CHECK(static_cast<double>(ones) / trials == Approx(0.5).margin(0.015));
}

TEST_CASE("simon_generate", "[genmodels]") {
  const std::vector<std::size_t> lengths{10, 20, 30};
  const auto c = simon_generate({40, 60, 10, 1, 4}, lengths);
  CHECK(c.sentence_lengths() == lengths);
  CHECK(c.token_count() == 60);
  CHECK(c.lexicon.size() <= 40);
  CHECK_THROWS_AS(simon_generate({40, 61, 10, 1, 4}, lengths), Error);
}

TEST_CASE("space_probability", "[genmodels]") {
  CHECK(space_probability(1, 100, 0) == 0.5);
  CHECK(space_probability(30, 100, 100) == 1.0);
  CHECK(space_probability(30, 100, 250) == 1.0);
  // one word missing: q = log(2*29 + 1)/log 30 - 1
  const double q = std::log(59.0) / std::log(30.0) - 1.0;
  CHECK(space_probability(30, 100, 99) == Approx(1.0 / (1.0 + q)).epsilon(1e-14));
  // larger deficits mean longer words
  double prev = 1.0;
  for (std::size_t d : {99u, 90u, 50u, 0u}) {
    const double p = space_probability(30, 100, d);
    CHECK(p < prev);
    CHECK(p > 0.0);
    prev = p;
  }
}

TEST_CASE("typewriter contract", "[genmodels]") {
  const std::vector<std::size_t> lengths(500, 20);
  for (std::uint32_t target : {1000u, 5000u}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto text = typewriter_stream({30, 10000, target, seed}, lengths);
      std::size_t n = 0;
      std::set<std::string> vocab;
      for (const auto& s : text) {
        for (const auto& w : s) {
          ++n;
          REQUIRE(!w.empty());
          for (char ch : w) REQUIRE(kTypewriterKeys.substr(0, 30).find(ch) != std::string::npos);
          vocab.insert(w);
        }
      }
      CHECK(n == 10000);
      CHECK(static_cast<double>(vocab.size()) >= 0.75 * target);
      CHECK(static_cast<double>(vocab.size()) <= 1.25 * target);
    }
  }
  SECTION("V = 1") {
    const std::vector<std::size_t> one{50};
    const auto text = typewriter_stream({1, 50, 10, 2}, one);
    for (const auto& w : text.front())
      CHECK(w.find_first_not_of('a') == std::string::npos);
  }
  SECTION("bad configurations") {
    const std::vector<std::size_t> one{5};
    CHECK_THROWS_AS(typewriter_stream({0, 5, 10, 0}, one), Error);
    CHECK_THROWS_AS(typewriter_stream({37, 5, 10, 0}, one), Error);
    CHECK_THROWS_AS(typewriter_stream({30, 6, 10, 0}, one), Error);
  }
}
