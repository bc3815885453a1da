#include <doctest.h>

#include <cmath>

#include "rta/errors.hpp"
#include "rta/lexicon.hpp"
#include "rta/ngram.hpp"
#include "rta/rng.hpp"

using namespace rta;

TEST_SUITE_BEGIN("ngram");

TEST_CASE("fit validates parameters") {
  CHECK_THROWS_AS(NGramLM::fit({}, 2, 0.1), InvalidParamError);
  CHECK_THROWS_AS(NGramLM::fit({{"a"}}, 0, 0.1), InvalidParamError);
  CHECK_THROWS_AS(NGramLM::fit({{"a"}}, 2, 0.0), InvalidParamError);
}

TEST_CASE("bigram probability matches the smoothing formula by hand") {
  // Corpus "a b", n=2, alpha=0.1. V' = {a,b} + UNK + end = 4.
  // count(a -> b) = 1, total(a) = 1: P(b|a) = (1 + a)/(1 + a*4).
  double alpha = 0.1;
  NGramLM lm = NGramLM::fit({{"a", "b"}}, 2, alpha);
  CHECK(lm.support_size() == 4);
  std::vector<std::string> ctx{"a"};
  CHECK(lm.probability(ctx, "b") ==
        doctest::Approx((1.0 + alpha) / (1.0 + alpha * 4.0)).epsilon(1e-12));
  // Unseen continuation from the same context.
  CHECK(lm.probability(ctx, "a") == doctest::Approx(alpha / (1.0 + alpha * 4.0)).epsilon(1e-12));
}

TEST_CASE("unigram probability of a never-seen word is alpha over N plus alpha Vprime") {
  // Corpus "a b c" as one sentence, n=1: N = 3 words + 1 end = 4, V' = 5.
  double alpha = 0.25;
  NGramLM lm = NGramLM::fit({{"a", "b", "c"}}, 1, alpha);
  CHECK(lm.support_size() == 5);
  CHECK(lm.unigram_probability("zzz") ==
        doctest::Approx(alpha / (4.0 + alpha * 5.0)).epsilon(1e-12));
  CHECK(lm.probability({}, "zzz") ==
        doctest::Approx(alpha / (4.0 + alpha * 5.0)).epsilon(1e-12));
}

TEST_CASE("every conditional distribution sums to one") {
  NGramLM lm = NGramLM::fit({{"the", "cat", "sat"}, {"the", "dog", "sat"}, {"cat", "nap"}}, 3, 0.1);
  std::vector<std::vector<std::string>> contexts = {
      {}, {"the"}, {"the", "cat"}, {"unseen", "context"}, {"cat"}, {"sat", "sat"}};
  std::vector<std::string> support = {"the", "cat", "sat", "dog", "nap",
                                      NGramLM::unk_token(), NGramLM::end_token()};
  for (const auto& ctx : contexts) {
    double total = 0.0;
    for (const std::string& w : support) total += lm.probability(ctx, w);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("perplexity of an alpha-dominated uniform model approaches Vprime") {
  // With alpha huge every conditional flattens to 1/V', so perplexity of any
  // in-vocab text is V' to within floating error.
  NGramLM lm = NGramLM::fit({{"a", "b", "c"}}, 1, 1e15);
  double vprime = static_cast<double>(lm.support_size());
  CHECK(std::abs(lm.perplexity({"a", "b", "c"}) - vprime) < 1e-9);
}

TEST_CASE("training sentence scores lower perplexity than a permutation of unseen words") {
  NGramLM lm = NGramLM::fit({{"silver", "fox", "jumps"}, {"silver", "fox", "sleeps"}}, 2, 0.1);
  double trained = lm.perplexity({"silver", "fox", "jumps"});
  double garbage = lm.perplexity({"quill", "zesty", "marble"});
  CHECK(trained < garbage);
}

TEST_CASE("empty text scores the end-marker event only") {
  double alpha = 0.5;
  NGramLM lm = NGramLM::fit({{"a", "b"}}, 2, alpha);
  // Context <s>: count(<s> -> a) = 1, total = 1; P(end|<s>) = alpha/(1+4a).
  double p_end = alpha / (1.0 + alpha * 4.0);
  CHECK(lm.perplexity({}) == doctest::Approx(1.0 / p_end).epsilon(1e-12));
}

TEST_CASE("perplexity is invariant to corpus sentence order") {
  std::vector<WordSequence> corpus = {{"a", "b"}, {"b", "c"}, {"c", "a", "b"}};
  std::vector<WordSequence> reversed(corpus.rbegin(), corpus.rend());
  NGramLM lm1 = NGramLM::fit(corpus, 2, 0.1);
  NGramLM lm2 = NGramLM::fit(reversed, 2, 0.1);
  WordSequence probe{"a", "b", "c"};
  CHECK(lm1.perplexity(probe) == lm2.perplexity(probe));
}

TEST_CASE("contextual candidates rank the dominant continuation first") {
  // "the" is always followed by "cat".
  std::vector<WordSequence> corpus = {
      {"the", "cat", "sat"}, {"the", "cat", "ran"}, {"a", "dog", "sat"}};
  NGramLM lm = NGramLM::fit(corpus, 2, 0.01);
  Lexicon lex;
  lex.add_word("cat", {1.0});
  lex.add_word("dog", {1.0});
  lex.add_word("sat", {1.0});
  lex.add_word("ran", {1.0});

  WordSequence text{"the", "dog", "sat"};
  auto ranked = lm.contextual_candidates(lex, text, 1, 3);
  REQUIRE(!ranked.empty());
  CHECK(ranked[0] == "cat");

  SUBCASE("k=0 empty") { CHECK(lm.contextual_candidates(lex, text, 1, 0).empty()); }
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(lm.contextual_candidates(lex, text, 3, 2), OutOfRangeError);
  }
  SUBCASE("position 0 backs off to unigram ranking and still returns candidates") {
    auto head = lm.contextual_candidates(lex, text, 0, 4);
    CHECK(!head.empty());
    // The original word is excluded.
    for (const auto& w : head) CHECK(w != "the");
  }
  SUBCASE("original word never returned") {
    for (const auto& w : ranked) CHECK(w != "dog");
  }
}

TEST_SUITE_END();
