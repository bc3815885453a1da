#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rta/errors.hpp"
#include "rta/rng.hpp"
#include "rta/text.hpp"

using namespace rta;

TEST_SUITE_BEGIN("textcore");

TEST_CASE("tokenize splits on whitespace runs, punctuation stays attached") {
  CHECK(tokenize("Little People Surprise Sounds Fun Park").size() == 6);
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
  WordSequence w = tokenize("Fun-2-Learn  Smart");
  REQUIRE(w.size() == 2);
  CHECK(w[0] == "Fun-2-Learn");
  CHECK(w[1] == "Smart");
  CHECK(tokenize("Conditioner, 12 oz") == WordSequence{"Conditioner,", "12", "oz"});
}

TEST_CASE("tokenize/join round-trip is stable for normalized input") {
  std::mt19937_64 rng = make_rng(7, "roundtrip");
  const char* pool[] = {"Little", "People,", "12", "Fun-2-Learn", "a", "ＡＢ"};
  for (int iter = 0; iter < 200; ++iter) {
    WordSequence words;
    std::size_t n = rng_below(rng, 8);
    for (std::size_t i = 0; i < n; ++i) words.push_back(pool[rng_below(rng, 6)]);
    std::string text = join_words(words);
    CHECK(tokenize(text) == words);
    CHECK(join_words(tokenize(text)) == text);
  }
}

TEST_CASE("apply_edit keeps the original and logs the edit") {
  AttackedText t = AttackedText::from_text("Little People Surprise Sounds Fun Park");

  SUBCASE("word substitution") {
    AttackedText out = apply_edit(t, {Edit::Kind::SubstituteWord, 1, 0, "Inhabitants"});
    CHECK(out.text() == "Little Inhabitants Surprise Sounds Fun Park");
    CHECK(out.original() == t.original());
    CHECK(out.edits().size() == 1);
  }
  SUBCASE("adjacent char swap") {
    AttackedText out = apply_edit(t, {Edit::Kind::SwapAdjacentChars, 1, 0, ""});
    CHECK(out.text() == "Little ePople Surprise Sounds Fun Park");
  }
  SUBCASE("identity substitution still logged") {
    AttackedText out = apply_edit(t, {Edit::Kind::SubstituteWord, 0, 0, "Little"});
    CHECK(out.text() == t.text());
    CHECK(out.edits().size() == 1);
  }
  SUBCASE("punctuation insertion is interior-only") {
    AttackedText out = apply_edit(t, {Edit::Kind::InsertPunctuation, 1, 1, "-"});
    CHECK(out.text() == "Little P-eople Surprise Sounds Fun Park");
    CHECK_THROWS_AS(apply_edit(t, {Edit::Kind::InsertPunctuation, 1, 0, "-"}), OutOfRangeError);
  }
  SUBCASE("bad indices and whitespace payloads are rejected") {
    CHECK_THROWS_AS(apply_edit(t, {Edit::Kind::SubstituteWord, 9, 0, "x"}), OutOfRangeError);
    CHECK_THROWS_AS(apply_edit(t, {Edit::Kind::DeleteChar, 0, 99, ""}), OutOfRangeError);
    CHECK_THROWS_AS(apply_edit(t, {Edit::Kind::SubstituteChar, 0, 0, " "}), InvalidParamError);
    CHECK_THROWS_AS(apply_edit(t, {Edit::Kind::SubstituteWord, 0, 0, "two words"}),
                    InvalidParamError);
  }
}

TEST_CASE("edit replay reproduces the current sequence on random edit chains") {
  std::mt19937_64 rng = make_rng(11, "replay");
  for (int iter = 0; iter < 150; ++iter) {
    std::size_t n_words = 1 + rng_below(rng, 6);
    WordSequence words;
    for (std::size_t i = 0; i < n_words; ++i) {
      std::string w;
      std::size_t len = 2 + rng_below(rng, 6);
      for (std::size_t c = 0; c < len; ++c)
        w += static_cast<char>('a' + rng_below(rng, 26));
      words.push_back(w);
    }
    AttackedText t(words);
    std::size_t n_edits = rng_below(rng, 5);
    for (std::size_t e = 0; e < n_edits; ++e) {
      std::size_t idx = rng_below(rng, n_words);
      std::size_t word_len = codepoint_length(t.current()[idx]);
      switch (rng_below(rng, 4)) {
        case 0:
          t = apply_edit(t, {Edit::Kind::SubstituteWord, idx, 0, "sub"});
          break;
        case 1:
          t = apply_edit(t, {Edit::Kind::InsertChar, idx, rng_below(rng, word_len + 1), "q"});
          break;
        case 2:
          if (word_len >= 2)
            t = apply_edit(t, {Edit::Kind::DeleteChar, idx, rng_below(rng, word_len), ""});
          break;
        default:
          if (word_len >= 2)
            t = apply_edit(t, {Edit::Kind::SwapAdjacentChars, idx, rng_below(rng, word_len - 1), ""});
          break;
      }
    }
    CHECK(replay_edits(t.original(), t.edits()) == t.current());
  }
}

TEST_CASE("levenshtein matches the full DP oracle") {
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("kitten", "sitting") == oracle::levenshtein_full_dp("kitten", "sitting"));
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("People", "ePople") == oracle::levenshtein_full_dp("People", "ePople"));
  CHECK(levenshtein("People", "ePople") == 2);
  CHECK(levenshtein("", "abc") == 3);

  std::mt19937_64 rng = make_rng(3, "lev");
  for (int iter = 0; iter < 1000; ++iter) {
    auto rand_str = [&](std::size_t max_len) {
      std::string s;
      std::size_t len = rng_below(rng, max_len + 1);
      for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + rng_below(rng, 4));
      return s;
    };
    std::string a = rand_str(12), b = rand_str(12);
    CHECK(levenshtein(a, b) == oracle::levenshtein_full_dp(a, b));
  }
}

TEST_CASE("levenshtein symmetry, identity and triangle inequality") {
  std::mt19937_64 rng = make_rng(5, "lev-props");
  for (int iter = 0; iter < 300; ++iter) {
    auto rand_str = [&] {
      std::string s;
      std::size_t len = rng_below(rng, 9);
      for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('a' + rng_below(rng, 3));
      return s;
    };
    std::string a = rand_str(), b = rand_str(), c = rand_str();
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK(levenshtein(a, a) == 0);
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("levenshtein counts code points, not bytes") {
  // Two-byte UTF-8 sequences count as single units.
  CHECK(levenshtein("\xC3\xA9", "e") == 1);
  CHECK(levenshtein("caf\xC3\xA9", "cafe") == 1);
}

namespace {

void enumerate_sequences(std::size_t max_len, std::vector<std::vector<std::string>>& out) {
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  out.push_back({});
  std::vector<std::vector<std::string>> frontier = {{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& seq : frontier) {
      for (const std::string& s : alphabet) {
        auto extended = seq;
        extended.push_back(s);
        out.push_back(extended);
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

TEST_CASE("rouge_l agrees with LCS DP oracle on all sequences up to length 6") {
  // 3-symbol alphabet, lengths 0..6 on each side: exhaustive.
  std::vector<std::vector<std::string>> seqs;
  enumerate_sequences(6, seqs);
  REQUIRE(seqs.size() == 1093);
  for (const auto& ref : seqs) {
    for (const auto& cand : seqs) {
      double got = rouge_l(ref, cand);
      double want = oracle::rouge_l_from_lcs(ref, cand);
      CHECK(got == want);
    }
  }
}

TEST_CASE("rouge_l pinned examples") {
  CHECK(rouge_l({"x", "y"}, {"x", "y"}) == 1.0);
  CHECK(rouge_l({}, {}) == 1.0);
  CHECK(rouge_l({"a"}, {}) == 0.0);
  CHECK(rouge_l({"a", "b"}, {"c", "d"}) == 0.0);
  // ref "a b c d", cand "a c d": LCS=3, P=1, R=0.75, F=6/7.
  double f = rouge_l({"a", "b", "c", "d"}, {"a", "c", "d"});
  CHECK(f == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("perturbed_word_count derives from the final diff") {
  AttackedText t = AttackedText::from_text("one two three");
  CHECK(perturbed_word_count(t) == 0);

  AttackedText one = apply_edit(t, {Edit::Kind::SubstituteWord, 0, 0, "uno"});
  AttackedText two = apply_edit(one, {Edit::Kind::SwapAdjacentChars, 1, 0, ""});
  CHECK(perturbed_word_count(two) == 2);

  // Same word edited twice still counts once.
  AttackedText twice = apply_edit(one, {Edit::Kind::InsertChar, 0, 0, "x"});
  CHECK(twice.edits().size() == 2);
  CHECK(perturbed_word_count(twice) == 1);

  // An edit that restores the original token counts zero.
  AttackedText back = apply_edit(one, {Edit::Kind::SubstituteWord, 0, 0, "one"});
  CHECK(perturbed_word_count(back) == 0);
}

TEST_SUITE_END();
