#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rta/errors.hpp"
#include "rta/lexicon.hpp"

using namespace rta;

TEST_SUITE_BEGIN("lexicon");

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/rta_test_" + name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_embeddings ingests rows and reports duplicates") {
  TempFile f("emb.txt",
             "alpha 1 0 0 0\n"
             "beta 0 1 0 0\n"
             "gamma 0 0 1 0\n");
  Lexicon lex = Lexicon::load_embeddings(f.path);
  CHECK(lex.size() == 3);
  CHECK(lex.dim() == 4);
  CHECK(lex.contains("alpha"));
  CHECK(lex.contains("ALPHA"));  // case-folded lookup

  SUBCASE("duplicate word keeps the last row and warns") {
    TempFile dup("emb_dup.txt", "a 1 0\nb 0 1\na 0.5 0.5\n");
    std::vector<std::string> warnings;
    Lexicon l = Lexicon::load_embeddings(dup.path, &warnings);
    CHECK(l.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("line 3") != std::string::npos);
    CHECK(l.vector_of("a")[0] == doctest::Approx(0.5));
  }
  SUBCASE("malformed row names the line") {
    TempFile bad("emb_bad.txt", "a 1 0\nb 0 oops\n");
    CHECK_THROWS_WITH_AS(Lexicon::load_embeddings(bad.path),
                         doctest::Contains("line 2"), ParseError);
  }
  SUBCASE("inconsistent dimension is a parse error") {
    TempFile bad("emb_dim.txt", "a 1 0\nb 0 1 0\n");
    CHECK_THROWS_AS(Lexicon::load_embeddings(bad.path), ParseError);
  }
  SUBCASE("empty file loads an empty lexicon") {
    TempFile empty("emb_empty.txt", "");
    Lexicon l = Lexicon::load_embeddings(empty.path);
    CHECK(l.size() == 0);
  }
  SUBCASE("missing file is an IO error") {
    CHECK_THROWS_AS(Lexicon::load_embeddings("/nonexistent/emb.txt"), IoError);
  }
}

TEST_CASE("nearest_neighbors honours the cosine floor and ordering") {
  Lexicon lex;
  lex.add_word("w1", {1.0, 0.0});
  lex.add_word("w2", {0.9, std::sqrt(1.0 - 0.81)});  // cos(w1,w2) = 0.9
  lex.add_word("w3", {0.3, std::sqrt(1.0 - 0.09)});  // cos(w1,w3) = 0.3

  SUBCASE("floor filters") {
    auto got = lex.nearest_neighbors("w1", 5, 0.6);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == "w2");
  }
  SUBCASE("k=0 empty") { CHECK(lex.nearest_neighbors("w1", 0, 0.0).empty()); }
  SUBCASE("unknown word throws") {
    CHECK_THROWS_AS(lex.nearest_neighbors("nope", 3, 0.0), UnknownWordError);
  }
  SUBCASE("never returns the query word; floor re-checks hold") {
    auto got = lex.nearest_neighbors("w1", 5, -1.0);
    CHECK(got.size() == 2);
    for (const auto& w : got) {
      CHECK(w != "w1");
      CHECK(Lexicon::cosine(lex.vector_of("w1"), lex.vector_of(w)) >= -1.0);
    }
    CHECK(got[0] == "w2");  // descending cosine
    CHECK(got[1] == "w3");
  }
  SUBCASE("ties break lexicographically") {
    Lexicon tied;
    tied.add_word("q", {1.0, 0.0});
    tied.add_word("zz", {0.0, 1.0});
    tied.add_word("aa", {0.0, 1.0});
    auto got = tied.nearest_neighbors("q", 2, -1.0);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == "aa");
    CHECK(got[1] == "zz");
  }
}

TEST_CASE("sentence_cosine uses mean word vectors and skips unknowns") {
  Lexicon lex;
  lex.add_word("a", {1.0, 0.0});
  lex.add_word("b", {0.0, 1.0});
  lex.add_word("c", {1.0, 1.0});

  SUBCASE("identical sequences with known words score 1") {
    CHECK(lex.sentence_cosine({"a", "b"}, {"a", "b"}) == doctest::Approx(1.0));
  }
  SUBCASE("orthogonal by construction") {
    CHECK(lex.sentence_cosine({"a"}, {"b"}) == doctest::Approx(0.0));
  }
  SUBCASE("hand-computed mean-vector cosine") {
    // mean(a,b) = (.5,.5); mean(a,c) = (1,.5)
    double expect = (0.5 * 1.0 + 0.5 * 0.5) /
                    (std::sqrt(0.5) * std::sqrt(1.25));
    CHECK(lex.sentence_cosine({"a", "b"}, {"a", "c"}) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("unknown words are skipped") {
    CHECK(lex.sentence_cosine({"a", "zzz"}, {"a"}) == doctest::Approx(1.0));
  }
  SUBCASE("no known words: 1 only when token-identical") {
    CHECK(lex.sentence_cosine({"xx", "yy"}, {"xx", "yy"}) == 1.0);
    CHECK(lex.sentence_cosine({"xx"}, {"yy"}) == 0.0);
  }
}

TEST_CASE("angular similarity maps cosine onto [0,1]") {
  CHECK(Lexicon::angular_similarity(1.0) == doctest::Approx(1.0));
  CHECK(Lexicon::angular_similarity(0.0) == doctest::Approx(0.5));
  CHECK(Lexicon::angular_similarity(-1.0) == doctest::Approx(0.0));
}

TEST_CASE("pos lookups fall back to UNK and keep priority order") {
  Lexicon lex;
  lex.add_pos("park", PosTag::Noun);
  CHECK(lex.pos_tag("park") == PosTag::Noun);
  CHECK(lex.pos_tag("PARK") == PosTag::Noun);
  CHECK(lex.pos_tag("unknown") == PosTag::Unk);

  // Two tags in the source data: NOUN > VERB > ADJ > ADV > OTHER.
  lex.add_pos("run", PosTag::Verb);
  lex.add_pos("run", PosTag::Noun);
  CHECK(lex.pos_tag("run") == PosTag::Noun);
  lex.add_pos("soft", PosTag::Adv);
  lex.add_pos("soft", PosTag::Adj);
  CHECK(lex.pos_tag("soft") == PosTag::Adj);

  TempFile f("pos.txt", "park NOUN\nrun VERB\nrun NOUN\n");
  Lexicon from_file;
  from_file.load_pos(f.path);
  CHECK(from_file.pos_tag("run") == PosTag::Noun);
}

TEST_CASE("stopword list ships 179 entries") {
  CHECK(default_stopwords().size() == 179);
  Lexicon lex;
  std::vector<std::string> stops;
  for (std::string_view w : default_stopwords()) stops.emplace_back(w);
  lex.set_stopwords(stops);
  CHECK(lex.is_stopword("the"));
  CHECK(lex.is_stopword("The"));
  CHECK(!lex.is_stopword("park"));
}

TEST_SUITE_END();
