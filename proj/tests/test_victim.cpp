#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <unordered_set>

#include "rta/errors.hpp"
#include "rta/io_util.hpp"
#include "rta/victim.hpp"

using namespace rta;

TEST_SUITE_BEGIN("victim");

namespace {

std::shared_ptr<Lexicon> axis_lexicon() {
  auto lex = std::make_shared<Lexicon>();
  lex->add_word("north", {1.0, 0.0, 0.0});
  lex->add_word("east", {0.0, 1.0, 0.0});
  lex->add_word("up", {0.0, 0.0, 1.0});
  lex->add_word("northish", {0.8, 0.6, 0.0});
  return lex;
}

Catalog axis_catalog() {
  return Catalog::from_items({{"i1", "North"},
                              {"i2", "East"},
                              {"i3", "Up"},
                              {"i4", "Northish"},
                              {"i5", "North East"}});
}

}  // namespace

TEST_CASE("fit produces unit vectors, flags OOV fallbacks, rejects bad input") {
  auto lex = axis_lexicon();
  FitReport report;
  Catalog catalog = Catalog::from_items({{"a", "North East"}, {"b", "zzz qqq"}, {"c", "Up"}});
  SimRec v = SimRec::fit(catalog, lex, 0.25, &report);

  CHECK(report.item_count == 3);
  CHECK(report.dim == 3);
  REQUIRE(report.fallback_items.size() == 1);
  CHECK(report.fallback_items[0] == "b");

  // All stored vectors are unit norm (fallback included).
  for (const char* title : {"North East", "zzz qqq", "Up"}) {
    std::vector<double> vec = v.embed_title(title);
    double norm = 0.0;
    for (double x : vec) norm += x * x;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Identical titles embed identically.
  CHECK(v.embed_title("North East") == v.embed_title("North East"));

  CHECK_THROWS_AS(SimRec::fit(Catalog{}, lex, 0.25), EmptyCatalogError);
  CHECK_THROWS_AS(SimRec::fit(catalog, lex, 0.0), InvalidParamError);
}

TEST_CASE("score is sigma(cos/tau) with one query per call") {
  auto lex = axis_lexicon();
  Catalog catalog = axis_catalog();
  QueryCounter ctr;

  SUBCASE("candidate identical to every history title") {
    SimRec v = SimRec::fit(catalog, lex, 0.5);
    std::vector<std::string> history{"North", "North"};
    double got = v.score(history, "North", ctr);
    CHECK(got == doctest::Approx(1.0 / (1.0 + std::exp(-1.0 / 0.5))).epsilon(1e-12));
    CHECK(ctr.count() == 1);
  }
  SUBCASE("orthogonal candidate scores one half") {
    SimRec v = SimRec::fit(catalog, lex, 0.25);
    std::vector<std::string> history{"North"};
    CHECK(v.score(history, "East", ctr) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("tau=0.2 cos=0.8 gives sigma(4)") {
    SimRec v = SimRec::fit(catalog, lex, 0.2);
    std::vector<std::string> history{"North"};
    // cos(north, northish) = 0.8 by construction.
    double got = v.score(history, "Northish", ctr);
    CHECK(got == doctest::Approx(1.0 / (1.0 + std::exp(-4.0))).epsilon(1e-9));
    CHECK(got == doctest::Approx(0.9820).epsilon(1e-4));
  }
  SUBCASE("empty history is an error") {
    SimRec v = SimRec::fit(catalog, lex, 0.25);
    CHECK_THROWS_AS(v.score({}, "North", ctr), EmptyHistoryError);
  }
}

TEST_CASE("determinism: identical inputs give bit-identical scores") {
  auto lex = axis_lexicon();
  SimRec v = SimRec::fit(axis_catalog(), lex, 0.25);
  QueryCounter ctr;
  std::vector<std::string> history{"North East", "Up"};
  double a = v.score(history, "Northish", ctr);
  double b = v.score(history, "Northish", ctr);
  CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
}

TEST_CASE("rank_topk ordering, ties, exclusion and brute-force agreement") {
  auto lex = axis_lexicon();
  Catalog catalog = axis_catalog();
  SimRec v = SimRec::fit(catalog, lex, 0.25);
  QueryCounter ctr;
  std::vector<std::string> history{"North"};

  SUBCASE("k >= catalog size returns the full ordering") {
    auto ranked = v.rank_topk(history, 50, catalog, false, ctr);
    CHECK(ranked.size() == catalog.size());
    CHECK(ctr.count() == 1);  // one ranking call = one query

    // Brute-force oracle: score each item individually and sort.
    QueryCounter scratch;
    std::vector<std::pair<double, std::string>> brute;
    for (const std::string& id : catalog.ids())
      brute.emplace_back(-v.score(history, catalog.title(id), scratch), id);
    std::sort(brute.begin(), brute.end());
    for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(ranked[i] == brute[i].second);
  }
  SUBCASE("ties break toward the lower item id") {
    Catalog tied = Catalog::from_items({{"z9", "East"}, {"a1", "East"}, {"m5", "North"}});
    SimRec tv = SimRec::fit(tied, lex, 0.25);
    auto ranked = tv.rank_topk(history, 3, tied, false, ctr);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0] == "m5");
    CHECK(ranked[1] == "a1");
    CHECK(ranked[2] == "z9");
  }
  SUBCASE("history exclusion removes matching titles") {
    auto ranked = v.rank_topk(history, 5, catalog, true, ctr);
    for (const auto& id : ranked) CHECK(catalog.title(id) != "North");
  }
  SUBCASE("no duplicates; all ids in catalog") {
    auto ranked = v.rank_topk(history, 5, catalog, false, ctr);
    std::unordered_set<std::string> seen;
    for (const auto& id : ranked) {
      CHECK(catalog.contains(id));
      CHECK(seen.insert(id).second);
    }
  }
  SUBCASE("title overrides re-embed on the fly") {
    Catalog perturbed = catalog.with_title("i3", "North");
    auto ranked = v.rank_topk(history, 2, perturbed, false, ctr);
    // i3 now embeds exactly like i1; ties by id put i1 first, i3 second.
    CHECK(ranked[0] == "i1");
    CHECK(ranked[1] == "i3");
  }
}

TEST_CASE("exposure_estimate counts sampled users with the item on top") {
  auto lex = axis_lexicon();
  Catalog catalog = axis_catalog();
  SimRec v = SimRec::fit(catalog, lex, 0.25);
  InteractionLog log = InteractionLog::from_entries(
      {{"u1", {"i1"}}, {"u2", {"i2"}}, {"u3", {"i1", "i4"}}}, catalog);
  QueryCounter ctr;
  std::vector<std::string> sample{"u1", "u2", "u3"};

  double exp_i1 = exposure_estimate(v, "i4", sample, 2, log, catalog, ctr);
  CHECK(ctr.count() == 3);  // one ranking per sampled user

  // Oracle re-rank: per-user membership check.
  QueryCounter scratch;
  std::size_t hits = 0;
  for (const auto& user : sample) {
    auto titles = history_titles(log, catalog, user);
    auto top = v.rank_topk(titles, 2, catalog, true, scratch);
    hits += std::find(top.begin(), top.end(), std::string("i4")) != top.end();
  }
  CHECK(exp_i1 == doctest::Approx(static_cast<double>(hits) / 3.0));

  CHECK_THROWS_AS(exposure_estimate(v, "nope", sample, 2, log, catalog, ctr), UnknownItemError);
  CHECK_THROWS_AS(exposure_estimate(v, "i1", {}, 2, log, catalog, ctr), EmptySampleError);
}

TEST_CASE("persisted model reloads identically and refits byte-identically") {
  auto lex = axis_lexicon();
  Catalog catalog = axis_catalog();
  SimRec v = SimRec::fit(catalog, lex, 0.25);

  std::string p1 = "/tmp/rta_test_simrec1.txt";
  std::string p2 = "/tmp/rta_test_simrec2.txt";
  v.save(p1);
  SimRec::fit(catalog, lex, 0.25).save(p2);
  CHECK(read_file(p1) == read_file(p2));

  std::string header = read_file(p1).substr(0, read_file(p1).find('\n'));
  CHECK(header == "simrec v1 d=3 tau=0.25");

  SimRec loaded = SimRec::load(p1, lex);
  QueryCounter c1, c2;
  std::vector<std::string> history{"North East"};
  Catalog probe = catalog;
  CHECK(loaded.rank_topk(history, 3, probe, false, c1) ==
        v.rank_topk(history, 3, probe, false, c2));
  CHECK(loaded.tau() == v.tau());

  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("prompt renderer covers the four wire styles") {
  std::vector<std::string> history{"Title A", "Title B"};
  CHECK(render_prompt(PromptStyle::TitleList, history, "X") == "Title A, Title B");
  CHECK(render_prompt(PromptStyle::DirectRec, history, "X", "u7") ==
        "I would like to recommend some items for u7. Is the following item a good choice? X");
  CHECK(render_prompt(PromptStyle::RatingQuery, history, "X") ==
        "A user has given high ratings to the following products: Title A, Title B. Leverage the "
        "information to predict whether the user would enjoy the product titled X? Answer with "
        "\"Yes\" or \"No\".");
  CHECK(render_prompt(PromptStyle::RatingQueryWithIds, history, "X", "u7", "i9") ==
        "A user has given high ratings to the following products: Title A, Title B. Additionally, "
        "we have information about the user's preferences encoded in the feature u7. Using all "
        "available information, make a prediction about whether the user would enjoy the product "
        "titled X with the feature i9? Answer with \"Yes\" or \"No\"");
}

TEST_SUITE_END();
