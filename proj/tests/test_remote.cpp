#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rta/errors.hpp"
#include "rta/remote.hpp"

using namespace rta;
using nlohmann::json;

TEST_SUITE_BEGIN("remote");

namespace {

// One server per fixture, bound to an ephemeral port.
struct MockServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit MockServer() = default;

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port); }

  ~MockServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
};

}  // namespace

TEST_CASE("score passes through and counts one query") {
  MockServer mock;
  mock.server.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body);
    REQUIRE(body.contains("history"));
    REQUIRE(body.contains("candidate"));
    REQUIRE(body.contains("prompt"));
    CHECK(body["prompt"].is_null());
    res.set_content(R"({"score": 0.7})", "application/json");
  });
  mock.start();

  RemoteVictim victim({mock.endpoint(), 2000, 0, PromptStyle::None});
  QueryCounter ctr;
  std::vector<std::string> history{"A", "B"};
  CHECK(victim.score(history, "C", ctr) == doctest::Approx(0.7));
  CHECK(ctr.count() == 1);
  CHECK(victim.retry_count() == 0);
}

TEST_CASE("prompt style renders into the optional prompt field") {
  MockServer mock;
  std::string seen_prompt;
  mock.server.Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    seen_prompt = json::parse(req.body)["prompt"].get<std::string>();
    res.set_content(R"({"score": 0.5})", "application/json");
  });
  mock.start();

  RemoteVictim victim({mock.endpoint(), 2000, 0, PromptStyle::TitleList});
  QueryCounter ctr;
  std::vector<std::string> history{"A", "B"};
  victim.score(history, "C", ctr);
  CHECK(seen_prompt == "A, B");
}

TEST_CASE("non-numeric score body is a protocol error") {
  MockServer mock;
  mock.server.Post("/score", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("not json at all", "text/plain");
  });
  mock.start();

  RemoteVictim victim({mock.endpoint(), 2000, 0, PromptStyle::None});
  QueryCounter ctr;
  std::vector<std::string> history{"A"};
  CHECK_THROWS_AS(victim.score(history, "C", ctr), ProtocolError);
  CHECK(ctr.count() == 0);  // failed calls never count as queries
}

TEST_CASE("transient failure then success: one query, one retry recorded") {
  MockServer mock;
  std::atomic<int> calls{0};
  mock.server.Post("/score", [&](const httplib::Request&, httplib::Response& res) {
    if (calls.fetch_add(1) == 0) {
      res.status = 500;
      return;
    }
    res.set_content(R"({"score": 0.42})", "application/json");
  });
  mock.start();

  RemoteVictim victim({mock.endpoint(), 2000, 1, PromptStyle::None});
  QueryCounter ctr;
  std::vector<std::string> history{"A"};
  CHECK(victim.score(history, "C", ctr) == doctest::Approx(0.42));
  CHECK(ctr.count() == 1);
  CHECK(victim.retry_count() == 1);
}

TEST_CASE("persistent non-2xx surfaces as RemoteError") {
  MockServer mock;
  mock.server.Post("/score", [](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  mock.start();

  RemoteVictim victim({mock.endpoint(), 2000, 1, PromptStyle::None});
  QueryCounter ctr;
  std::vector<std::string> history{"A"};
  CHECK_THROWS_AS(victim.score(history, "C", ctr), RemoteError);
  CHECK(victim.retry_count() == 1);
}

TEST_CASE("rank round-trips ids and applies client-side exclusion") {
  MockServer mock;
  mock.server.Post("/rank", [](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body);
    CHECK(body["k"].get<int>() >= 2);
    res.set_content(R"({"item_ids": ["i1", "i2", "i3"]})", "application/json");
  });
  mock.start();

  Catalog catalog = Catalog::from_items({{"i1", "Alpha"}, {"i2", "Beta"}, {"i3", "Gamma"}});
  RemoteVictim victim({mock.endpoint(), 2000, 0, PromptStyle::None});
  QueryCounter ctr;

  std::vector<std::string> history{"Beta"};
  auto ranked = victim.rank_topk(history, 2, catalog, true, ctr);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0] == "i1");
  CHECK(ranked[1] == "i3");  // i2's title is in the history
  CHECK(ctr.count() == 1);

  // Overridden catalogs cannot be ranked remotely.
  Catalog perturbed = catalog.with_title("i1", "Zeta");
  CHECK_THROWS_AS(victim.rank_topk(history, 2, perturbed, true, ctr), InvalidParamError);
}

TEST_CASE("unreachable endpoint raises TimeoutError") {
  RemoteVictim victim({"http://127.0.0.1:1", 200, 0, PromptStyle::None});
  QueryCounter ctr;
  std::vector<std::string> history{"A"};
  CHECK_THROWS_AS(victim.score(history, "C", ctr), TimeoutError);
}

TEST_CASE("rewriter client renders, sends, and normalizes the reply") {
  MockServer mock;
  std::string seen_prompt;
  std::string seen_key_header;
  mock.server.Post("/rewrite", [&](const httplib::Request& req, httplib::Response& res) {
    seen_prompt = json::parse(req.body)["prompt"].get<std::string>();
    if (req.has_header("X-Api-Key")) seen_key_header = req.get_header_value("X-Api-Key");
    res.set_content(R"({"text": "\n  \n  Shiny New Title   \nsecond line"})", "application/json");
  });
  mock.start();

  setenv("REWRITER_API_KEY", "sekrit", 1);
  RewriterClient client({mock.endpoint(), 2000, "X-Api-Key"});
  unsetenv("REWRITER_API_KEY");

  std::string out = client.rewrite("hello");
  CHECK(out == "Shiny New Title");
  CHECK(seen_prompt == "hello");
  CHECK(seen_key_header == "sekrit");

  SUBCASE("blank reply is EmptyResponseError") {
    MockServer blank;
    blank.server.Post("/rewrite", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"text": "  \n \n"})", "application/json");
    });
    blank.start();
    RewriterClient c2({blank.endpoint(), 2000, "X-Api-Key"});
    CHECK_THROWS_AS(c2.rewrite("x"), EmptyResponseError);
  }
}

TEST_SUITE_END();
