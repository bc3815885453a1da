#include "rta/remote.hpp"

#include <algorithm>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "rta/errors.hpp"

namespace rta {

using nlohmann::json;

namespace {

// httplib wants host and path split apart.
struct Endpoint {
  std::string host;  // scheme://host:port
  std::string base_path;
};

Endpoint split_endpoint(const std::string& endpoint) {
  std::string rest = endpoint;
  std::string scheme = "http://";
  auto scheme_pos = rest.find("://");
  if (scheme_pos != std::string::npos) {
    scheme = rest.substr(0, scheme_pos + 3);
    rest = rest.substr(scheme_pos + 3);
  }
  auto slash = rest.find('/');
  if (slash == std::string::npos) return {scheme + rest, ""};
  std::string path = rest.substr(slash);
  if (path == "/") path.clear();
  return {scheme + rest.substr(0, slash), path};
}

}  // namespace

RemoteVictim::RemoteVictim(RemoteVictimConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw InvalidParamError("remote victim endpoint required");
}

std::string RemoteVictim::post_json(const std::string& route, const std::string& body) const {
  Endpoint ep = split_endpoint(config_.endpoint);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) retries_used_.fetch_add(1);
    httplib::Client client(ep.host);
    client.set_connection_timeout(0, config_.timeout_ms * 1000);
    client.set_read_timeout(0, config_.timeout_ms * 1000);
    client.set_write_timeout(0, config_.timeout_ms * 1000);
    auto res = client.Post((ep.base_path + route).c_str(), body, "application/json");
    if (!res) {
      last_error = "no response (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    return res->body;
  }
  if (last_error.find("no response") != std::string::npos)
    throw TimeoutError("remote victim unreachable at " + config_.endpoint + ": " + last_error);
  throw RemoteError("remote victim error at " + config_.endpoint + ": " + last_error);
}

double RemoteVictim::score(std::span<const std::string> history_titles,
                           const std::string& candidate_title, QueryCounter& ctr) const {
  if (history_titles.empty()) throw EmptyHistoryError("history must be non-empty");
  json req;
  req["history"] = std::vector<std::string>(history_titles.begin(), history_titles.end());
  req["candidate"] = candidate_title;
  if (config_.prompt_style == PromptStyle::None)
    req["prompt"] = nullptr;
  else
    req["prompt"] = render_prompt(config_.prompt_style, history_titles, candidate_title);

  std::string body = post_json("/score", req.dump());
  json res = json::parse(body, nullptr, false);
  if (res.is_discarded() || !res.is_object() || !res.contains("score") ||
      !res["score"].is_number())
    throw ProtocolError("malformed /score response: " + body);
  double score = res["score"].get<double>();
  if (score < 0.0 || score > 1.0)
    throw ProtocolError("score out of [0,1]: " + std::to_string(score));
  ctr.increment();
  return score;
}

std::vector<std::string> RemoteVictim::rank_topk(std::span<const std::string> history_titles,
                                                 std::size_t k, const Catalog& catalog,
                                                 bool exclude_history, QueryCounter& ctr) const {
  if (history_titles.empty()) throw EmptyHistoryError("history must be non-empty");
  if (k == 0) throw InvalidParamError("k must be >= 1");
  if (!catalog.overrides().empty())
    throw InvalidParamError("remote victim cannot rank a catalog with title overrides");

  // The wire protocol has no exclusion flag; over-fetch and filter locally.
  std::size_t fetch = exclude_history ? k + history_titles.size() : k;
  json req;
  req["history"] = std::vector<std::string>(history_titles.begin(), history_titles.end());
  req["k"] = fetch;
  std::string body = post_json("/rank", req.dump());
  json res = json::parse(body, nullptr, false);
  if (res.is_discarded() || !res.is_object() || !res.contains("item_ids") ||
      !res["item_ids"].is_array())
    throw ProtocolError("malformed /rank response: " + body);
  std::vector<std::string> ids;
  for (const json& v : res["item_ids"]) {
    if (!v.is_string()) throw ProtocolError("malformed /rank response: " + body);
    ids.push_back(v.get<std::string>());
  }
  if (exclude_history) {
    std::vector<std::string> kept;
    for (std::string& id : ids) {
      bool in_history = catalog.contains(id) &&
                        std::find(history_titles.begin(), history_titles.end(),
                                  catalog.title(id)) != history_titles.end();
      if (!in_history) kept.push_back(std::move(id));
    }
    ids = std::move(kept);
  }
  if (ids.size() > k) ids.resize(k);
  ctr.increment();
  return ids;
}

RewriterClient::RewriterClient(RewriterConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw InvalidParamError("rewriter endpoint required");
  const char* key = std::getenv("REWRITER_API_KEY");
  if (key) api_key_ = key;
}

std::string RewriterClient::rewrite(const std::string& prompt) const {
  Endpoint ep = split_endpoint(config_.endpoint);
  httplib::Client client(ep.host);
  client.set_connection_timeout(0, config_.timeout_ms * 1000);
  client.set_read_timeout(0, config_.timeout_ms * 1000);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace(config_.api_key_header, api_key_);

  json req{{"prompt", prompt}};
  auto res = client.Post((ep.base_path + "/rewrite").c_str(), headers, req.dump(),
                         "application/json");
  if (!res) throw TimeoutError("rewriter unreachable at " + config_.endpoint);
  if (res->status < 200 || res->status >= 300)
    throw RemoteError("rewriter error: status " + std::to_string(res->status));
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("text") ||
      !body["text"].is_string())
    throw ProtocolError("malformed /rewrite response: " + res->body);

  // First non-empty line, trailing whitespace stripped.
  std::string text = body["text"].get<std::string>();
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string line = text.substr(start, nl == std::string::npos ? nl : nl - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string::npos) return line.substr(first);
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  throw EmptyResponseError("rewriter returned no usable text");
}

}  // namespace rta
