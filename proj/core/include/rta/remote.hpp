#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "rta/victim.hpp"

namespace rta {

struct RemoteVictimConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8080
  int timeout_ms = 5000;
  int retries = 0;  // additional attempts after a failure
  PromptStyle prompt_style = PromptStyle::None;
};

/// Wire client for a deployed victim. POST /score with
/// {"history": [...], "candidate": str, "prompt": str|null} -> {"score": x};
/// POST /rank with {"history": [...], "k": n} -> {"item_ids": [...]}.
/// A successful query counts once regardless of retries; failed attempts
/// accumulate in retry_count().
class RemoteVictim final : public VictimModel {
 public:
  explicit RemoteVictim(RemoteVictimConfig config);

  double score(std::span<const std::string> history_titles, const std::string& candidate_title,
               QueryCounter& ctr) const override;
  std::vector<std::string> rank_topk(std::span<const std::string> history_titles, std::size_t k,
                                     const Catalog& catalog, bool exclude_history,
                                     QueryCounter& ctr) const override;
  bool supports_title_overrides() const override { return false; }
  std::string id() const override { return "remote(" + config_.endpoint + ")"; }

  std::uint64_t retry_count() const { return retries_used_.load(); }

 private:
  std::string post_json(const std::string& route, const std::string& body) const;

  RemoteVictimConfig config_;
  mutable std::atomic<std::uint64_t> retries_used_{0};
};

struct RewriterConfig {
  std::string endpoint;
  int timeout_ms = 10000;
  std::string api_key_header = "X-Api-Key";  // value read from REWRITER_API_KEY
};

/// POST /rewrite {"prompt": str} -> {"text": str}. Returns the first
/// non-empty line of the response text, trailing whitespace stripped.
class RewriterClient {
 public:
  explicit RewriterClient(RewriterConfig config);
  std::string rewrite(const std::string& prompt) const;

 private:
  RewriterConfig config_;
  std::string api_key_;
};

}  // namespace rta
