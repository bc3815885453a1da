#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace rta {

struct VictimConfig {
  std::string kind = "simrec";  // simrec | remote
  double tau = 0.25;
  std::string model_path;  // persisted simrec; empty means fit in-process
  std::string endpoint;
  int timeout_ms = 5000;
  int retries = 0;
  std::string prompt_style = "none";
};

struct TargetsConfig {
  std::string mode = "random";  // random | explicit | popularity
  double fraction = 0.10;
  std::vector<std::string> items;
  std::size_t top = 0;
  std::size_t bottom = 0;
};

struct ShillConfig {
  std::string policy = "bandwagon";
  std::vector<std::size_t> n_fake = {100};
  std::size_t fillers_per_user = 10;
};

/// One JSON document drives every subcommand; any field can be overridden
/// with --key=value flags (dotted paths reach nested fields), flags win.
struct RunConfig {
  std::string catalog;
  std::string interactions;
  std::string embeddings;
  std::string stopwords;
  std::string pos;

  VictimConfig victim;
  nlohmann::json recipe = "textfooler";  // name, file path, or inline object
  TargetsConfig targets;

  std::uint64_t seed = 0;
  std::size_t k = 50;
  std::size_t holdout_k = 10;
  double user_sample_fraction = 0.10;
  std::size_t min_user_sample = 10;
  std::optional<std::uint64_t> max_queries;
  std::string goal_mode = "exposure";
  std::optional<double> goal_threshold;
  int jobs = 1;

  std::string output_dir = "out";
  std::string results;        // input results.jsonl for defend / transfer
  std::string transfer_from;  // adversarial titles to re-score instead of searching
  ShillConfig shill;
  std::size_t trivial_k = 2;

  std::string defense_punct_chars = "'-";
  std::size_t defense_max_edit = 2;

  std::string rewriter_endpoint;
  int rewriter_timeout_ms = 10000;
  std::string rewriter_api_key_header = "X-Api-Key";

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Loads the file then applies `--key=value` overrides in order.
  static RunConfig load(const std::string& path, const std::vector<std::string>& overrides);
};

/// Sets a dotted path like `victim.tau=0.3` in a JSON document; values parse
/// as JSON when possible and fall back to strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace rta
