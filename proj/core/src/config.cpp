#include "rta/config.hpp"

#include <fstream>

#include "rta/errors.hpp"

namespace rta {

using nlohmann::json;

namespace {

void require_fraction(double v, const char* name) {
  if (!(v > 0.0) || v > 1.0)
    throw InvalidParamError(std::string(name) + " must be in (0, 1]");
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  if (!j.contains("seed")) throw InvalidParamError("config requires an explicit seed");
  c.seed = j.at("seed").get<std::uint64_t>();

  c.catalog = j.value("catalog", "");
  c.interactions = j.value("interactions", "");
  c.embeddings = j.value("embeddings", "");
  c.stopwords = j.value("stopwords", "");
  c.pos = j.value("pos", "");

  if (j.contains("victim")) {
    const json& v = j.at("victim");
    c.victim.kind = v.value("kind", "simrec");
    c.victim.tau = v.value("tau", 0.25);
    c.victim.model_path = v.value("model", "");
    c.victim.endpoint = v.value("endpoint", "");
    c.victim.timeout_ms = v.value("timeout_ms", 5000);
    c.victim.retries = v.value("retries", 0);
    c.victim.prompt_style = v.value("prompt_style", "none");
    if (c.victim.kind != "simrec" && c.victim.kind != "remote")
      throw InvalidParamError("victim.kind must be simrec or remote");
    if (!(c.victim.tau > 0.0)) throw InvalidParamError("victim.tau must be > 0");
  }

  if (j.contains("recipe")) c.recipe = j.at("recipe");

  if (j.contains("targets")) {
    const json& t = j.at("targets");
    c.targets.mode = t.value("mode", "random");
    c.targets.fraction = t.value("fraction", 0.10);
    c.targets.items = t.value("items", std::vector<std::string>{});
    c.targets.top = t.value("top", std::size_t{0});
    c.targets.bottom = t.value("bottom", std::size_t{0});
    if (c.targets.mode != "random" && c.targets.mode != "explicit" &&
        c.targets.mode != "popularity")
      throw InvalidParamError("targets.mode must be random, explicit or popularity");
    if (c.targets.mode == "random") require_fraction(c.targets.fraction, "targets.fraction");
    if (c.targets.mode == "explicit" && c.targets.items.empty())
      throw InvalidParamError("targets.items must be non-empty in explicit mode");
    if (c.targets.mode == "popularity" && c.targets.top == 0 && c.targets.bottom == 0)
      throw InvalidParamError("popularity targets need top and/or bottom counts");
  }

  c.k = j.value("k", std::size_t{50});
  c.holdout_k = j.value("holdout_k", std::size_t{10});
  if (c.k < 1 || c.holdout_k < 1) throw InvalidParamError("k must be >= 1");
  c.user_sample_fraction = j.value("user_sample_fraction", 0.10);
  require_fraction(c.user_sample_fraction, "user_sample_fraction");
  c.min_user_sample = j.value("min_user_sample", std::size_t{10});
  if (j.contains("max_queries")) c.max_queries = j.at("max_queries").get<std::uint64_t>();
  c.goal_mode = j.value("goal_mode", "exposure");
  if (c.goal_mode != "exposure" && c.goal_mode != "propensity")
    throw InvalidParamError("goal_mode must be exposure or propensity");
  if (j.contains("goal_threshold")) c.goal_threshold = j.at("goal_threshold").get<double>();
  c.jobs = j.value("jobs", 1);
  if (c.jobs < 1) throw InvalidParamError("jobs must be >= 1");

  c.output_dir = j.value("output_dir", "out");
  c.results = j.value("results", "");
  c.transfer_from = j.value("transfer_from", "");
  c.trivial_k = j.value("trivial_k", std::size_t{2});

  if (j.contains("shill")) {
    const json& s = j.at("shill");
    c.shill.policy = s.value("policy", "bandwagon");
    c.shill.n_fake = s.value("n_fake", std::vector<std::size_t>{100});
    c.shill.fillers_per_user = s.value("fillers_per_user", std::size_t{10});
  }

  if (j.contains("defense")) {
    const json& d = j.at("defense");
    c.defense_punct_chars = d.value("punct_chars", "'-");
    c.defense_max_edit = d.value("max_edit", std::size_t{2});
  }

  if (j.contains("rewriter")) {
    const json& r = j.at("rewriter");
    c.rewriter_endpoint = r.value("endpoint", "");
    c.rewriter_timeout_ms = r.value("timeout_ms", 10000);
    c.rewriter_api_key_header = r.value("api_key_header", "X-Api-Key");
  }
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["catalog"] = catalog;
  j["interactions"] = interactions;
  j["embeddings"] = embeddings;
  j["stopwords"] = stopwords;
  j["pos"] = pos;
  j["victim"] = {{"kind", victim.kind},         {"tau", victim.tau},
                 {"model", victim.model_path},  {"endpoint", victim.endpoint},
                 {"timeout_ms", victim.timeout_ms}, {"retries", victim.retries},
                 {"prompt_style", victim.prompt_style}};
  j["recipe"] = recipe;
  j["targets"] = {{"mode", targets.mode},
                  {"fraction", targets.fraction},
                  {"items", targets.items},
                  {"top", targets.top},
                  {"bottom", targets.bottom}};
  j["seed"] = seed;
  j["k"] = k;
  j["holdout_k"] = holdout_k;
  j["user_sample_fraction"] = user_sample_fraction;
  j["min_user_sample"] = min_user_sample;
  if (max_queries) j["max_queries"] = *max_queries;
  j["goal_mode"] = goal_mode;
  if (goal_threshold) j["goal_threshold"] = *goal_threshold;
  j["jobs"] = jobs;
  j["output_dir"] = output_dir;
  j["results"] = results;
  j["transfer_from"] = transfer_from;
  j["trivial_k"] = trivial_k;
  j["shill"] = {{"policy", shill.policy},
                {"n_fake", shill.n_fake},
                {"fillers_per_user", shill.fillers_per_user}};
  j["defense"] = {{"punct_chars", defense_punct_chars}, {"max_edit", defense_max_edit}};
  j["rewriter"] = {{"endpoint", rewriter_endpoint},
                   {"timeout_ms", rewriter_timeout_ms},
                   {"api_key_header", rewriter_api_key_header}};
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw InvalidParamError("override must look like key=value: " + assignment);
  std::string path = assignment.substr(0, eq);
  std::string raw = assignment.substr(eq + 1);

  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // plain strings need no quotes

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw InvalidParamError("bad override path: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig RunConfig::load(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("bad config JSON: " + path);
  for (const std::string& o : overrides) apply_override(j, o);
  return from_json(j);
}

}  // namespace rta
