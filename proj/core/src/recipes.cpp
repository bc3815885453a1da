#include <fstream>

#include "rta/attack.hpp"
#include "rta/errors.hpp"
#include "rta/io_util.hpp"

namespace rta {

using nlohmann::json;

std::vector<std::string> builtin_recipe_names() {
  return {"deepwordbug", "puncattack", "textfooler", "bertattack"};
}

bool is_builtin_recipe(std::string_view name) {
  for (const std::string& n : builtin_recipe_names())
    if (n == name) return true;
  return false;
}

Recipe builtin_recipe(std::string_view name) {
  Recipe r;
  r.name = std::string(name);
  r.goal = GoalConfig{GoalMode::Exposure, 0.05, 50};
  r.search = SearchMethod::GreedyWir;
  r.max_queries = 500;

  auto repeat = Constraint{Constraint::Kind::RepeatModification};
  auto stopword = Constraint{Constraint::Kind::StopwordModification};

  if (name == "deepwordbug") {
    r.transformation.kind = Transformation::Kind::CharComposite;
    Constraint lev{Constraint::Kind::LevenshteinMax};
    lev.max_distance = 30;
    r.constraints = {repeat, stopword, lev};
    return r;
  }
  if (name == "puncattack") {
    r.transformation.kind = Transformation::Kind::PunctuationInsertion;
    r.transformation.chars = "'-";
    Constraint emb{Constraint::Kind::EmbeddingDistance};
    emb.min_cos = 0.6;
    Constraint pos{Constraint::Kind::PartOfSpeech};
    pos.allow_verb_noun_swap = true;
    Constraint sim{Constraint::Kind::SentenceSimilarity};
    sim.threshold = 0.8;
    sim.metric = SimMetric::Cosine;
    r.constraints = {repeat, stopword, emb, pos, sim};
    return r;
  }
  if (name == "textfooler") {
    r.transformation.kind = Transformation::Kind::EmbeddingSwap;
    r.transformation.max_candidates = 50;
    r.transformation.min_cos = 0.6;
    Constraint emb{Constraint::Kind::EmbeddingDistance};
    emb.min_cos = 0.6;
    Constraint pos{Constraint::Kind::PartOfSpeech};
    pos.allow_verb_noun_swap = true;
    Constraint sim{Constraint::Kind::SentenceSimilarity};
    sim.threshold = 0.84;
    sim.metric = SimMetric::Angular;
    r.constraints = {repeat, stopword, emb, pos, sim};
    return r;
  }
  if (name == "bertattack") {
    r.transformation.kind = Transformation::Kind::ContextualSwap;
    r.transformation.max_candidates = 48;
    Constraint cap{Constraint::Kind::MaxWordsPerturbed};
    cap.max_fraction = 1.0;
    Constraint sim{Constraint::Kind::SentenceSimilarity};
    sim.threshold = 0.8;
    sim.metric = SimMetric::Cosine;
    r.constraints = {repeat, stopword, cap, sim};
    return r;
  }
  throw UnknownRecipeError("unknown recipe: " + std::string(name));
}

namespace {

json constraint_to_json(const Constraint& c) {
  json j{{"kind", std::string(constraint_kind_name(c.kind))}};
  switch (c.kind) {
    case Constraint::Kind::LevenshteinMax:
      j["max_distance"] = c.max_distance;
      break;
    case Constraint::Kind::EmbeddingDistance:
      j["min_cos"] = c.min_cos;
      break;
    case Constraint::Kind::PartOfSpeech:
      j["allow_verb_noun_swap"] = c.allow_verb_noun_swap;
      break;
    case Constraint::Kind::SentenceSimilarity:
      j["threshold"] = c.threshold;
      j["metric"] = c.metric == SimMetric::Angular ? "angular" : "cosine";
      break;
    case Constraint::Kind::MaxWordsPerturbed:
      j["max_fraction"] = c.max_fraction;
      break;
    default:
      break;
  }
  return j;
}

Constraint constraint_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  Constraint c;
  if (kind == "repeat-modification") {
    c.kind = Constraint::Kind::RepeatModification;
  } else if (kind == "stopword-modification") {
    c.kind = Constraint::Kind::StopwordModification;
  } else if (kind == "levenshtein-max") {
    c.kind = Constraint::Kind::LevenshteinMax;
    c.max_distance = j.at("max_distance").get<std::size_t>();
  } else if (kind == "embedding-distance") {
    c.kind = Constraint::Kind::EmbeddingDistance;
    c.min_cos = j.at("min_cos").get<double>();
    if (c.min_cos < -1.0 || c.min_cos > 1.0)
      throw InvalidParamError("embedding-distance min_cos must be in [-1, 1]");
  } else if (kind == "part-of-speech") {
    c.kind = Constraint::Kind::PartOfSpeech;
    c.allow_verb_noun_swap = j.value("allow_verb_noun_swap", false);
  } else if (kind == "sentence-similarity") {
    c.kind = Constraint::Kind::SentenceSimilarity;
    c.threshold = j.at("threshold").get<double>();
    std::string metric = j.value("metric", "cosine");
    if (metric == "angular")
      c.metric = SimMetric::Angular;
    else if (metric == "cosine")
      c.metric = SimMetric::Cosine;
    else
      throw InvalidParamError("unknown similarity metric: " + metric);
  } else if (kind == "max-words-perturbed") {
    c.kind = Constraint::Kind::MaxWordsPerturbed;
    c.max_fraction = j.at("max_fraction").get<double>();
    if (c.max_fraction < 0.0 || c.max_fraction > 1.0)
      throw InvalidParamError("max-words-perturbed fraction must be in [0, 1]");
  } else {
    throw ParseError("unknown constraint kind: " + kind);
  }
  return c;
}

std::string transformation_kind_name(Transformation::Kind kind) {
  switch (kind) {
    case Transformation::Kind::CharComposite: return "char-composite";
    case Transformation::Kind::PunctuationInsertion: return "punctuation-insertion";
    case Transformation::Kind::EmbeddingSwap: return "embedding-swap";
    case Transformation::Kind::ContextualSwap: return "contextual-swap";
  }
  return "unknown";
}

}  // namespace

json recipe_to_json(const Recipe& recipe) {
  json j;
  j["name"] = recipe.name;
  j["goal"] = {{"mode", recipe.goal.mode == GoalMode::Exposure ? "exposure" : "propensity"},
               {"success_threshold", recipe.goal.success_threshold},
               {"k", recipe.goal.k}};
  j["constraints"] = json::array();
  for (const Constraint& c : recipe.constraints) j["constraints"].push_back(constraint_to_json(c));

  json t{{"kind", transformation_kind_name(recipe.transformation.kind)}};
  switch (recipe.transformation.kind) {
    case Transformation::Kind::PunctuationInsertion:
      t["chars"] = recipe.transformation.chars;
      break;
    case Transformation::Kind::EmbeddingSwap:
      t["max_candidates"] = recipe.transformation.max_candidates;
      t["min_cos"] = recipe.transformation.min_cos;
      break;
    case Transformation::Kind::ContextualSwap:
      t["max_candidates"] = recipe.transformation.max_candidates;
      break;
    default:
      break;
  }
  j["transformation"] = t;
  j["search"] = recipe.search == SearchMethod::GreedyWir ? "greedy-wir" : "exhaustive";
  j["max_queries"] = recipe.max_queries;
  return j;
}

Recipe recipe_from_json(const json& j) {
  Recipe r;
  r.name = j.value("name", "custom");
  if (j.contains("goal")) {
    const json& g = j.at("goal");
    std::string mode = g.value("mode", "exposure");
    if (mode == "exposure")
      r.goal.mode = GoalMode::Exposure;
    else if (mode == "propensity")
      r.goal.mode = GoalMode::Propensity;
    else
      throw InvalidParamError("unknown goal mode: " + mode);
    r.goal.success_threshold = g.value("success_threshold", 0.05);
    r.goal.k = g.value("k", std::size_t{50});
    if (!(r.goal.success_threshold > 0.0))
      throw InvalidParamError("success threshold must be > 0");
  }
  r.constraints.clear();
  for (const json& c : j.value("constraints", json::array()))
    r.constraints.push_back(constraint_from_json(c));

  const json& t = j.at("transformation");
  std::string kind = t.at("kind").get<std::string>();
  if (kind == "char-composite") {
    r.transformation.kind = Transformation::Kind::CharComposite;
  } else if (kind == "punctuation-insertion") {
    r.transformation.kind = Transformation::Kind::PunctuationInsertion;
    r.transformation.chars = t.value("chars", "'-");
  } else if (kind == "embedding-swap") {
    r.transformation.kind = Transformation::Kind::EmbeddingSwap;
    r.transformation.max_candidates = t.at("max_candidates").get<std::size_t>();
    r.transformation.min_cos = t.value("min_cos", 0.6);
  } else if (kind == "contextual-swap") {
    r.transformation.kind = Transformation::Kind::ContextualSwap;
    r.transformation.max_candidates = t.at("max_candidates").get<std::size_t>();
  } else {
    throw ParseError("unknown transformation kind: " + kind);
  }
  if (r.transformation.kind != Transformation::Kind::CharComposite &&
      r.transformation.kind != Transformation::Kind::PunctuationInsertion &&
      r.transformation.max_candidates < 1)
    throw InvalidParamError("max_candidates must be >= 1");

  std::string search = j.value("search", "greedy-wir");
  if (search == "greedy-wir")
    r.search = SearchMethod::GreedyWir;
  else if (search == "exhaustive")
    r.search = SearchMethod::Exhaustive;
  else
    throw ParseError("unknown search method: " + search);
  r.max_queries = j.value("max_queries", std::uint64_t{500});
  return r;
}

Recipe load_recipe(const std::string& name_or_path) {
  if (is_builtin_recipe(name_or_path)) return builtin_recipe(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw UnknownRecipeError("not a built-in recipe or readable file: " + name_or_path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError("bad recipe JSON: " + name_or_path);
  return recipe_from_json(j);
}

namespace {

json edit_to_json(const Edit& e) {
  json j{{"kind", std::string(edit_kind_name(e.kind))}, {"word_index", e.word_index}};
  if (e.kind == Edit::Kind::SubstituteWord) {
    j["replacement"] = e.payload;
  } else {
    j["offset"] = e.offset;
    if (!e.payload.empty()) j["ch"] = e.payload;
  }
  return j;
}

Edit edit_from_json(const json& j) {
  Edit e;
  e.kind = edit_kind_from_name(j.at("kind").get<std::string>());
  e.word_index = j.at("word_index").get<std::size_t>();
  if (e.kind == Edit::Kind::SubstituteWord) {
    e.payload = j.at("replacement").get<std::string>();
  } else {
    e.offset = j.at("offset").get<std::size_t>();
    e.payload = j.value("ch", "");
  }
  return e;
}

}  // namespace

json attack_result_to_json(const AttackResult& r) {
  json j;
  j["item_id"] = r.item_id;
  j["original"] = r.original_title;
  j["adversarial"] = r.adversarial_title;
  j["success"] = r.success;
  j["init_score"] = r.init_score;
  j["final_score"] = r.final_score;
  j["queries_used"] = r.queries_used;
  j["perturbed_words"] = r.perturbed_words;
  j["edits"] = json::array();
  for (const Edit& e : r.edits) j["edits"].push_back(edit_to_json(e));
  j["constraint_audit"] = {{"checked", r.audit.checked},
                           {"passed", r.audit.passed},
                           {"violation", r.audit.passed
                                             ? json(nullptr)
                                             : json{{"name", r.audit.violation_name},
                                                    {"detail", r.audit.violation_detail}}}};
  j["user_sample"] = r.user_sample;
  j["partition"] = r.partition;
  return j;
}

AttackResult attack_result_from_json(const json& j) {
  AttackResult r;
  r.item_id = j.at("item_id").get<std::string>();
  r.original_title = j.at("original").get<std::string>();
  r.adversarial_title = j.at("adversarial").get<std::string>();
  r.success = j.at("success").get<bool>();
  r.init_score = j.at("init_score").get<double>();
  r.final_score = j.at("final_score").get<double>();
  r.queries_used = j.at("queries_used").get<std::uint64_t>();
  r.perturbed_words = j.at("perturbed_words").get<std::size_t>();
  for (const json& e : j.value("edits", json::array())) r.edits.push_back(edit_from_json(e));
  if (j.contains("constraint_audit")) {
    const json& a = j.at("constraint_audit");
    r.audit.checked = a.value("checked", false);
    r.audit.passed = a.value("passed", false);
    if (a.contains("violation") && !a.at("violation").is_null()) {
      r.audit.violation_name = a.at("violation").value("name", "");
      r.audit.violation_detail = a.at("violation").value("detail", "");
    }
  }
  r.user_sample = j.value("user_sample", std::vector<std::string>{});
  r.partition = j.value("partition", "all");
  return r;
}

void save_results_jsonl(const std::string& path, std::span<const AttackResult> results) {
  std::string body;
  for (const AttackResult& r : results) {
    body += attack_result_to_json(r).dump();
    body += '\n';
  }
  atomic_write_file(path, body);
}

std::vector<AttackResult> load_results_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file: " + path);
  std::vector<AttackResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ParseError("bad result record at " + path + " line " + std::to_string(line_no));
    out.push_back(attack_result_from_json(j));
  }
  return out;
}

}  // namespace rta
