#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rta/dataset.hpp"
#include "rta/lexicon.hpp"
#include "rta/ngram.hpp"
#include "rta/text.hpp"
#include "rta/victim.hpp"

namespace rta {

enum class GoalMode { Exposure, Propensity };

struct GoalConfig {
  GoalMode mode = GoalMode::Exposure;
  double success_threshold = 0.05;  // propensity victims typically 0.15 or 0.3
  std::size_t k = 50;               // top-K for exposure mode
};

enum class SimMetric { Cosine, Angular };

struct Constraint {
  enum class Kind {
    RepeatModification,
    StopwordModification,
    LevenshteinMax,
    EmbeddingDistance,
    PartOfSpeech,
    SentenceSimilarity,
    MaxWordsPerturbed,
  };
  Kind kind = Kind::RepeatModification;
  std::size_t max_distance = 30;      // levenshtein-max
  double min_cos = 0.6;               // embedding-distance
  bool allow_verb_noun_swap = false;  // part-of-speech
  double threshold = 0.8;             // sentence-similarity
  SimMetric metric = SimMetric::Cosine;
  double max_fraction = 1.0;          // max-words-perturbed
};

using ConstraintSet = std::vector<Constraint>;

std::string_view constraint_kind_name(Constraint::Kind kind);

struct Transformation {
  enum class Kind { CharComposite, PunctuationInsertion, EmbeddingSwap, ContextualSwap };
  Kind kind = Kind::CharComposite;
  std::string chars = "'-";          // punctuation-insertion
  std::size_t max_candidates = 50;   // embedding/contextual swap
  // Generation floor for embedding swaps, mirroring the recipe's
  // embedding-distance constraint so doomed candidates are never queried.
  double min_cos = 0.6;
};

enum class SearchMethod { GreedyWir, Exhaustive };

struct Recipe {
  std::string name;
  GoalConfig goal;
  ConstraintSet constraints;
  Transformation transformation;
  SearchMethod search = SearchMethod::GreedyWir;
  std::uint64_t max_queries = 500;
};

/// Built-ins: deepwordbug, puncattack, textfooler, bertattack.
Recipe builtin_recipe(std::string_view name);
bool is_builtin_recipe(std::string_view name);
std::vector<std::string> builtin_recipe_names();

nlohmann::json recipe_to_json(const Recipe& recipe);
Recipe recipe_from_json(const nlohmann::json& j);
Recipe load_recipe(const std::string& name_or_path);

struct Violation {
  std::string name;
  std::string detail;
};

/// Evaluates constraints in declared order; the first violation wins.
std::optional<Violation> check_constraints(const ConstraintSet& constraints,
                                           const AttackedText& original,
                                           const AttackedText& candidate, const Lexicon& lex);

// Candidate generators. Each candidate is the input text plus exactly one
// logged edit; duplicates and no-ops are dropped.
std::vector<AttackedText> transform_char_composite(const AttackedText& t, std::size_t word_index,
                                                   std::mt19937_64& rng);
std::vector<AttackedText> transform_punct_insertion(const AttackedText& t, std::size_t word_index,
                                                    std::string_view chars);
std::vector<AttackedText> transform_embedding_swap(const AttackedText& t, std::size_t word_index,
                                                   const Lexicon& lex, std::size_t max_candidates,
                                                   double min_cos);
std::vector<AttackedText> transform_contextual_swap(const AttackedText& t, std::size_t word_index,
                                                    const NGramLM& lm, const Lexicon& lex,
                                                    std::size_t max_candidates);
std::vector<AttackedText> generate_candidates(const Transformation& transformation,
                                              const AttackedText& t, std::size_t word_index,
                                              const Lexicon& lex, const NGramLM* lm,
                                              std::mt19937_64& rng);

/// Attack objective bound to one target item: the expectation of the victim's
/// exposure or propensity over a fixed user sample, evaluated for candidate
/// titles. Each evaluation costs |user_sample| victim queries.
class Goal {
 public:
  Goal(GoalConfig config, const VictimModel& victim, const InteractionLog& log,
       const Catalog& catalog, std::string target_item, std::vector<std::string> user_sample);

  double init(QueryCounter& ctr);

  struct Eval {
    double score = 0.0;
    bool successful = false;
  };
  Eval eval(const std::string& candidate_title, QueryCounter& ctr) const;

  std::uint64_t eval_cost() const { return user_sample_.size(); }
  double init_score() const { return init_score_; }
  const std::vector<std::string>& user_sample() const { return user_sample_; }
  const std::string& target_item() const { return target_item_; }
  const GoalConfig& config() const { return config_; }
  const Catalog& catalog() const { return *catalog_; }

 private:
  double expectation(const std::string& candidate_title, QueryCounter& ctr) const;

  GoalConfig config_;
  const VictimModel* victim_;
  const InteractionLog* log_;
  const Catalog* catalog_;
  std::string target_item_;
  std::vector<std::string> user_sample_;
  double init_score_ = 0.0;
};

struct ConstraintAudit {
  bool checked = false;
  bool passed = false;
  std::string violation_name;
  std::string violation_detail;
};

struct AttackResult {
  std::string item_id;
  std::string original_title;
  std::string adversarial_title;
  bool success = false;
  double init_score = 0.0;
  double final_score = 0.0;
  std::uint64_t queries_used = 0;
  std::size_t perturbed_words = 0;
  std::vector<Edit> edits;
  ConstraintAudit audit;
  std::vector<std::string> user_sample;
  std::string partition = "all";
};

nlohmann::json attack_result_to_json(const AttackResult& r);
AttackResult attack_result_from_json(const nlohmann::json& j);
void save_results_jsonl(const std::string& path, std::span<const AttackResult> results);
std::vector<AttackResult> load_results_jsonl(const std::string& path);

/// Word positions ordered by the victim-score drop caused by deleting each
/// word; stopword positions are excluded before any probe is spent. One goal
/// evaluation per probed word, bounded by `max_queries`.
std::vector<std::size_t> word_importance_ranking(const Goal& goal, const AttackedText& text,
                                                 const Lexicon& lex, QueryCounter& ctr,
                                                 std::uint64_t max_queries);

AttackResult greedy_wir_search(const Recipe& recipe, Goal& goal, const Lexicon& lex,
                               const NGramLM* lm, std::mt19937_64& rng);

/// Test oracle: enumerates every constraint-satisfying combination of at most
/// max_subs single-word transformations. Guarded to <= 6 words and per-word
/// fan-out <= 4 (InstanceTooLargeError).
AttackResult exhaustive_search(const Recipe& recipe, Goal& goal, const Lexicon& lex,
                               const NGramLM* lm, std::size_t max_subs, std::mt19937_64& rng);

struct RunOptions {
  double user_sample_fraction = 0.10;
  std::size_t min_sample = 10;
  std::optional<std::uint64_t> max_queries;  // overrides the recipe budget
  std::optional<GoalConfig> goal;            // overrides the recipe goal
  std::size_t exhaustive_max_subs = 2;
  int jobs = 1;
  // Invoked once per finished item (in target order) when jobs == 1.
  std::function<void(const AttackResult&)> on_result;
};

/// Attacks each target independently. Per-item RNG streams derive from
/// (seed, item_id), so results do not depend on target order or job count.
std::vector<AttackResult> run_attack(const Recipe& recipe, std::span<const std::string> targets,
                                     const VictimModel& victim, const InteractionLog& log,
                                     const Catalog& catalog, const Lexicon& lex, const NGramLM* lm,
                                     std::uint64_t seed, const RunOptions& options = {});

/// The 10%-of-users (minimum min_sample) draw used by each attack.
std::vector<std::string> sample_users(const InteractionLog& log, double fraction,
                                      std::size_t min_sample, std::mt19937_64& rng);

}  // namespace rta
