#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "rta/attack.hpp"
#include "rta/dataset.hpp"
#include "rta/lexicon.hpp"
#include "rta/ngram.hpp"
#include "rta/victim.hpp"

namespace rta {

/// Binary-gain NDCG with 1-based ranks and 1/log2(rank+1) discounts,
/// normalized by the ideal DCG for |relevant| items truncated at k.
double ndcg_at_k(std::span<const std::string> ranked,
                 const std::unordered_set<std::string>& relevant, std::size_t k);

/// |relevant in top-k| / |relevant|; empty relevant set is undefined.
std::optional<double> recall_at_k(std::span<const std::string> ranked,
                                  const std::unordered_set<std::string>& relevant, std::size_t k);

/// Probability a random positive outranks a random negative, ties at 0.5.
/// Undefined without both classes.
std::optional<double> auc(std::span<const std::pair<double, int>> scored);

struct ReportRow {
  std::string label;            // "clean" or the recipe name
  std::string partition = "all";
  std::optional<double> effectiveness;  // exposure or propensity
  std::optional<double> relative_improvement;
  std::optional<double> mean_queries;
  std::optional<double> ndcg;
  std::optional<double> recall;
  std::optional<double> auc;
  std::optional<double> mean_cosine;
  std::optional<double> mean_rouge_l;
  std::optional<double> mean_perplexity;
  std::optional<double> mean_perturbed_words;
};

struct RunMetadata {
  std::uint64_t seed = 0;
  std::string recipe;
  std::string victim_id;
  std::string dataset_id;
  std::string goal_mode = "exposure";
  std::size_t k = 50;
  std::size_t holdout_k = 10;
  std::string timestamp;  // isolated here so determinism checks can drop it
};

struct MetricsReport {
  RunMetadata meta;
  std::vector<ReportRow> rows;

  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
  std::string to_csv() const;
};

/// Per-target effectiveness under a given catalog, measured over the full
/// user population. Exposure mode evaluates each target in isolation: only
/// that item's adversarial title is applied.
struct TargetEval {
  std::string item_id;
  double value = 0.0;
};

std::vector<TargetEval> evaluate_exposure(const VictimModel& victim,
                                          std::span<const AttackResult> results,
                                          bool use_adversarial_titles, const InteractionLog& log,
                                          const Catalog& catalog, std::size_t k,
                                          QueryCounter& ctr);

std::vector<TargetEval> evaluate_propensity(const VictimModel& victim,
                                            std::span<const AttackResult> results,
                                            bool use_adversarial_titles,
                                            const InteractionLog& log, const Catalog& catalog,
                                            QueryCounter& ctr);

/// Leave-last-out next-item evaluation over all users with >= 2 history
/// entries: rank the catalog against the truncated history and score the
/// held-out item.
struct HoldoutMetrics {
  double ndcg = 0.0;
  double recall = 0.0;
  std::optional<double> auc;
  std::size_t users_evaluated = 0;
};

HoldoutMetrics holdout_next_item_eval(const VictimModel& victim, const InteractionLog& log,
                                      const Catalog& catalog, std::size_t k, QueryCounter& ctr);

struct CompileOptions {
  std::size_t exposure_k = 50;
  std::size_t holdout_k = 10;
  GoalMode mode = GoalMode::Exposure;
};

/// Aggregates clean-vs-attacked effectiveness and stealthiness rows. The
/// clean and attacked runs must cover the same targets in the same order.
MetricsReport compile_report(std::span<const TargetEval> clean_evals,
                             std::span<const TargetEval> attacked_evals,
                             std::span<const AttackResult> results,
                             const HoldoutMetrics& clean_holdout,
                             const HoldoutMetrics& attacked_holdout, const Lexicon& lex,
                             const NGramLM& lm, const CompileOptions& options,
                             const RunMetadata& meta);

}  // namespace rta
