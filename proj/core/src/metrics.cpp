#include "rta/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rta/errors.hpp"

namespace rta {

using nlohmann::json;

double ndcg_at_k(std::span<const std::string> ranked,
                 const std::unordered_set<std::string>& relevant, std::size_t k) {
  if (k < 1) throw InvalidParamError("k must be >= 1");
  if (relevant.empty()) return 0.0;
  double dcg = 0.0;
  std::size_t limit = std::min(k, ranked.size());
  for (std::size_t i = 0; i < limit; ++i)
    if (relevant.count(ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  double idcg = 0.0;
  std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

std::optional<double> recall_at_k(std::span<const std::string> ranked,
                                  const std::unordered_set<std::string>& relevant,
                                  std::size_t k) {
  if (k < 1) throw InvalidParamError("k must be >= 1");
  if (relevant.empty()) return std::nullopt;
  std::size_t hits = 0;
  std::size_t limit = std::min(k, ranked.size());
  for (std::size_t i = 0; i < limit; ++i)
    if (relevant.count(ranked[i])) ++hits;
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

std::optional<double> auc(std::span<const std::pair<double, int>> scored) {
  std::size_t positives = 0, negatives = 0;
  for (const auto& [score, label] : scored) {
    if (label)
      ++positives;
    else
      ++negatives;
  }
  if (positives == 0 || negatives == 0) return std::nullopt;

  // Rank-sum with average ranks for ties, equivalent to pairwise counting
  // with ties worth 0.5.
  std::vector<std::pair<double, int>> sorted(scored.begin(), scored.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t)
      if (sorted[t].second) rank_sum_pos += avg_rank;
    i = j;
  }
  double p = static_cast<double>(positives);
  double n = static_cast<double>(negatives);
  return (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);
}

std::vector<TargetEval> evaluate_exposure(const VictimModel& victim,
                                          std::span<const AttackResult> results,
                                          bool use_adversarial_titles, const InteractionLog& log,
                                          const Catalog& catalog, std::size_t k,
                                          QueryCounter& ctr) {
  std::vector<TargetEval> out;
  out.reserve(results.size());

  if (!use_adversarial_titles) {
    // One ranking pass per user covers every target.
    std::vector<std::unordered_set<std::string>> topk;
    topk.reserve(log.size());
    for (const std::string& user : log.user_ids()) {
      std::vector<std::string> titles = history_titles(log, catalog, user);
      std::vector<std::string> top = victim.rank_topk(titles, k, catalog, true, ctr);
      topk.emplace_back(top.begin(), top.end());
    }
    for (const AttackResult& r : results) {
      std::size_t hits = 0;
      for (const auto& set : topk) hits += set.count(r.item_id);
      out.push_back({r.item_id,
                     static_cast<double>(hits) / static_cast<double>(log.size())});
    }
    return out;
  }

  for (const AttackResult& r : results) {
    Catalog perturbed = catalog.with_title(r.item_id, r.adversarial_title);
    std::size_t hits = 0;
    for (const std::string& user : log.user_ids()) {
      std::vector<std::string> titles = history_titles(log, perturbed, user);
      std::vector<std::string> top = victim.rank_topk(titles, k, perturbed, true, ctr);
      if (std::find(top.begin(), top.end(), r.item_id) != top.end()) ++hits;
    }
    out.push_back({r.item_id, static_cast<double>(hits) / static_cast<double>(log.size())});
  }
  return out;
}

std::vector<TargetEval> evaluate_propensity(const VictimModel& victim,
                                            std::span<const AttackResult> results,
                                            bool use_adversarial_titles,
                                            const InteractionLog& log, const Catalog& catalog,
                                            QueryCounter& ctr) {
  std::vector<TargetEval> out;
  out.reserve(results.size());
  for (const AttackResult& r : results) {
    const std::string& title = use_adversarial_titles ? r.adversarial_title : r.original_title;
    Catalog perturbed =
        use_adversarial_titles ? catalog.with_title(r.item_id, title) : catalog;
    double sum = 0.0;
    for (const std::string& user : log.user_ids()) {
      std::vector<std::string> titles = history_titles(log, perturbed, user);
      sum += victim.score(titles, title, ctr);
    }
    out.push_back({r.item_id, sum / static_cast<double>(log.size())});
  }
  return out;
}

HoldoutMetrics holdout_next_item_eval(const VictimModel& victim, const InteractionLog& log,
                                      const Catalog& catalog, std::size_t k, QueryCounter& ctr) {
  HoldoutMetrics m;
  double ndcg_sum = 0.0, recall_sum = 0.0, auc_sum = 0.0;
  std::size_t auc_users = 0;
  for (const std::string& user : log.user_ids()) {
    const std::vector<std::string>& full = log.history(user);
    if (full.size() < 2) continue;
    std::string held_out = full.back();
    std::vector<std::string> train_titles;
    train_titles.reserve(full.size() - 1);
    for (std::size_t i = 0; i + 1 < full.size(); ++i)
      train_titles.push_back(catalog.title(full[i]));

    // Full ordering so the held-out rank is always visible.
    std::vector<std::string> ranked =
        victim.rank_topk(train_titles, catalog.size(), catalog, true, ctr);
    std::unordered_set<std::string> relevant{held_out};
    ndcg_sum += ndcg_at_k(ranked, relevant, k);
    recall_sum += recall_at_k(ranked, relevant, k).value_or(0.0);

    auto pos = std::find(ranked.begin(), ranked.end(), held_out);
    if (pos != ranked.end() && ranked.size() > 1) {
      std::size_t rank = static_cast<std::size_t>(pos - ranked.begin());
      auc_sum += static_cast<double>(ranked.size() - 1 - rank) /
                 static_cast<double>(ranked.size() - 1);
      ++auc_users;
    }
    ++m.users_evaluated;
  }
  if (m.users_evaluated > 0) {
    m.ndcg = ndcg_sum / static_cast<double>(m.users_evaluated);
    m.recall = recall_sum / static_cast<double>(m.users_evaluated);
  }
  if (auc_users > 0) m.auc = auc_sum / static_cast<double>(auc_users);
  return m;
}

namespace {

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

json opt_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string csv_cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << *v;
  return ss.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

MetricsReport compile_report(std::span<const TargetEval> clean_evals,
                             std::span<const TargetEval> attacked_evals,
                             std::span<const AttackResult> results,
                             const HoldoutMetrics& clean_holdout,
                             const HoldoutMetrics& attacked_holdout, const Lexicon& lex,
                             const NGramLM& lm, const CompileOptions& options,
                             const RunMetadata& meta) {
  if (clean_evals.size() != attacked_evals.size() || clean_evals.size() != results.size())
    throw MismatchedRunsError("clean and attacked runs cover different targets");
  for (std::size_t i = 0; i < clean_evals.size(); ++i)
    if (clean_evals[i].item_id != attacked_evals[i].item_id ||
        clean_evals[i].item_id != results[i].item_id)
      throw MismatchedRunsError("clean and attacked runs cover different targets");

  std::vector<double> clean_vals, attacked_vals, queries, cosines, rouges, perplexities,
      clean_perplexities, perturbed;
  for (std::size_t i = 0; i < results.size(); ++i) {
    clean_vals.push_back(clean_evals[i].value);
    attacked_vals.push_back(attacked_evals[i].value);
    queries.push_back(static_cast<double>(results[i].queries_used));
    WordSequence orig = tokenize(results[i].original_title);
    WordSequence adv = tokenize(results[i].adversarial_title);
    cosines.push_back(lex.sentence_cosine(orig, adv));
    rouges.push_back(rouge_l(orig, adv));
    perplexities.push_back(lm.perplexity(adv));
    clean_perplexities.push_back(lm.perplexity(orig));
    perturbed.push_back(static_cast<double>(results[i].perturbed_words));
  }

  MetricsReport report;
  report.meta = meta;

  ReportRow clean_row;
  clean_row.label = "clean";
  clean_row.effectiveness = mean_of(clean_vals);
  clean_row.ndcg = clean_holdout.ndcg;
  clean_row.recall = clean_holdout.recall;
  clean_row.auc = clean_holdout.auc;
  clean_row.mean_cosine = 1.0;
  clean_row.mean_rouge_l = 1.0;
  clean_row.mean_perplexity = mean_of(clean_perplexities);
  report.rows.push_back(clean_row);

  ReportRow attacked_row;
  attacked_row.label = meta.recipe.empty() ? "attacked" : meta.recipe;
  attacked_row.effectiveness = mean_of(attacked_vals);
  double clean_mean = mean_of(clean_vals);
  if (clean_mean > 0.0)
    attacked_row.relative_improvement = (mean_of(attacked_vals) - clean_mean) / clean_mean;
  attacked_row.mean_queries = mean_of(queries);
  attacked_row.ndcg = attacked_holdout.ndcg;
  attacked_row.recall = attacked_holdout.recall;
  attacked_row.auc = attacked_holdout.auc;
  attacked_row.mean_cosine = mean_of(cosines);
  attacked_row.mean_rouge_l = mean_of(rouges);
  attacked_row.mean_perplexity = mean_of(perplexities);
  attacked_row.mean_perturbed_words = mean_of(perturbed);
  report.rows.push_back(attacked_row);
  return report;
}

json MetricsReport::to_json() const {
  json j;
  j["metadata"] = {{"seed", meta.seed},
                   {"recipe", meta.recipe},
                   {"victim", meta.victim_id},
                   {"dataset", meta.dataset_id},
                   {"goal_mode", meta.goal_mode},
                   {"k", meta.k},
                   {"holdout_k", meta.holdout_k},
                   {"timestamp", meta.timestamp}};
  j["rows"] = json::array();
  for (const ReportRow& row : rows) {
    j["rows"].push_back({{"label", row.label},
                         {"partition", row.partition},
                         {"effectiveness", opt_to_json(row.effectiveness)},
                         {"relative_improvement", opt_to_json(row.relative_improvement)},
                         {"mean_queries", opt_to_json(row.mean_queries)},
                         {"ndcg", opt_to_json(row.ndcg)},
                         {"recall", opt_to_json(row.recall)},
                         {"auc", opt_to_json(row.auc)},
                         {"mean_cosine", opt_to_json(row.mean_cosine)},
                         {"mean_rouge_l", opt_to_json(row.mean_rouge_l)},
                         {"mean_perplexity", opt_to_json(row.mean_perplexity)},
                         {"mean_perturbed_words", opt_to_json(row.mean_perturbed_words)}});
  }
  return j;
}

MetricsReport MetricsReport::from_json(const json& j) {
  MetricsReport r;
  const json& m = j.at("metadata");
  r.meta.seed = m.value("seed", std::uint64_t{0});
  r.meta.recipe = m.value("recipe", "");
  r.meta.victim_id = m.value("victim", "");
  r.meta.dataset_id = m.value("dataset", "");
  r.meta.goal_mode = m.value("goal_mode", "exposure");
  r.meta.k = m.value("k", std::size_t{50});
  r.meta.holdout_k = m.value("holdout_k", std::size_t{10});
  r.meta.timestamp = m.value("timestamp", "");
  for (const json& row_json : j.at("rows")) {
    ReportRow row;
    row.label = row_json.at("label").get<std::string>();
    row.partition = row_json.value("partition", "all");
    row.effectiveness = opt_from_json(row_json, "effectiveness");
    row.relative_improvement = opt_from_json(row_json, "relative_improvement");
    row.mean_queries = opt_from_json(row_json, "mean_queries");
    row.ndcg = opt_from_json(row_json, "ndcg");
    row.recall = opt_from_json(row_json, "recall");
    row.auc = opt_from_json(row_json, "auc");
    row.mean_cosine = opt_from_json(row_json, "mean_cosine");
    row.mean_rouge_l = opt_from_json(row_json, "mean_rouge_l");
    row.mean_perplexity = opt_from_json(row_json, "mean_perplexity");
    row.mean_perturbed_words = opt_from_json(row_json, "mean_perturbed_words");
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string MetricsReport::to_csv() const {
  std::string out =
      "label,partition,dataset,recipe,victim,seed,effectiveness,relative_improvement,"
      "mean_queries,ndcg,recall,auc,mean_cosine,mean_rouge_l,mean_perplexity,"
      "mean_perturbed_words\n";
  for (const ReportRow& row : rows) {
    out += csv_escape(row.label) + "," + csv_escape(row.partition) + "," +
           csv_escape(meta.dataset_id) + "," + csv_escape(meta.recipe) + "," +
           csv_escape(meta.victim_id) + "," + std::to_string(meta.seed) + "," +
           csv_cell(row.effectiveness) +
           "," + csv_cell(row.relative_improvement) + "," + csv_cell(row.mean_queries) + "," +
           csv_cell(row.ndcg) + "," + csv_cell(row.recall) + "," + csv_cell(row.auc) + "," +
           csv_cell(row.mean_cosine) + "," + csv_cell(row.mean_rouge_l) + "," +
           csv_cell(row.mean_perplexity) + "," + csv_cell(row.mean_perturbed_words) + "\n";
  }
  return out;
}

}  // namespace rta
