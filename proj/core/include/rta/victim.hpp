#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rta/dataset.hpp"
#include "rta/lexicon.hpp"

namespace rta {

/// Counts victim evaluations. One score() call and one full ranking call each
/// cost one query. Safe to increment from concurrent scorers.
class QueryCounter {
 public:
  void increment() { n_.fetch_add(1, std::memory_order_relaxed); }
  std::uint64_t count() const { return n_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> n_{0};
};

/// Black-box recommender contract: scores (history, candidate title) pairs
/// and ranks a catalog for a history. Every call passes through the caller's
/// QueryCounter.
class VictimModel {
 public:
  virtual ~VictimModel() = default;

  /// Predicted interaction propensity in [0, 1]. Throws EmptyHistoryError.
  virtual double score(std::span<const std::string> history_titles,
                       const std::string& candidate_title, QueryCounter& ctr) const = 0;

  /// Top-k item ids, score descending with ties by ascending item_id. When
  /// exclude_history is set, items whose title appears in the history are
  /// dropped before truncation. Counts as one query.
  virtual std::vector<std::string> rank_topk(std::span<const std::string> history_titles,
                                             std::size_t k, const Catalog& catalog,
                                             bool exclude_history, QueryCounter& ctr) const = 0;

  /// Whether rank_topk honours catalog title overrides (a remote model ranks
  /// its own server-side catalog and cannot).
  virtual bool supports_title_overrides() const { return false; }

  virtual std::string id() const = 0;
};

struct FitReport {
  std::size_t item_count = 0;
  int dim = 0;
  double tau = 0.0;
  // Items whose title had no known word and got the fallback vector.
  std::vector<std::string> fallback_items;
};

/// Content-based victim: an item is the unit-normalized mean embedding of its
/// title words, a user profile the normalized mean of history title vectors,
/// and the score sigma(cos/tau). Immutable once fitted.
class SimRec final : public VictimModel {
 public:
  static SimRec fit(const Catalog& catalog, std::shared_ptr<const Lexicon> lexicon, double tau,
                    FitReport* report = nullptr);

  // Persisted as `simrec v1 d=<dim> tau=<tau>` followed by item rows.
  void save(const std::string& path) const;
  static SimRec load(const std::string& path, std::shared_ptr<const Lexicon> lexicon);

  double score(std::span<const std::string> history_titles, const std::string& candidate_title,
               QueryCounter& ctr) const override;
  std::vector<std::string> rank_topk(std::span<const std::string> history_titles, std::size_t k,
                                     const Catalog& catalog, bool exclude_history,
                                     QueryCounter& ctr) const override;
  bool supports_title_overrides() const override { return true; }
  std::string id() const override;

  double tau() const { return tau_; }
  int dim() const { return dim_; }
  /// Unit-normalized mean word embedding (fallback vector when no word is
  /// known).
  std::vector<double> embed_title(const std::string& title) const;

  static std::vector<double> fallback_vector(int dim);

 private:
  std::span<const double> item_vector(const std::string& item_id) const;

  std::shared_ptr<const Lexicon> lexicon_;
  double tau_ = 0.25;
  int dim_ = 0;
  std::vector<std::string> item_ids_;
  std::unordered_map<std::string, std::size_t> row_of_;
  std::vector<double> rows_;  // item count x dim, unit rows
};

/// Fraction of sampled users whose top-k contains item_id; one ranking query
/// per user. Histories resolve through the passed catalog, so title overrides
/// apply to history items as well.
double exposure_estimate(const VictimModel& victim, const std::string& item_id,
                         std::span<const std::string> user_sample, std::size_t k,
                         const InteractionLog& log, const Catalog& catalog, QueryCounter& ctr);

std::vector<std::string> history_titles(const InteractionLog& log, const Catalog& catalog,
                                        const std::string& user_id);

enum class PromptStyle { None, TitleList, DirectRec, RatingQuery, RatingQueryWithIds };

PromptStyle prompt_style_from_name(std::string_view name);
std::string_view prompt_style_name(PromptStyle style);

/// Renders the wire prompt for remote victims that consume text instead of
/// structured fields.
std::string render_prompt(PromptStyle style, std::span<const std::string> history_titles,
                          const std::string& candidate_title, const std::string& user_id = "",
                          const std::string& item_id = "");

}  // namespace rta
