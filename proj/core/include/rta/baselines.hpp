#pragma once

#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rta/dataset.hpp"
#include "rta/remote.hpp"

namespace rta {

/// The fixed 33-entry corpus the trivial word-insertion attack draws from.
std::span<const std::string> positive_word_corpus();

/// Appends k distinct corpus words, in draw order, to the end of the title.
std::string trivial_insert(const std::string& title, std::size_t k,
                           std::span<const std::string> corpus, std::mt19937_64& rng);

enum class RewriteTemplate { Promote = 1, Catchy = 2, PositiveWords = 3, Defense = 4 };

/// Fills <MaxLen>/<ItemTitle>/<AdversarialTitle> into the template verbatim.
std::string render_rewrite_prompt(RewriteTemplate tmpl, const std::string& title,
                                  std::size_t max_len);

std::string rewrite_external(const RewriterClient& client, RewriteTemplate tmpl,
                             const std::string& title, std::size_t max_len);

enum class ShillingPolicy { Random, Bandwagon };

ShillingPolicy shilling_policy_from_name(std::string_view name);

/// Injects n_fake users, each rating one round-robin target plus
/// fillers_per_user filler items: uniform over the catalog for Random,
/// drawn from the most-popular decile for Bandwagon. Histories are shuffled;
/// fresh user ids never collide with real ones. The input log is untouched.
InteractionLog shilling_inject(ShillingPolicy policy, std::size_t n_fake,
                               std::size_t fillers_per_user,
                               std::span<const std::string> targets, const InteractionLog& log,
                               const Catalog& catalog, std::mt19937_64& rng);

/// Case-folded token vocabulary with a canonical surface form (highest
/// frequency, ties lexicographic) and corpus frequencies for tie-breaking.
class DefenseVocab {
 public:
  static DefenseVocab from_catalog(const Catalog& catalog);
  static DefenseVocab from_titles(std::span<const std::string> titles);

  bool contains(const std::string& folded) const;
  const std::string& surface(const std::string& folded) const;
  std::int64_t frequency(const std::string& folded) const;
  const std::vector<std::string>& folded_words() const { return folded_words_; }

 private:
  struct Entry {
    std::string surface;
    std::int64_t surface_freq = 0;
    std::int64_t total_freq = 0;
  };
  std::unordered_map<std::string, Entry> entries_;
  std::vector<std::string> folded_words_;  // sorted
};

/// Rule-based re-writing defense: strip inserted punctuation when the
/// stripped token is known, then spell-correct remaining out-of-vocabulary
/// tokens to the unique nearest vocab word within max_edit. Idempotent, and
/// clean in-vocab titles pass through unchanged.
std::string defend_rewrite(const std::string& title, const DefenseVocab& vocab,
                           std::string_view punct_chars, std::size_t max_edit = 2);

}  // namespace rta
