#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rta/text.hpp"

namespace rta {

class Lexicon;

/// Additively smoothed n-gram language model over lowercased tokens.
/// Sentences are padded with begin markers and terminated by an end event,
/// and an UNK bucket absorbs out-of-vocabulary tokens, so every conditional
/// distribution over vocab + {UNK, end} sums to one.
class NGramLM {
 public:
  static NGramLM fit(const std::vector<WordSequence>& corpus, int order, double alpha);

  int order() const { return order_; }
  double alpha() const { return alpha_; }

  /// Support size V' = |vocab| + UNK + end.
  std::size_t support_size() const { return vocab_.size() + 2; }
  bool in_vocab(std::string_view word) const;

  /// P(word | context) with additive smoothing. Context words and `word` are
  /// case-folded; unknown tokens map to UNK. Pass end_token() to score the
  /// sentence-end event.
  double probability(std::span<const std::string> context, const std::string& word) const;

  /// Context-free probability from order-1 counts.
  double unigram_probability(const std::string& word) const;

  /// exp of the mean negative log conditional probability over the tokens of
  /// `text` plus the end event.
  double perplexity(const WordSequence& text) const;

  /// Up to k lexicon words ranked by P(w | left context) * P(next | w ...),
  /// excluding the word currently at `index`; ties lexicographic. Index 0
  /// falls back to unigram ranking for the left factor.
  std::vector<std::string> contextual_candidates(const Lexicon& lex, const WordSequence& text,
                                                 std::size_t index, std::size_t k) const;

  static const std::string& begin_token();
  static const std::string& end_token();
  static const std::string& unk_token();

 private:
  std::string context_key(std::span<const std::string> folded_context) const;
  std::string fold_token(const std::string& word) const;
  std::vector<std::string> left_context(const std::vector<std::string>& folded,
                                        std::size_t index) const;

  int order_ = 3;
  double alpha_ = 0.1;
  std::unordered_map<std::string, std::unordered_map<std::string, std::int64_t>> counts_;
  std::unordered_map<std::string, std::int64_t> context_totals_;
  std::unordered_map<std::string, std::int64_t> event_totals_;  // order-1 counts
  std::int64_t total_events_ = 0;
  std::unordered_map<std::string, bool> vocab_;
};

}  // namespace rta
