#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rta/text.hpp"

namespace rta {

enum class PosTag { Noun, Verb, Adj, Adv, Other, Unk };

std::string_view pos_tag_name(PosTag tag);
PosTag pos_tag_from_name(std::string_view name);

/// Word-embedding table plus stopword set and coarse POS lexicon. All
/// lookups are case-folded. Immutable once loaded; concurrent reads are fine.
class Lexicon {
 public:
  Lexicon() = default;

  // Embedding file: one `word v1 v2 ... vd` row per line, UTF-8 text.
  // Duplicate words: last row wins, a warning is recorded.
  static Lexicon load_embeddings(const std::string& path,
                                 std::vector<std::string>* warnings = nullptr);

  void load_stopwords(const std::string& path);
  // POS file: `word TAG` per line. A word listed under several tags keeps
  // the highest-priority one (NOUN > VERB > ADJ > ADV > OTHER).
  void load_pos(const std::string& path);

  void add_word(std::string_view word, std::vector<double> vec);
  void set_stopwords(std::vector<std::string> words);
  void add_pos(std::string_view word, PosTag tag);

  int dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  std::span<const double> vector_of(std::string_view word) const;  // empty if unknown
  bool is_stopword(std::string_view word) const;
  PosTag pos_tag(std::string_view word) const;  // Unk when absent

  /// Sorted case-folded vocabulary (deterministic iteration order).
  const std::vector<std::string>& words() const { return words_; }

  /// Up to k vocabulary words w != word with cosine(word, w) >= min_cos,
  /// ordered by descending cosine, ties lexicographic. Throws
  /// UnknownWordError when the query word has no vector.
  std::vector<std::string> nearest_neighbors(std::string_view word, std::size_t k,
                                             double min_cos) const;

  /// Cosine of the mean word vectors, skipping unknown words. If either side
  /// has no known word: 1 when token-identical, else 0.
  double sentence_cosine(const WordSequence& a, const WordSequence& b) const;

  /// Mean of known word vectors; zero vector when no word is known.
  std::vector<double> mean_vector(const WordSequence& words) const;

  static double cosine(std::span<const double> a, std::span<const double> b);
  /// 1 - arccos(cos)/pi, clamped to valid arccos input.
  static double angular_similarity(double cosine);

 private:
  void rebuild_index();

  int dim_ = 0;
  std::vector<std::string> words_;                       // sorted
  std::unordered_map<std::string, std::size_t> index_;   // word -> row
  std::vector<std::vector<double>> vectors_;
  std::vector<double> norms_;
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, PosTag> pos_;
};

/// The standard 179-word English stopword list shipped with the tool.
std::span<const std::string_view> default_stopwords();
void write_default_stopwords(const std::string& path);

}  // namespace rta
