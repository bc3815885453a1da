#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rta {

/// A title as an ordered list of whitespace-delimited tokens. Punctuation
/// stays attached to its token and tokens never contain whitespace, so
/// join(tokenize(x)) == normalize_whitespace(x).
using WordSequence = std::vector<std::string>;

WordSequence tokenize(std::string_view text);
std::string join_words(const WordSequence& words);

std::string to_lower(std::string_view s);

// Char-level work operates on Unicode scalar values, not bytes.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);
std::size_t codepoint_length(std::string_view s);

struct Edit {
  enum class Kind {
    SubstituteWord,
    InsertChar,
    DeleteChar,
    SubstituteChar,
    SwapAdjacentChars,
    InsertPunctuation,
  };
  Kind kind = Kind::SubstituteWord;
  std::size_t word_index = 0;
  // Code-point offset within the word; for insertions this is the gap index.
  std::size_t offset = 0;
  // SubstituteWord: the full replacement token. Char kinds: one code point.
  std::string payload;
};

std::string_view edit_kind_name(Edit::Kind kind);
Edit::Kind edit_kind_from_name(std::string_view name);

/// A title under attack: the pristine token sequence, the working sequence,
/// and the ordered edit log connecting them. Immutable; with_edit() returns
/// a new value.
class AttackedText {
 public:
  AttackedText() = default;
  explicit AttackedText(WordSequence original);
  static AttackedText from_text(std::string_view text);

  const WordSequence& original() const { return original_; }
  const WordSequence& current() const { return current_; }
  const std::vector<Edit>& edits() const { return edits_; }

  std::string original_text() const { return join_words(original_); }
  std::string text() const { return join_words(current_); }

  AttackedText with_edit(const Edit& e) const;

 private:
  WordSequence original_;
  WordSequence current_;
  std::vector<Edit> edits_;
};

AttackedText apply_edit(const AttackedText& t, const Edit& e);

// Applies e to the single token it addresses. Throws OutOfRangeError /
// InvalidParamError on invalid offsets or whitespace-producing payloads.
std::string apply_edit_to_word(const std::string& word, const Edit& e);

// Re-derives the working sequence from the log; used by audits and tests.
WordSequence replay_edits(const WordSequence& original, std::span<const Edit> edits);

/// Unit-cost edit distance over code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

std::size_t lcs_length(const WordSequence& a, const WordSequence& b);

/// ROUGE-L F-measure: F = 2PR/(P+R) with P = LCS/|cand|, R = LCS/|ref|.
/// Both sequences empty -> 1; exactly one empty -> 0.
double rouge_l(const WordSequence& reference, const WordSequence& candidate);

/// Word positions whose final token differs from the original (positional,
/// case-sensitive); length mismatch contributes one per extra word.
std::size_t perturbed_word_count(const AttackedText& t);

}  // namespace rta
