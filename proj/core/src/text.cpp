#include "rta/text.hpp"

#include <algorithm>
#include <cctype>

#include "rta/errors.hpp"

namespace rta {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

WordSequence tokenize(std::string_view text) {
  WordSequence words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

std::string join_words(const WordSequence& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      throw ParseError("invalid UTF-8 lead byte");
    }
    if (i + len > s.size()) throw ParseError("truncated UTF-8 sequence");
    for (std::size_t j = 1; j < len; ++j) {
      unsigned char cont = static_cast<unsigned char>(s[i + j]);
      if ((cont & 0xC0) != 0x80) throw ParseError("invalid UTF-8 continuation byte");
      cp = (cp << 6) | (cont & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }
  return out;
}

std::size_t codepoint_length(std::string_view s) {
  return utf8_decode(s).size();
}

std::string_view edit_kind_name(Edit::Kind kind) {
  switch (kind) {
    case Edit::Kind::SubstituteWord: return "substitute-word";
    case Edit::Kind::InsertChar: return "insert-char-in-word";
    case Edit::Kind::DeleteChar: return "delete-char-in-word";
    case Edit::Kind::SubstituteChar: return "substitute-char-in-word";
    case Edit::Kind::SwapAdjacentChars: return "swap-adjacent-chars";
    case Edit::Kind::InsertPunctuation: return "insert-punctuation";
  }
  return "unknown";
}

Edit::Kind edit_kind_from_name(std::string_view name) {
  if (name == "substitute-word") return Edit::Kind::SubstituteWord;
  if (name == "insert-char-in-word") return Edit::Kind::InsertChar;
  if (name == "delete-char-in-word") return Edit::Kind::DeleteChar;
  if (name == "substitute-char-in-word") return Edit::Kind::SubstituteChar;
  if (name == "swap-adjacent-chars") return Edit::Kind::SwapAdjacentChars;
  if (name == "insert-punctuation") return Edit::Kind::InsertPunctuation;
  throw ParseError("unknown edit kind: " + std::string(name));
}

AttackedText::AttackedText(WordSequence original)
    : original_(original), current_(std::move(original)) {}

AttackedText AttackedText::from_text(std::string_view text) {
  return AttackedText(tokenize(text));
}

namespace {

char32_t single_codepoint(const std::string& payload) {
  std::u32string cps = utf8_decode(payload);
  if (cps.size() != 1) throw InvalidParamError("char edit payload must be one code point");
  return cps[0];
}

bool codepoint_is_space(char32_t cp) {
  return cp < 0x80 && std::isspace(static_cast<int>(cp)) != 0;
}

}  // namespace

std::string apply_edit_to_word(const std::string& word, const Edit& e) {
  if (e.kind == Edit::Kind::SubstituteWord) {
    if (e.payload.empty()) throw InvalidParamError("replacement word must be non-empty");
    if (std::any_of(e.payload.begin(), e.payload.end(), is_space))
      throw InvalidParamError("replacement word must not contain whitespace");
    return e.payload;
  }

  std::u32string cps = utf8_decode(word);
  switch (e.kind) {
    case Edit::Kind::InsertChar:
    case Edit::Kind::InsertPunctuation: {
      char32_t cp = single_codepoint(e.payload);
      if (codepoint_is_space(cp)) throw InvalidParamError("char edits must not insert whitespace");
      if (e.offset > cps.size()) throw OutOfRangeError("insert offset out of range");
      if (e.kind == Edit::Kind::InsertPunctuation &&
          (e.offset == 0 || e.offset == cps.size()))
        throw OutOfRangeError("punctuation insertion must target an interior gap");
      cps.insert(cps.begin() + static_cast<std::ptrdiff_t>(e.offset), cp);
      break;
    }
    case Edit::Kind::DeleteChar: {
      if (e.offset >= cps.size()) throw OutOfRangeError("delete offset out of range");
      cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(e.offset));
      break;
    }
    case Edit::Kind::SubstituteChar: {
      char32_t cp = single_codepoint(e.payload);
      if (codepoint_is_space(cp)) throw InvalidParamError("char edits must not insert whitespace");
      if (e.offset >= cps.size()) throw OutOfRangeError("substitute offset out of range");
      cps[e.offset] = cp;
      break;
    }
    case Edit::Kind::SwapAdjacentChars: {
      if (e.offset + 1 >= cps.size()) throw OutOfRangeError("swap offset out of range");
      std::swap(cps[e.offset], cps[e.offset + 1]);
      break;
    }
    case Edit::Kind::SubstituteWord:
      break;  // handled above
  }
  if (cps.empty()) throw InvalidParamError("char edit would erase the whole token");
  return utf8_encode(cps);
}

AttackedText AttackedText::with_edit(const Edit& e) const {
  if (e.word_index >= current_.size()) throw OutOfRangeError("edit word_index out of range");
  AttackedText out = *this;
  out.current_[e.word_index] = apply_edit_to_word(current_[e.word_index], e);
  out.edits_.push_back(e);
  return out;
}

AttackedText apply_edit(const AttackedText& t, const Edit& e) {
  return t.with_edit(e);
}

WordSequence replay_edits(const WordSequence& original, std::span<const Edit> edits) {
  WordSequence words = original;
  for (const Edit& e : edits) {
    if (e.word_index >= words.size()) throw OutOfRangeError("edit word_index out of range");
    words[e.word_index] = apply_edit_to_word(words[e.word_index], e);
  }
  return words;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::u32string ua = utf8_decode(a);
  std::u32string ub = utf8_decode(b);
  if (ua.size() < ub.size()) std::swap(ua, ub);
  const std::size_t n = ub.size();
  std::vector<std::size_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = j;
  for (std::size_t i = 1; i <= ua.size(); ++i) {
    std::size_t prev_diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t del = row[j] + 1;
      std::size_t ins = row[j - 1] + 1;
      std::size_t sub = prev_diag + (ua[i - 1] == ub[j - 1] ? 0 : 1);
      prev_diag = row[j];
      row[j] = std::min({del, ins, sub});
    }
  }
  return row[n];
}

std::size_t lcs_length(const WordSequence& a, const WordSequence& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev_diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t tmp = row[j];
      if (a[i - 1] == b[j - 1])
        row[j] = prev_diag + 1;
      else
        row[j] = std::max(row[j], row[j - 1]);
      prev_diag = tmp;
    }
  }
  return row[b.size()];
}

double rouge_l(const WordSequence& reference, const WordSequence& candidate) {
  if (reference.empty() && candidate.empty()) return 1.0;
  if (reference.empty() || candidate.empty()) return 0.0;
  const double lcs = static_cast<double>(lcs_length(reference, candidate));
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

std::size_t perturbed_word_count(const AttackedText& t) {
  const WordSequence& a = t.original();
  const WordSequence& b = t.current();
  const std::size_t common = std::min(a.size(), b.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < common; ++i)
    if (a[i] != b[i]) ++count;
  count += std::max(a.size(), b.size()) - common;
  return count;
}

}  // namespace rta
