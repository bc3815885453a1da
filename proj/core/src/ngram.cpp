#include "rta/ngram.hpp"

#include <algorithm>
#include <cmath>

#include "rta/errors.hpp"
#include "rta/lexicon.hpp"

namespace rta {

namespace {
// Control-character sentinels cannot collide with tokenizer output.
const std::string kBegin = "\x02";
const std::string kEnd = "\x03";
const std::string kUnk = "\x01";
}  // namespace

const std::string& NGramLM::begin_token() { return kBegin; }
const std::string& NGramLM::end_token() { return kEnd; }
const std::string& NGramLM::unk_token() { return kUnk; }

NGramLM NGramLM::fit(const std::vector<WordSequence>& corpus, int order, double alpha) {
  if (order < 1) throw InvalidParamError("n-gram order must be >= 1");
  if (!(alpha > 0.0)) throw InvalidParamError("smoothing alpha must be > 0");
  if (corpus.empty()) throw InvalidParamError("training corpus must be non-empty");

  NGramLM lm;
  lm.order_ = order;
  lm.alpha_ = alpha;

  for (const WordSequence& sentence : corpus) {
    std::vector<std::string> padded(static_cast<std::size_t>(order - 1), kBegin);
    for (const std::string& w : sentence) {
      std::string folded = to_lower(w);
      lm.vocab_[folded] = true;
      padded.push_back(std::move(folded));
    }
    padded.push_back(kEnd);

    const std::size_t ctx_len = static_cast<std::size_t>(order - 1);
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
      std::span<const std::string> ctx(padded.data() + (i - ctx_len), ctx_len);
      std::string key = lm.context_key(ctx);
      lm.counts_[key][padded[i]] += 1;
      lm.context_totals_[key] += 1;
      lm.event_totals_[padded[i]] += 1;
      lm.total_events_ += 1;
    }
  }
  return lm;
}

std::string NGramLM::fold_token(const std::string& word) const {
  if (word == kBegin || word == kEnd || word == kUnk) return word;
  std::string folded = to_lower(word);
  return vocab_.count(folded) ? folded : kUnk;
}

std::string NGramLM::context_key(std::span<const std::string> folded_context) const {
  std::string key;
  for (const std::string& w : folded_context) {
    key += w;
    key += '\x1f';
  }
  return key;
}

double NGramLM::probability(std::span<const std::string> context, const std::string& word) const {
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<std::string> folded(ctx_len, kBegin);
  // Keep the rightmost order-1 words.
  std::size_t take = std::min(context.size(), ctx_len);
  for (std::size_t i = 0; i < take; ++i) {
    const std::string& w = context[context.size() - take + i];
    folded[ctx_len - take + i] = fold_token(w);
  }
  std::string key = context_key(folded);
  std::int64_t total = 0;
  std::int64_t count = 0;
  auto tot_it = context_totals_.find(key);
  if (tot_it != context_totals_.end()) {
    total = tot_it->second;
    const auto& row = counts_.at(key);
    auto it = row.find(fold_token(word));
    if (it != row.end()) count = it->second;
  }
  const double vprime = static_cast<double>(support_size());
  return (static_cast<double>(count) + alpha_) /
         (static_cast<double>(total) + alpha_ * vprime);
}

double NGramLM::unigram_probability(const std::string& word) const {
  std::int64_t count = 0;
  auto it = event_totals_.find(fold_token(word));
  if (it != event_totals_.end()) count = it->second;
  const double vprime = static_cast<double>(support_size());
  return (static_cast<double>(count) + alpha_) /
         (static_cast<double>(total_events_) + alpha_ * vprime);
}

bool NGramLM::in_vocab(std::string_view word) const {
  return vocab_.count(to_lower(word)) > 0;
}

double NGramLM::perplexity(const WordSequence& text) const {
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<std::string> padded(ctx_len, kBegin);
  for (const std::string& w : text) padded.push_back(fold_token(w));

  double nll = 0.0;
  std::size_t events = 0;
  for (std::size_t i = ctx_len; i <= padded.size(); ++i) {
    std::span<const std::string> ctx(padded.data() + (i - ctx_len), ctx_len);
    const std::string& word = i < padded.size() ? padded[i] : kEnd;
    nll -= std::log(probability(ctx, word));
    ++events;
  }
  return std::exp(nll / static_cast<double>(events));
}

std::vector<std::string> NGramLM::left_context(const std::vector<std::string>& folded,
                                               std::size_t index) const {
  const std::size_t ctx_len = static_cast<std::size_t>(order_ - 1);
  std::vector<std::string> ctx(ctx_len, kBegin);
  std::size_t take = std::min(index, ctx_len);
  for (std::size_t i = 0; i < take; ++i) ctx[ctx_len - take + i] = folded[index - take + i];
  return ctx;
}

std::vector<std::string> NGramLM::contextual_candidates(const Lexicon& lex,
                                                        const WordSequence& text,
                                                        std::size_t index, std::size_t k) const {
  if (index >= text.size()) throw OutOfRangeError("contextual candidate index out of range");
  if (k == 0) return {};

  std::vector<std::string> folded;
  folded.reserve(text.size());
  for (const std::string& w : text) folded.push_back(fold_token(w));

  const std::string original = to_lower(text[index]);
  const std::string next =
      index + 1 < text.size() ? folded[index + 1] : kEnd;
  std::vector<std::string> left = left_context(folded, index);

  std::vector<std::pair<double, const std::string*>> scored;
  scored.reserve(lex.words().size());
  for (const std::string& cand : lex.words()) {
    if (cand == original) continue;
    double left_p = index == 0 ? unigram_probability(cand)
                               : probability(left, cand);
    // Right continuation: shift the candidate into the context window.
    std::vector<std::string> right_ctx = left;
    if (!right_ctx.empty()) {
      right_ctx.erase(right_ctx.begin());
      right_ctx.push_back(fold_token(cand));
    }
    double right_p = probability(right_ctx, next);
    scored.emplace_back(left_p * right_p, &cand);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  if (scored.size() > k) scored.resize(k);
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (const auto& [p, w] : scored) out.push_back(*w);
  return out;
}

}  // namespace rta
