#include "rta/baselines.hpp"

#include <algorithm>

#include "rta/errors.hpp"
#include "rta/rng.hpp"
#include "rta/text.hpp"

namespace rta {

namespace {

const std::vector<std::string> kPositiveCorpus = {
    "good",      "great",   "best",      "nice",    "excellent", "amazing",
    "awesome",   "fantastic", "wonderful", "perfect", "ultimate",  "love",
    "like",      "beautiful", "well",      "better",  "easy",      "happy",
    "recommend", "works",   "fine",      "fast",    "fun",       "price",
    "quality",   "product", "value",     "bought",  "purchase",  "top",
    "popular",   "choice",  "!!!",
};

}  // namespace

std::span<const std::string> positive_word_corpus() { return kPositiveCorpus; }

std::string trivial_insert(const std::string& title, std::size_t k,
                           std::span<const std::string> corpus, std::mt19937_64& rng) {
  if (k < 1 || k > corpus.size())
    throw InvalidParamError("k must be in [1, corpus size]");
  std::vector<std::string> pool(corpus.begin(), corpus.end());
  std::vector<std::string> picks = rng_sample(pool, k, rng);
  std::string out = title;
  for (const std::string& word : picks) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::string render_rewrite_prompt(RewriteTemplate tmpl, const std::string& title,
                                  std::size_t max_len) {
  const std::string len = std::to_string(max_len);
  switch (tmpl) {
    case RewriteTemplate::Promote:
      return "You are a marketing expert that helps to promote the product selling. Rewrite the "
             "product title in " +
             len + " words to keep its body the same but more attractive to customers: " + title +
             ".";
    case RewriteTemplate::Catchy:
      return "Here is a basic title of a product. Use your creativity to transform it into a "
             "catchy and unique title in " +
             len + " words that could attract more attention: " + title + ".";
    case RewriteTemplate::PositiveWords:
      return "Rewrite this product's title by integrating positive and appealing words, making "
             "it more attractive to potential users without altering its original meaning (in " +
             len + " words): " + title + ".";
    case RewriteTemplate::Defense:
      return "Correct possible grammar, spelling and word substitution errors in the product "
             "title (dirctly output the revised title only): " +
             title;
  }
  throw InvalidParamError("unknown rewrite template");
}

std::string rewrite_external(const RewriterClient& client, RewriteTemplate tmpl,
                             const std::string& title, std::size_t max_len) {
  return client.rewrite(render_rewrite_prompt(tmpl, title, max_len));
}

ShillingPolicy shilling_policy_from_name(std::string_view name) {
  if (name == "random") return ShillingPolicy::Random;
  if (name == "bandwagon") return ShillingPolicy::Bandwagon;
  throw InvalidParamError("unknown shilling policy: " + std::string(name));
}

InteractionLog shilling_inject(ShillingPolicy policy, std::size_t n_fake,
                               std::size_t fillers_per_user,
                               std::span<const std::string> targets, const InteractionLog& log,
                               const Catalog& catalog, std::mt19937_64& rng) {
  if (n_fake < 1) throw InvalidParamError("n_fake must be >= 1");
  if (targets.empty()) throw InvalidParamError("at least one target item required");
  for (const std::string& t : targets)
    if (!catalog.contains(t)) throw UnknownItemError("unknown target item: " + t);

  std::vector<std::string> filler_pool;
  if (policy == ShillingPolicy::Random) {
    filler_pool = catalog.ids();
  } else {
    // Most-popular decile by interaction count, ties by item id.
    auto popularity = log.item_popularity();
    std::vector<std::string> ids = catalog.ids();
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
      std::int64_t pa = popularity.count(a) ? popularity.at(a) : 0;
      std::int64_t pb = popularity.count(b) ? popularity.at(b) : 0;
      if (pa != pb) return pa > pb;
      return a < b;
    });
    std::size_t pool_size = std::max<std::size_t>(ids.size() / 10, fillers_per_user);
    pool_size = std::min(pool_size, ids.size());
    filler_pool.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(pool_size));
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> fakes;
  fakes.reserve(n_fake);
  for (std::size_t i = 0; i < n_fake; ++i) {
    std::string user_id = "shill_" + std::to_string(i);
    while (log.has_user(user_id)) user_id += "_x";
    const std::string& target = targets[i % targets.size()];

    std::vector<std::string> pool;
    pool.reserve(filler_pool.size());
    for (const std::string& id : filler_pool)
      if (id != target) pool.push_back(id);
    std::vector<std::string> history = rng_sample(pool, fillers_per_user, rng);
    history.push_back(target);
    rng_shuffle(history, rng);
    fakes.emplace_back(std::move(user_id), std::move(history));
  }
  return log.with_users(fakes, catalog);
}

DefenseVocab DefenseVocab::from_catalog(const Catalog& catalog) {
  std::vector<std::string> titles;
  titles.reserve(catalog.size());
  for (const std::string& id : catalog.ids()) titles.push_back(catalog.title(id));
  return from_titles(titles);
}

DefenseVocab DefenseVocab::from_titles(std::span<const std::string> titles) {
  DefenseVocab v;
  std::unordered_map<std::string, std::unordered_map<std::string, std::int64_t>> surfaces;
  for (const std::string& title : titles) {
    for (const std::string& token : tokenize(title)) {
      std::string folded = to_lower(token);
      surfaces[folded][token] += 1;
      v.entries_[folded].total_freq += 1;
    }
  }
  for (auto& [folded, by_surface] : surfaces) {
    Entry& e = v.entries_[folded];
    for (const auto& [surface, freq] : by_surface) {
      if (freq > e.surface_freq || (freq == e.surface_freq && surface < e.surface)) {
        e.surface = surface;
        e.surface_freq = freq;
      }
    }
    v.folded_words_.push_back(folded);
  }
  std::sort(v.folded_words_.begin(), v.folded_words_.end());
  return v;
}

bool DefenseVocab::contains(const std::string& folded) const {
  return entries_.count(folded) > 0;
}

const std::string& DefenseVocab::surface(const std::string& folded) const {
  auto it = entries_.find(folded);
  if (it == entries_.end()) throw UnknownWordError("not in defense vocabulary: " + folded);
  return it->second.surface;
}

std::int64_t DefenseVocab::frequency(const std::string& folded) const {
  auto it = entries_.find(folded);
  return it == entries_.end() ? 0 : it->second.total_freq;
}

namespace {

std::string strip_interior_punct(const std::string& token, std::string_view punct_chars) {
  std::u32string cps = utf8_decode(token);
  if (cps.size() < 3) return token;
  std::u32string out;
  out.push_back(cps.front());
  for (std::size_t i = 1; i + 1 < cps.size(); ++i) {
    char32_t c = cps[i];
    bool is_punct = c < 0x80 && punct_chars.find(static_cast<char>(c)) != std::string_view::npos;
    if (!is_punct) out.push_back(c);
  }
  out.push_back(cps.back());
  return utf8_encode(out);
}

std::string correct_token(const std::string& token, const DefenseVocab& vocab,
                          std::size_t max_edit) {
  const std::string folded = to_lower(token);
  std::size_t best_distance = max_edit + 1;
  const std::string* best = nullptr;
  std::int64_t best_freq = -1;
  for (const std::string& word : vocab.folded_words()) {
    std::size_t d = levenshtein(folded, word);
    if (d > max_edit) continue;
    std::int64_t freq = vocab.frequency(word);
    bool wins = d < best_distance || (d == best_distance && freq > best_freq);
    if (wins) {
      best_distance = d;
      best = &word;
      best_freq = freq;
    }
  }
  if (!best) return token;
  return vocab.surface(*best);
}

}  // namespace

std::string defend_rewrite(const std::string& title, const DefenseVocab& vocab,
                           std::string_view punct_chars, std::size_t max_edit) {
  WordSequence out;
  for (const std::string& token : tokenize(title)) {
    std::string work = token;
    if (!vocab.contains(to_lower(work))) {
      std::string stripped = strip_interior_punct(work, punct_chars);
      if (stripped != work && vocab.contains(to_lower(stripped))) work = stripped;
    }
    if (!vocab.contains(to_lower(work))) work = correct_token(work, vocab, max_edit);
    out.push_back(std::move(work));
  }
  return join_words(out);
}

}  // namespace rta
