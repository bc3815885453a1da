#include "rta/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rta/errors.hpp"
#include "rta/io_util.hpp"
#include "rta/rng.hpp"
#include "rta/text.hpp"

namespace rta {

namespace {

std::string padded_id(const char* prefix, std::size_t index, std::size_t total) {
  std::size_t width = std::to_string(total).size();
  std::string digits = std::to_string(index);
  return std::string(prefix) + std::string(width > digits.size() ? width - digits.size() : 0, '0') +
         digits;
}

std::vector<std::vector<double>> cluster_directions(std::size_t clusters, int dim,
                                                    std::mt19937_64& rng) {
  // Random unit vectors, Gram-Schmidt orthonormalized so clusters do not
  // overlap by accident.
  std::vector<std::vector<double>> dirs;
  for (std::size_t c = 0; c < clusters; ++c) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = rng_normal(rng);
    for (const auto& prev : dirs) {
      double dot = 0.0;
      for (std::size_t d = 0; d < v.size(); ++d) dot += v[d] * prev[d];
      for (std::size_t d = 0; d < v.size(); ++d) v[d] -= dot * prev[d];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-9) throw InvalidParamError("dim too small for requested cluster count");
    for (double& x : v) x /= norm;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::string random_word(std::size_t len_min, std::size_t len_max, std::mt19937_64& rng) {
  static const char letters[] = "abcdefghijklmnopqrstuvwxyz";
  std::size_t len = len_min + static_cast<std::size_t>(rng_below(rng, len_max - len_min + 1));
  std::string w;
  for (std::size_t i = 0; i < len; ++i)
    w += letters[rng_below(rng, 26)];
  return w;
}

std::string capitalize(const std::string& w) {
  std::string out = w;
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
    out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

// Weighted draw without replacement under a Zipf profile over per-cluster
// item rank.
std::vector<std::size_t> zipf_sample(std::vector<std::size_t> pool, double exponent,
                                     std::size_t want, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  std::vector<double> weights(pool.size());
  while (out.size() < want && !pool.empty()) {
    double total = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      weights[i] = 1.0 / std::pow(static_cast<double>(pool[i] + 1), exponent);
      total += weights[i];
    }
    double draw = rng_unit(rng) * total;
    std::size_t pick = pool.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      acc += weights[i];
      if (draw <= acc) {
        pick = i;
        break;
      }
    }
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    weights.resize(pool.size());
  }
  return out;
}

}  // namespace

SynthDataset generate_synth(const SynthConfig& cfg) {
  if (cfg.items == 0 || cfg.users == 0 || cfg.clusters == 0 || cfg.dim <= 0)
    throw InvalidParamError("items, users, clusters and dim must be positive");
  if (cfg.title_min_words < 1 || cfg.title_max_words < cfg.title_min_words)
    throw InvalidParamError("bad title length range");
  if (cfg.history_min < 2 || cfg.history_max < cfg.history_min)
    throw InvalidParamError("bad history length range");

  std::mt19937_64 rng = make_rng(cfg.seed, "synth");
  SynthDataset out;

  std::vector<std::vector<double>> dirs = cluster_directions(cfg.clusters, cfg.dim, rng);

  // Vocabulary: random letter strings kept pairwise >= 5 edits apart so a
  // single-char corruption always corrects back to its source word.
  std::vector<std::vector<std::string>> cluster_words(cfg.clusters);
  std::vector<std::string> all_words;
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    while (cluster_words[c].size() < cfg.words_per_cluster) {
      std::string w = random_word(cfg.word_len_min, cfg.word_len_max, rng);
      bool ok = true;
      for (const std::string& prev : all_words) {
        if (levenshtein(w, prev) < 5) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cluster_words[c].push_back(w);
      all_words.push_back(w);
    }
  }

  // Word vectors scatter around the cluster direction.
  static const PosTag kTagCycle[] = {PosTag::Noun, PosTag::Verb, PosTag::Adj, PosTag::Adv};
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    for (std::size_t w = 0; w < cluster_words[c].size(); ++w) {
      std::vector<double> vec = dirs[c];
      for (double& x : vec) x += cfg.word_noise * rng_normal(rng);
      double norm = 0.0;
      for (double x : vec) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : vec) x /= norm;
      out.embeddings.emplace_back(cluster_words[c][w], std::move(vec));
      out.pos_entries.emplace_back(cluster_words[c][w], kTagCycle[w % 4]);
    }
  }

  // Items: cluster-coherent Title Case titles, occasionally diluted with a
  // protected stopword.
  std::span<const std::string_view> stopwords = default_stopwords();
  std::vector<std::size_t> item_cluster(cfg.items);
  std::vector<std::pair<std::string, std::string>> items;
  for (std::size_t i = 0; i < cfg.items; ++i) {
    std::size_t c = static_cast<std::size_t>(rng_below(rng, cfg.clusters));
    item_cluster[i] = c;
    std::size_t len = cfg.title_min_words +
                      static_cast<std::size_t>(
                          rng_below(rng, cfg.title_max_words - cfg.title_min_words + 1));
    std::vector<std::string> words = rng_sample(cluster_words[c], len, rng);
    WordSequence title_words;
    for (const std::string& w : words) title_words.push_back(capitalize(w));
    if (rng_unit(rng) < cfg.stopword_prob) {
      std::string stop(stopwords[rng_below(rng, stopwords.size())]);
      std::size_t pos = static_cast<std::size_t>(rng_below(rng, title_words.size() + 1));
      title_words.insert(title_words.begin() + static_cast<std::ptrdiff_t>(pos), stop);
    }
    items.emplace_back(padded_id("i", i, cfg.items), join_words(title_words));
  }
  out.catalog = Catalog::from_items(std::move(items));

  // Users: home-cluster histories with Zipf popularity and light
  // cross-cluster contamination.
  std::vector<std::vector<std::size_t>> cluster_items(cfg.clusters);
  for (std::size_t i = 0; i < cfg.items; ++i) cluster_items[item_cluster[i]].push_back(i);

  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    std::size_t home = static_cast<std::size_t>(rng_below(rng, cfg.clusters));
    if (cluster_items[home].empty()) home = 0;
    std::size_t len = cfg.history_min +
                      static_cast<std::size_t>(rng_below(rng, cfg.history_max - cfg.history_min + 1));
    // Rank within the cluster drives popularity: low indices are popular.
    std::vector<std::size_t> ranked = cluster_items[home];
    std::vector<std::size_t> rank_keys(ranked.size());
    for (std::size_t r = 0; r < ranked.size(); ++r) rank_keys[r] = r;
    std::vector<std::size_t> picks = zipf_sample(rank_keys, cfg.zipf_exponent, len, rng);

    std::vector<std::string> history;
    for (std::size_t rank : picks) {
      std::size_t item_index = ranked[rank];
      if (rng_unit(rng) < cfg.cross_cluster_prob) {
        std::size_t other = static_cast<std::size_t>(rng_below(rng, cfg.clusters));
        if (!cluster_items[other].empty())
          item_index = cluster_items[other][rng_below(rng, cluster_items[other].size())];
      }
      history.push_back(out.catalog.ids()[item_index]);
    }
    // Drop accidental duplicates from contamination; keep first occurrence.
    std::vector<std::string> dedup;
    for (std::string& id : history)
      if (std::find(dedup.begin(), dedup.end(), id) == dedup.end()) dedup.push_back(std::move(id));
    entries.emplace_back(padded_id("u", u, cfg.users), std::move(dedup));
  }
  out.log = InteractionLog::from_entries(std::move(entries), out.catalog);
  return out;
}

Lexicon lexicon_from_synth(const SynthDataset& dataset) {
  Lexicon lex;
  for (const auto& [word, vec] : dataset.embeddings) lex.add_word(word, vec);
  std::vector<std::string> stops;
  for (std::string_view w : default_stopwords()) stops.emplace_back(w);
  lex.set_stopwords(std::move(stops));
  for (const auto& [word, tag] : dataset.pos_entries) lex.add_pos(word, tag);
  return lex;
}

void write_synth_dataset(const SynthDataset& dataset, const std::string& dir) {
  std::filesystem::create_directories(dir);
  dataset.catalog.save_jsonl(dir + "/catalog.jsonl");
  dataset.log.save_jsonl(dir + "/interactions.jsonl");

  std::ostringstream emb;
  emb.precision(17);
  for (const auto& [word, vec] : dataset.embeddings) {
    emb << word;
    for (double v : vec) emb << ' ' << v;
    emb << '\n';
  }
  atomic_write_file(dir + "/embeddings.txt", emb.str());

  write_default_stopwords(dir + "/stopwords.txt");

  std::string pos;
  for (const auto& [word, tag] : dataset.pos_entries) {
    pos += word;
    pos += ' ';
    pos += pos_tag_name(tag);
    pos += '\n';
  }
  atomic_write_file(dir + "/pos.txt", pos);
}

}  // namespace rta
