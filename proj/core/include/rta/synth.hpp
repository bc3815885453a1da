#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rta/dataset.hpp"
#include "rta/lexicon.hpp"

namespace rta {

/// Knobs for the generated benchmark dataset: a clustered item vocabulary
/// (one embedding direction per cluster), Zipf-distributed item popularity,
/// and user histories sampled within a home cluster.
struct SynthConfig {
  std::size_t items = 1000;
  std::size_t users = 500;
  int dim = 64;
  std::size_t clusters = 5;
  std::size_t words_per_cluster = 80;
  std::size_t title_min_words = 5;
  std::size_t title_max_words = 8;
  std::size_t history_min = 8;
  std::size_t history_max = 14;
  double word_noise = 0.35;          // word vector spread around its cluster
  double cross_cluster_prob = 0.05;  // history contamination
  double stopword_prob = 0.25;       // chance a title carries one stopword
  std::size_t word_len_min = 5;
  std::size_t word_len_max = 9;
  double zipf_exponent = 1.1;
  std::uint64_t seed = 42;
};

struct SynthDataset {
  Catalog catalog;
  InteractionLog log;
  std::vector<std::pair<std::string, std::vector<double>>> embeddings;  // lowercase words
  std::vector<std::pair<std::string, PosTag>> pos_entries;
};

SynthDataset generate_synth(const SynthConfig& config);

/// Writes catalog.jsonl, interactions.jsonl, embeddings.txt, stopwords.txt
/// and pos.txt under dir (created if needed).
void write_synth_dataset(const SynthDataset& dataset, const std::string& dir);

Lexicon lexicon_from_synth(const SynthDataset& dataset);

}  // namespace rta
