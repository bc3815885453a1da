#include "rta/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rta/errors.hpp"
#include "rta/io_util.hpp"

namespace rta {

std::string_view pos_tag_name(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Other: return "OTHER";
    case PosTag::Unk: return "UNK";
  }
  return "UNK";
}

PosTag pos_tag_from_name(std::string_view name) {
  if (name == "NOUN") return PosTag::Noun;
  if (name == "VERB") return PosTag::Verb;
  if (name == "ADJ") return PosTag::Adj;
  if (name == "ADV") return PosTag::Adv;
  if (name == "OTHER") return PosTag::Other;
  if (name == "UNK") return PosTag::Unk;
  throw ParseError("unknown POS tag: " + std::string(name));
}

namespace {

// Lower enum value wins when a word carries several tags.
int tag_priority(PosTag tag) { return static_cast<int>(tag); }

}  // namespace

Lexicon Lexicon::load_embeddings(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding file: " + path);

  Lexicon lex;
  std::unordered_map<std::string, std::vector<double>> rows;
  std::vector<std::string> order;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word.empty()) continue;
    word = to_lower(word);
    std::vector<double> vec;
    double v;
    while (ss >> v) vec.push_back(v);
    if (!ss.eof())
      throw ParseError("bad float in embedding file " + path + " line " +
                       std::to_string(line_no));
    if (vec.empty())
      throw ParseError("missing vector in embedding file " + path + " line " +
                       std::to_string(line_no));
    if (lex.dim_ == 0) lex.dim_ = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != lex.dim_)
      throw ParseError("inconsistent dimension in embedding file " + path + " line " +
                       std::to_string(line_no));
    auto [it, inserted] = rows.emplace(word, std::move(vec));
    if (inserted) {
      order.push_back(word);
    } else {
      it->second = std::move(vec);
      if (warnings)
        warnings->push_back("duplicate word '" + word + "' at line " +
                            std::to_string(line_no) + ", last row wins");
    }
  }
  for (const std::string& w : order) lex.add_word(w, rows.at(w));
  return lex;
}

void Lexicon::load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    WordSequence toks = tokenize(line);
    for (std::string& t : toks) words.push_back(to_lower(t));
  }
  set_stopwords(std::move(words));
}

void Lexicon::load_pos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open POS file: " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    WordSequence toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError("expected `word TAG` in " + path + " line " + std::to_string(line_no));
    add_pos(to_lower(toks[0]), pos_tag_from_name(toks[1]));
  }
}

void Lexicon::add_word(std::string_view word, std::vector<double> vec) {
  if (vec.empty()) throw InvalidParamError("embedding vector must be non-empty");
  if (dim_ == 0) dim_ = static_cast<int>(vec.size());
  if (static_cast<int>(vec.size()) != dim_)
    throw InvalidParamError("embedding dimension mismatch");
  std::string key = to_lower(word);
  auto it = index_.find(key);
  if (it != index_.end()) {
    vectors_[it->second] = std::move(vec);
    norms_.clear();
    rebuild_index();
    return;
  }
  words_.push_back(key);
  vectors_.push_back(std::move(vec));
  rebuild_index();
}

void Lexicon::rebuild_index() {
  std::vector<std::size_t> perm(words_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return words_[a] < words_[b]; });
  std::vector<std::string> words(words_.size());
  std::vector<std::vector<double>> vectors(words_.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    words[i] = std::move(words_[perm[i]]);
    vectors[i] = std::move(vectors_[perm[i]]);
  }
  words_ = std::move(words);
  vectors_ = std::move(vectors);
  index_.clear();
  norms_.resize(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_[words_[i]] = i;
    double s = 0.0;
    for (double v : vectors_[i]) s += v * v;
    norms_[i] = std::sqrt(s);
  }
}

void Lexicon::set_stopwords(std::vector<std::string> words) {
  stopwords_.clear();
  for (std::string& w : words) stopwords_.insert(to_lower(w));
}

void Lexicon::add_pos(std::string_view word, PosTag tag) {
  std::string key = to_lower(word);
  auto it = pos_.find(key);
  if (it == pos_.end() || tag_priority(tag) < tag_priority(it->second)) pos_[key] = tag;
}

bool Lexicon::contains(std::string_view word) const {
  return index_.count(to_lower(word)) > 0;
}

std::span<const double> Lexicon::vector_of(std::string_view word) const {
  auto it = index_.find(to_lower(word));
  if (it == index_.end()) return {};
  return vectors_[it->second];
}

bool Lexicon::is_stopword(std::string_view word) const {
  return stopwords_.count(to_lower(word)) > 0;
}

PosTag Lexicon::pos_tag(std::string_view word) const {
  auto it = pos_.find(to_lower(word));
  return it == pos_.end() ? PosTag::Unk : it->second;
}

double Lexicon::cosine(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty() || a.size() != b.size()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double Lexicon::angular_similarity(double cosine) {
  double c = std::clamp(cosine, -1.0, 1.0);
  return 1.0 - std::acos(c) / 3.14159265358979323846;
}

std::vector<std::string> Lexicon::nearest_neighbors(std::string_view word, std::size_t k,
                                                    double min_cos) const {
  std::string key = to_lower(word);
  auto it = index_.find(key);
  if (it == index_.end()) throw UnknownWordError("word not in vocabulary: " + key);
  if (k == 0) return {};

  const std::vector<double>& q = vectors_[it->second];
  const double qn = norms_[it->second];
  std::vector<std::pair<double, std::size_t>> hits;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i == it->second) continue;
    if (qn == 0.0 || norms_[i] == 0.0) continue;
    double dot = 0.0;
    for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * vectors_[i][d];
    double cos = dot / (qn * norms_[i]);
    if (cos >= min_cos) hits.emplace_back(cos, i);
  }
  std::sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words_[a.second] < words_[b.second];
  });
  if (hits.size() > k) hits.resize(k);
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (const auto& [cos, i] : hits) out.push_back(words_[i]);
  return out;
}

std::vector<double> Lexicon::mean_vector(const WordSequence& words) const {
  std::vector<double> mean(static_cast<std::size_t>(std::max(dim_, 0)), 0.0);
  std::size_t known = 0;
  for (const std::string& w : words) {
    std::span<const double> v = vector_of(w);
    if (v.empty()) continue;
    for (std::size_t d = 0; d < v.size(); ++d) mean[d] += v[d];
    ++known;
  }
  if (known > 0)
    for (double& v : mean) v /= static_cast<double>(known);
  return mean;
}

double Lexicon::sentence_cosine(const WordSequence& a, const WordSequence& b) const {
  std::size_t known_a = 0, known_b = 0;
  for (const std::string& w : a)
    if (!vector_of(w).empty()) ++known_a;
  for (const std::string& w : b)
    if (!vector_of(w).empty()) ++known_b;
  if (known_a == 0 || known_b == 0) return a == b ? 1.0 : 0.0;
  return cosine(mean_vector(a), mean_vector(b));
}

namespace {

constexpr std::string_view kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're",
    "you've", "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he",
    "him", "his", "himself", "she", "she's", "her", "hers", "herself", "it",
    "it's", "its", "itself", "they", "them", "their", "theirs", "themselves",
    "what", "which", "who", "whom", "this", "that", "that'll", "these", "those",
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and",
    "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
    "for", "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both",
    "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
    "only", "own", "same", "so", "than", "too", "very", "s", "t", "can",
    "will", "just", "don", "don't", "should", "should've", "now", "d", "ll",
    "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't",
    "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't",
    "haven", "haven't", "isn", "isn't", "ma", "mightn", "mightn't", "mustn",
    "mustn't", "needn", "needn't", "shan", "shan't", "shouldn", "shouldn't",
    "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

}  // namespace

std::span<const std::string_view> default_stopwords() {
  return kStopwords;
}

void write_default_stopwords(const std::string& path) {
  std::string body;
  for (std::string_view w : kStopwords) {
    body += w;
    body += '\n';
  }
  atomic_write_file(path, body);
}

}  // namespace rta
