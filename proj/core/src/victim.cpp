#include "rta/victim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "rta/errors.hpp"
#include "rta/io_util.hpp"
#include "rta/text.hpp"

namespace rta {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  if (s > 0.0) {
    double inv = 1.0 / std::sqrt(s);
    for (double& x : v) x *= inv;
  }
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

std::vector<double> SimRec::fallback_vector(int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim), 1.0);
  normalize(v);
  return v;
}

SimRec SimRec::fit(const Catalog& catalog, std::shared_ptr<const Lexicon> lexicon, double tau,
                   FitReport* report) {
  if (catalog.size() == 0) throw EmptyCatalogError("cannot fit on an empty catalog");
  if (!(tau > 0.0)) throw InvalidParamError("temperature must be > 0");
  if (!lexicon || lexicon->dim() <= 0) throw InvalidParamError("lexicon with vectors required");

  SimRec v;
  v.lexicon_ = std::move(lexicon);
  v.tau_ = tau;
  v.dim_ = v.lexicon_->dim();
  v.item_ids_ = catalog.ids();
  v.rows_.resize(v.item_ids_.size() * static_cast<std::size_t>(v.dim_));
  for (std::size_t i = 0; i < v.item_ids_.size(); ++i) {
    const std::string& id = v.item_ids_[i];
    v.row_of_[id] = i;
    std::vector<double> vec = v.lexicon_->mean_vector(tokenize(catalog.title(id)));
    bool zero = std::all_of(vec.begin(), vec.end(), [](double x) { return x == 0.0; });
    if (zero) {
      vec = fallback_vector(v.dim_);
      if (report) report->fallback_items.push_back(id);
    } else {
      normalize(vec);
    }
    std::copy(vec.begin(), vec.end(), v.rows_.begin() + static_cast<std::ptrdiff_t>(i * v.dim_));
  }
  if (report) {
    report->item_count = v.item_ids_.size();
    report->dim = v.dim_;
    report->tau = v.tau_;
  }
  return v;
}

std::vector<double> SimRec::embed_title(const std::string& title) const {
  std::vector<double> mean = lexicon_->mean_vector(tokenize(title));
  double s = 0.0;
  for (double x : mean) s += x * x;
  if (s == 0.0) return fallback_vector(dim_);
  normalize(mean);
  return mean;
}

std::span<const double> SimRec::item_vector(const std::string& item_id) const {
  auto it = row_of_.find(item_id);
  if (it == row_of_.end()) return {};
  return {rows_.data() + it->second * static_cast<std::size_t>(dim_),
          static_cast<std::size_t>(dim_)};
}

namespace {

std::vector<double> profile_vector(const SimRec& v, std::span<const std::string> history) {
  std::vector<double> profile(static_cast<std::size_t>(v.dim()), 0.0);
  for (const std::string& title : history) {
    std::vector<double> t = v.embed_title(title);
    for (std::size_t d = 0; d < profile.size(); ++d) profile[d] += t[d];
  }
  double s = 0.0;
  for (double x : profile) s += x * x;
  if (s > 0.0) {
    double inv = 1.0 / std::sqrt(s);
    for (double& x : profile) x *= inv;
  }
  return profile;
}

}  // namespace

double SimRec::score(std::span<const std::string> history_titles,
                     const std::string& candidate_title, QueryCounter& ctr) const {
  if (history_titles.empty()) throw EmptyHistoryError("history must be non-empty");
  ctr.increment();
  std::vector<double> profile = profile_vector(*this, history_titles);
  std::vector<double> cand = embed_title(candidate_title);
  double cos = 0.0;
  for (std::size_t d = 0; d < cand.size(); ++d) cos += profile[d] * cand[d];
  return sigmoid(cos / tau_);
}

std::vector<std::string> SimRec::rank_topk(std::span<const std::string> history_titles,
                                           std::size_t k, const Catalog& catalog,
                                           bool exclude_history, QueryCounter& ctr) const {
  if (history_titles.empty()) throw EmptyHistoryError("history must be non-empty");
  if (k == 0) throw InvalidParamError("k must be >= 1");
  ctr.increment();

  std::vector<double> profile = profile_vector(*this, history_titles);
  std::unordered_set<std::string> excluded;
  if (exclude_history)
    excluded.insert(history_titles.begin(), history_titles.end());

  const std::vector<std::string>& ids = catalog.ids();
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string& id = ids[i];
    const std::string& title = catalog.title(id);
    if (exclude_history && excluded.count(title)) continue;
    double cos = 0.0;
    if (!catalog.overrides().count(id)) {
      std::span<const double> row = item_vector(id);
      if (!row.empty()) {
        for (std::size_t d = 0; d < row.size(); ++d) cos += profile[d] * row[d];
      } else {
        std::vector<double> vec = embed_title(title);
        for (std::size_t d = 0; d < vec.size(); ++d) cos += profile[d] * vec[d];
      }
    } else {
      std::vector<double> vec = embed_title(title);
      for (std::size_t d = 0; d < vec.size(); ++d) cos += profile[d] * vec[d];
    }
    scored.emplace_back(cos, i);
  }

  std::size_t take = std::min(k, scored.size());
  auto better = [&](const std::pair<double, std::size_t>& a,
                    const std::pair<double, std::size_t>& b) {
    if (a.first != b.first) return a.first > b.first;
    return ids[a.second] < ids[b.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), better);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(ids[scored[i].second]);
  return out;
}

std::string SimRec::id() const {
  std::ostringstream ss;
  ss << "simrec(d=" << dim_ << ",tau=" << tau_ << ")";
  return ss.str();
}

void SimRec::save(const std::string& path) const {
  std::string body = "simrec v1 d=" + std::to_string(dim_) + " tau=" + format_double(tau_) + "\n";
  for (const std::string& id : item_ids_) {
    body += id;
    std::span<const double> row = item_vector(id);
    for (double v : row) {
      body += ' ';
      body += format_double(v);
    }
    body += '\n';
  }
  atomic_write_file(path, body);
}

SimRec SimRec::load(const std::string& path, std::shared_ptr<const Lexicon> lexicon) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty model file: " + path);
  std::istringstream hs(header);
  std::string magic, version, dim_field, tau_field;
  hs >> magic >> version >> dim_field >> tau_field;
  if (magic != "simrec" || version != "v1" || dim_field.rfind("d=", 0) != 0 ||
      tau_field.rfind("tau=", 0) != 0)
    throw ParseError("bad model header: " + header);

  SimRec v;
  v.lexicon_ = std::move(lexicon);
  v.dim_ = std::stoi(dim_field.substr(2));
  v.tau_ = std::stod(tau_field.substr(4));
  if (v.dim_ <= 0 || !(v.tau_ > 0.0)) throw ParseError("bad model header: " + header);
  if (v.lexicon_ && v.lexicon_->dim() != 0 && v.lexicon_->dim() != v.dim_)
    throw ParseError("model dimension does not match lexicon");

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id;
    ss >> id;
    std::vector<double> vec;
    double x;
    while (ss >> x) vec.push_back(x);
    if (static_cast<int>(vec.size()) != v.dim_)
      throw ParseError("bad model row at " + path + " line " + std::to_string(line_no));
    v.row_of_[id] = v.item_ids_.size();
    v.item_ids_.push_back(id);
    v.rows_.insert(v.rows_.end(), vec.begin(), vec.end());
  }
  return v;
}

std::vector<std::string> history_titles(const InteractionLog& log, const Catalog& catalog,
                                        const std::string& user_id) {
  std::vector<std::string> titles;
  for (const std::string& id : log.history(user_id)) titles.push_back(catalog.title(id));
  return titles;
}

double exposure_estimate(const VictimModel& victim, const std::string& item_id,
                         std::span<const std::string> user_sample, std::size_t k,
                         const InteractionLog& log, const Catalog& catalog, QueryCounter& ctr) {
  if (!catalog.contains(item_id)) throw UnknownItemError("unknown item: " + item_id);
  if (user_sample.empty()) throw EmptySampleError("user sample must be non-empty");
  std::size_t hits = 0;
  for (const std::string& user : user_sample) {
    std::vector<std::string> titles = history_titles(log, catalog, user);
    std::vector<std::string> top = victim.rank_topk(titles, k, catalog, true, ctr);
    if (std::find(top.begin(), top.end(), item_id) != top.end()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(user_sample.size());
}

PromptStyle prompt_style_from_name(std::string_view name) {
  if (name == "none" || name.empty()) return PromptStyle::None;
  if (name == "title-list") return PromptStyle::TitleList;
  if (name == "direct-rec") return PromptStyle::DirectRec;
  if (name == "rating-query") return PromptStyle::RatingQuery;
  if (name == "rating-query-ids") return PromptStyle::RatingQueryWithIds;
  throw InvalidParamError("unknown prompt style: " + std::string(name));
}

std::string_view prompt_style_name(PromptStyle style) {
  switch (style) {
    case PromptStyle::None: return "none";
    case PromptStyle::TitleList: return "title-list";
    case PromptStyle::DirectRec: return "direct-rec";
    case PromptStyle::RatingQuery: return "rating-query";
    case PromptStyle::RatingQueryWithIds: return "rating-query-ids";
  }
  return "none";
}

namespace {

std::string join_titles(std::span<const std::string> titles) {
  std::string out;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    if (i) out += ", ";
    out += titles[i];
  }
  return out;
}

}  // namespace

std::string render_prompt(PromptStyle style, std::span<const std::string> history_titles,
                          const std::string& candidate_title, const std::string& user_id,
                          const std::string& item_id) {
  switch (style) {
    case PromptStyle::None:
      return "";
    case PromptStyle::TitleList:
      return join_titles(history_titles);
    case PromptStyle::DirectRec:
      return "I would like to recommend some items for " + user_id +
             ". Is the following item a good choice? " + candidate_title;
    case PromptStyle::RatingQuery:
      return "A user has given high ratings to the following products: " +
             join_titles(history_titles) +
             ". Leverage the information to predict whether the user would enjoy the product "
             "titled " +
             candidate_title + "? Answer with \"Yes\" or \"No\".";
    case PromptStyle::RatingQueryWithIds:
      return "A user has given high ratings to the following products: " +
             join_titles(history_titles) +
             ". Additionally, we have information about the user's preferences encoded in the "
             "feature " +
             user_id +
             ". Using all available information, make a prediction about whether the user would "
             "enjoy the product titled " +
             candidate_title + " with the feature " + item_id + "? Answer with \"Yes\" or \"No\"";
  }
  return "";
}

}  // namespace rta
