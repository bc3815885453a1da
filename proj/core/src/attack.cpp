#include "rta/attack.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "rta/errors.hpp"
#include "rta/rng.hpp"

namespace rta {

std::string_view constraint_kind_name(Constraint::Kind kind) {
  switch (kind) {
    case Constraint::Kind::RepeatModification: return "repeat-modification";
    case Constraint::Kind::StopwordModification: return "stopword-modification";
    case Constraint::Kind::LevenshteinMax: return "levenshtein-max";
    case Constraint::Kind::EmbeddingDistance: return "embedding-distance";
    case Constraint::Kind::PartOfSpeech: return "part-of-speech";
    case Constraint::Kind::SentenceSimilarity: return "sentence-similarity";
    case Constraint::Kind::MaxWordsPerturbed: return "max-words-perturbed";
  }
  return "unknown";
}

namespace {

std::optional<Violation> check_one(const Constraint& c, const AttackedText& original,
                                   const AttackedText& candidate, const Lexicon& lex) {
  const WordSequence& ref = original.current();
  const WordSequence& cur = candidate.current();

  switch (c.kind) {
    case Constraint::Kind::RepeatModification: {
      std::unordered_map<std::size_t, int> touched;
      for (const Edit& e : candidate.edits())
        if (++touched[e.word_index] > 1)
          return Violation{"repeat-modification",
                           "word " + std::to_string(e.word_index) + " modified twice"};
      return std::nullopt;
    }
    case Constraint::Kind::StopwordModification: {
      const WordSequence& base = candidate.original();
      for (const Edit& e : candidate.edits()) {
        if (e.word_index < base.size() && lex.is_stopword(base[e.word_index]))
          return Violation{"stopword-modification",
                           "stopword '" + base[e.word_index] + "' modified"};
      }
      return std::nullopt;
    }
    case Constraint::Kind::LevenshteinMax: {
      std::size_t d = levenshtein(join_words(ref), join_words(cur));
      if (d > c.max_distance)
        return Violation{"levenshtein-max", "edit distance " + std::to_string(d) + " > " +
                                                std::to_string(c.max_distance)};
      return std::nullopt;
    }
    case Constraint::Kind::EmbeddingDistance: {
      std::size_t common = std::min(ref.size(), cur.size());
      for (std::size_t i = 0; i < common; ++i) {
        if (ref[i] == cur[i]) continue;
        std::span<const double> a = lex.vector_of(ref[i]);
        std::span<const double> b = lex.vector_of(cur[i]);
        if (a.empty() || b.empty()) continue;  // out-of-vocab pairs pass
        double cos = Lexicon::cosine(a, b);
        if (cos < c.min_cos)
          return Violation{"embedding-distance",
                           "'" + ref[i] + "' -> '" + cur[i] + "' cosine below floor"};
      }
      return std::nullopt;
    }
    case Constraint::Kind::PartOfSpeech: {
      std::size_t common = std::min(ref.size(), cur.size());
      for (std::size_t i = 0; i < common; ++i) {
        if (ref[i] == cur[i]) continue;
        PosTag a = lex.pos_tag(ref[i]);
        PosTag b = lex.pos_tag(cur[i]);
        if (a == PosTag::Unk || b == PosTag::Unk) continue;
        bool ok = a == b || (c.allow_verb_noun_swap &&
                             ((a == PosTag::Noun && b == PosTag::Verb) ||
                              (a == PosTag::Verb && b == PosTag::Noun)));
        if (!ok)
          return Violation{"part-of-speech", "'" + ref[i] + "' -> '" + cur[i] + "' changes tag"};
      }
      return std::nullopt;
    }
    case Constraint::Kind::SentenceSimilarity: {
      double cos = lex.sentence_cosine(ref, cur);
      double sim = c.metric == SimMetric::Angular ? Lexicon::angular_similarity(cos) : cos;
      if (sim < c.threshold)
        return Violation{"sentence-similarity", "similarity below threshold"};
      return std::nullopt;
    }
    case Constraint::Kind::MaxWordsPerturbed: {
      if (ref.empty()) return std::nullopt;
      double frac = static_cast<double>(perturbed_word_count(candidate)) /
                    static_cast<double>(ref.size());
      if (frac > c.max_fraction)
        return Violation{"max-words-perturbed", "perturbed fraction above cap"};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> check_constraints(const ConstraintSet& constraints,
                                           const AttackedText& original,
                                           const AttackedText& candidate, const Lexicon& lex) {
  for (const Constraint& c : constraints) {
    if (auto v = check_one(c, original, candidate, lex)) return v;
  }
  return std::nullopt;
}

namespace {

void push_unique(std::vector<AttackedText>& out, std::unordered_set<std::string>& seen,
                 const AttackedText& base, AttackedText candidate) {
  const std::string& word = candidate.current()[candidate.edits().back().word_index];
  if (word == base.current()[candidate.edits().back().word_index]) return;  // no-op
  if (!seen.insert(word).second) return;
  out.push_back(std::move(candidate));
}

char32_t random_letter(std::mt19937_64& rng, char32_t exclude) {
  // 25-letter draw so substitutions can never be no-ops.
  static const char letters[] = "abcdefghijklmnopqrstuvwxyz";
  std::u32string pool;
  for (char c : letters)
    if (c != 0 && static_cast<char32_t>(c) != exclude) pool.push_back(static_cast<char32_t>(c));
  return pool[static_cast<std::size_t>(rng_below(rng, pool.size()))];
}

char32_t to_lower_cp(char32_t cp) {
  if (cp < 0x80) return static_cast<char32_t>(std::tolower(static_cast<int>(cp)));
  return cp;
}

}  // namespace

std::vector<AttackedText> transform_char_composite(const AttackedText& t, std::size_t word_index,
                                                   std::mt19937_64& rng) {
  if (word_index >= t.current().size()) throw OutOfRangeError("word index out of range");
  const std::u32string word = utf8_decode(t.current()[word_index]);
  const std::size_t len = word.size();
  std::vector<AttackedText> out;
  std::unordered_set<std::string> seen;

  if (len >= 2) {
    for (std::size_t i = 0; i + 1 < len; ++i) {
      if (word[i] == word[i + 1]) continue;
      Edit e{Edit::Kind::SwapAdjacentChars, word_index, i, ""};
      push_unique(out, seen, t, t.with_edit(e));
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    char32_t repl = random_letter(rng, to_lower_cp(word[i]));
    Edit e{Edit::Kind::SubstituteChar, word_index, i, utf8_encode(std::u32string(1, repl))};
    push_unique(out, seen, t, t.with_edit(e));
  }
  if (len >= 2) {
    for (std::size_t i = 0; i < len; ++i) {
      Edit e{Edit::Kind::DeleteChar, word_index, i, ""};
      push_unique(out, seen, t, t.with_edit(e));
    }
  }
  for (std::size_t i = 0; i <= len; ++i) {
    char32_t ins = random_letter(rng, U'\0');
    Edit e{Edit::Kind::InsertChar, word_index, i, utf8_encode(std::u32string(1, ins))};
    push_unique(out, seen, t, t.with_edit(e));
  }
  return out;
}

std::vector<AttackedText> transform_punct_insertion(const AttackedText& t, std::size_t word_index,
                                                    std::string_view chars) {
  if (word_index >= t.current().size()) throw OutOfRangeError("word index out of range");
  const std::size_t len = codepoint_length(t.current()[word_index]);
  std::vector<AttackedText> out;
  std::unordered_set<std::string> seen;
  if (len < 2) return out;
  for (char c : chars) {
    for (std::size_t gap = 1; gap < len; ++gap) {
      Edit e{Edit::Kind::InsertPunctuation, word_index, gap, std::string(1, c)};
      push_unique(out, seen, t, t.with_edit(e));
    }
  }
  return out;
}

namespace {

// Leading-capital and all-caps patterns carry over from the original token.
std::string transfer_case(const std::string& original, const std::string& replacement) {
  std::u32string orig = utf8_decode(original);
  std::u32string repl = utf8_decode(replacement);
  auto is_upper = [](char32_t c) { return c < 0x80 && std::isupper(static_cast<int>(c)) != 0; };
  auto is_alpha = [](char32_t c) { return c < 0x80 && std::isalpha(static_cast<int>(c)) != 0; };
  auto to_upper = [](char32_t c) {
    return c < 0x80 ? static_cast<char32_t>(std::toupper(static_cast<int>(c))) : c;
  };

  bool has_alpha = std::any_of(orig.begin(), orig.end(), is_alpha);
  bool all_caps = has_alpha && std::all_of(orig.begin(), orig.end(), [&](char32_t c) {
                    return !is_alpha(c) || is_upper(c);
                  });
  if (all_caps && orig.size() > 1) {
    for (char32_t& c : repl) c = to_upper(c);
  } else if (!orig.empty() && is_upper(orig[0]) && !repl.empty()) {
    repl[0] = to_upper(repl[0]);
  }
  return utf8_encode(repl);
}

std::vector<AttackedText> swap_word_candidates(const AttackedText& t, std::size_t word_index,
                                               std::span<const std::string> replacements) {
  const std::string& original = t.current()[word_index];
  std::vector<AttackedText> out;
  std::unordered_set<std::string> seen;
  for (const std::string& repl : replacements) {
    std::string cased = transfer_case(original, repl);
    if (cased == original) continue;
    if (!seen.insert(cased).second) continue;
    Edit e{Edit::Kind::SubstituteWord, word_index, 0, cased};
    out.push_back(t.with_edit(e));
  }
  return out;
}

}  // namespace

std::vector<AttackedText> transform_embedding_swap(const AttackedText& t, std::size_t word_index,
                                                   const Lexicon& lex, std::size_t max_candidates,
                                                   double min_cos) {
  if (word_index >= t.current().size()) throw OutOfRangeError("word index out of range");
  std::vector<std::string> neighbors;
  try {
    neighbors = lex.nearest_neighbors(t.current()[word_index], max_candidates, min_cos);
  } catch (const UnknownWordError&) {
    return {};
  }
  return swap_word_candidates(t, word_index, neighbors);
}

std::vector<AttackedText> transform_contextual_swap(const AttackedText& t, std::size_t word_index,
                                                    const NGramLM& lm, const Lexicon& lex,
                                                    std::size_t max_candidates) {
  if (word_index >= t.current().size()) throw OutOfRangeError("word index out of range");
  std::vector<std::string> ranked =
      lm.contextual_candidates(lex, t.current(), word_index, max_candidates);
  return swap_word_candidates(t, word_index, ranked);
}

std::vector<AttackedText> generate_candidates(const Transformation& transformation,
                                              const AttackedText& t, std::size_t word_index,
                                              const Lexicon& lex, const NGramLM* lm,
                                              std::mt19937_64& rng) {
  switch (transformation.kind) {
    case Transformation::Kind::CharComposite:
      return transform_char_composite(t, word_index, rng);
    case Transformation::Kind::PunctuationInsertion:
      return transform_punct_insertion(t, word_index, transformation.chars);
    case Transformation::Kind::EmbeddingSwap:
      return transform_embedding_swap(t, word_index, lex, transformation.max_candidates,
                                      transformation.min_cos);
    case Transformation::Kind::ContextualSwap:
      if (!lm) throw InvalidParamError("contextual swap requires a fitted language model");
      return transform_contextual_swap(t, word_index, *lm, lex, transformation.max_candidates);
  }
  return {};
}

Goal::Goal(GoalConfig config, const VictimModel& victim, const InteractionLog& log,
           const Catalog& catalog, std::string target_item, std::vector<std::string> user_sample)
    : config_(config),
      victim_(&victim),
      log_(&log),
      catalog_(&catalog),
      target_item_(std::move(target_item)),
      user_sample_(std::move(user_sample)) {
  if (!catalog.contains(target_item_)) throw UnknownItemError("unknown item: " + target_item_);
  if (user_sample_.empty()) throw EmptySampleError("goal user sample must be non-empty");
  if (!(config_.success_threshold > 0.0))
    throw InvalidParamError("success threshold must be > 0");
  if (config_.mode == GoalMode::Exposure && !victim.supports_title_overrides())
    throw InvalidParamError("exposure goal requires a victim that honours title overrides");
}

double Goal::expectation(const std::string& candidate_title, QueryCounter& ctr) const {
  Catalog perturbed = catalog_->with_title(target_item_, candidate_title);
  if (config_.mode == GoalMode::Exposure)
    return exposure_estimate(*victim_, target_item_, user_sample_, config_.k, *log_, perturbed,
                             ctr);
  double sum = 0.0;
  for (const std::string& user : user_sample_) {
    std::vector<std::string> titles = history_titles(*log_, perturbed, user);
    sum += victim_->score(titles, candidate_title, ctr);
  }
  return sum / static_cast<double>(user_sample_.size());
}

double Goal::init(QueryCounter& ctr) {
  init_score_ = expectation(catalog_->title(target_item_), ctr);
  return init_score_;
}

Goal::Eval Goal::eval(const std::string& candidate_title, QueryCounter& ctr) const {
  double score = expectation(candidate_title, ctr);
  return {score, score - init_score_ > config_.success_threshold};
}

std::vector<std::size_t> word_importance_ranking(const Goal& goal, const AttackedText& text,
                                                 const Lexicon& lex, QueryCounter& ctr,
                                                 std::uint64_t max_queries) {
  const WordSequence& words = text.current();
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (!lex.is_stopword(words[i])) indices.push_back(i);

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(indices.size());
  for (std::size_t i : indices) {
    if (ctr.count() + goal.eval_cost() > max_queries) {
      scored.emplace_back(-1e300, i);  // unprobed, ranked last
      continue;
    }
    WordSequence probe = words;
    probe.erase(probe.begin() + static_cast<std::ptrdiff_t>(i));
    Goal::Eval e = goal.eval(join_words(probe), ctr);
    scored.emplace_back(goal.init_score() - e.score, i);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> out;
  out.reserve(scored.size());
  for (const auto& [imp, i] : scored) out.push_back(i);
  return out;
}

namespace {

AttackResult finish_result(const Goal& goal, const Recipe& recipe, const AttackedText& original,
                           const AttackedText& final_text, bool success, double final_score,
                           const QueryCounter& ctr, const Lexicon& lex) {
  AttackResult r;
  r.item_id = goal.target_item();
  r.original_title = original.text();
  r.adversarial_title = final_text.text();
  r.success = success;
  r.init_score = goal.init_score();
  r.final_score = final_score;
  r.queries_used = ctr.count();
  r.perturbed_words = perturbed_word_count(final_text);
  r.edits = final_text.edits();
  r.user_sample = goal.user_sample();

  auto violation = check_constraints(recipe.constraints, original, final_text, lex);
  r.audit.checked = true;
  r.audit.passed = !violation.has_value();
  if (violation) {
    r.audit.violation_name = violation->name;
    r.audit.violation_detail = violation->detail;
  }
  return r;
}

}  // namespace

AttackResult greedy_wir_search(const Recipe& recipe, Goal& goal, const Lexicon& lex,
                               const NGramLM* lm, std::mt19937_64& rng) {
  const std::uint64_t budget = recipe.max_queries;
  QueryCounter ctr;
  if (goal.eval_cost() > budget)
    throw InvalidParamError("query budget cannot afford a single goal evaluation");

  AttackedText original = AttackedText::from_text(goal.catalog().title(goal.target_item()));
  if (original.current().empty()) throw EmptyTitleError("target title has no words");

  goal.init(ctr);
  std::vector<std::size_t> ranking = word_importance_ranking(goal, original, lex, ctr, budget);

  AttackedText working = original;
  double best_score = goal.init_score();

  for (std::size_t index : ranking) {
    if (ctr.count() + goal.eval_cost() > budget) break;
    std::vector<AttackedText> candidates = generate_candidates(
        recipe.transformation, working, index, lex, lm, rng);

    const AttackedText* word_best = nullptr;
    double word_best_score = best_score;
    bool exhausted = false;
    for (const AttackedText& candidate : candidates) {
      if (check_constraints(recipe.constraints, original, candidate, lex)) continue;
      if (ctr.count() + goal.eval_cost() > budget) {
        exhausted = true;
        break;
      }
      Goal::Eval e = goal.eval(candidate.text(), ctr);
      if (e.successful)
        return finish_result(goal, recipe, original, candidate, true, e.score, ctr, lex);
      if (e.score > word_best_score) {
        word_best = &candidate;
        word_best_score = e.score;
      }
    }
    if (word_best) {
      working = *word_best;
      best_score = word_best_score;
    }
    if (exhausted) break;
  }
  return finish_result(goal, recipe, original, working, false, best_score, ctr, lex);
}

AttackResult exhaustive_search(const Recipe& recipe, Goal& goal, const Lexicon& lex,
                               const NGramLM* lm, std::size_t max_subs, std::mt19937_64& rng) {
  QueryCounter ctr;
  if (goal.eval_cost() > recipe.max_queries)
    throw InvalidParamError("query budget cannot afford a single goal evaluation");
  AttackedText original = AttackedText::from_text(goal.catalog().title(goal.target_item()));
  if (original.current().empty()) throw EmptyTitleError("target title has no words");
  const std::size_t n = original.current().size();
  if (n > 6) throw InstanceTooLargeError("exhaustive search is guarded to <= 6 words");

  std::vector<std::vector<AttackedText>> per_word;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<AttackedText> cands =
        generate_candidates(recipe.transformation, original, i, lex, lm, rng);
    if (cands.size() > 4)
      throw InstanceTooLargeError("exhaustive search is guarded to fan-out <= 4");
    per_word.push_back(std::move(cands));
  }

  goal.init(ctr);
  AttackedText best = original;
  double best_score = goal.init_score();
  bool best_success = false;
  bool budget_hit = false;

  // Depth-first over index subsets of size <= max_subs, in ascending index
  // order, applying one candidate edit per chosen index.
  std::vector<Edit> chosen;
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t start,
                                                              std::size_t used) {
    if (budget_hit) return;
    if (used > 0) {
      AttackedText candidate = original;
      for (const Edit& e : chosen) candidate = candidate.with_edit(e);
      if (!check_constraints(recipe.constraints, original, candidate, lex)) {
        if (ctr.count() + goal.eval_cost() > recipe.max_queries) {
          budget_hit = true;
          return;
        }
        Goal::Eval e = goal.eval(candidate.text(), ctr);
        if (e.score > best_score) {
          best = candidate;
          best_score = e.score;
          best_success = e.successful;
        }
      }
    }
    if (used == max_subs) return;
    for (std::size_t i = start; i < n; ++i) {
      for (const AttackedText& cand : per_word[i]) {
        chosen.push_back(cand.edits().back());
        recurse(i + 1, used + 1);
        chosen.pop_back();
        if (budget_hit) return;
      }
    }
  };
  recurse(0, 0);

  return finish_result(goal, recipe, original, best, best_success, best_score, ctr, lex);
}

std::vector<std::string> sample_users(const InteractionLog& log, double fraction,
                                      std::size_t min_sample, std::mt19937_64& rng) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw InvalidParamError("user sample fraction must be in (0, 1]");
  std::size_t want = static_cast<std::size_t>(fraction * static_cast<double>(log.size()));
  want = std::max(want, min_sample);
  want = std::min(want, log.size());
  return rng_sample(log.user_ids(), want, rng);
}

namespace {

AttackResult attack_one(const Recipe& recipe, const std::string& item_id,
                        const VictimModel& victim, const InteractionLog& log,
                        const Catalog& catalog, const Lexicon& lex, const NGramLM* lm,
                        std::uint64_t seed, const RunOptions& options) {
  if (!catalog.contains(item_id)) throw UnknownItemError("unknown target item: " + item_id);
  std::mt19937_64 rng = make_rng(seed, item_id);

  Recipe effective = recipe;
  if (options.max_queries) effective.max_queries = *options.max_queries;
  if (options.goal) effective.goal = *options.goal;

  std::vector<std::string> sample =
      sample_users(log, options.user_sample_fraction, options.min_sample, rng);
  Goal goal(effective.goal, victim, log, catalog, item_id, std::move(sample));

  if (effective.search == SearchMethod::Exhaustive)
    return exhaustive_search(effective, goal, lex, lm, options.exhaustive_max_subs, rng);
  return greedy_wir_search(effective, goal, lex, lm, rng);
}

}  // namespace

std::vector<AttackResult> run_attack(const Recipe& recipe, std::span<const std::string> targets,
                                     const VictimModel& victim, const InteractionLog& log,
                                     const Catalog& catalog, const Lexicon& lex, const NGramLM* lm,
                                     std::uint64_t seed, const RunOptions& options) {
  std::vector<AttackResult> results(targets.size());
  if (options.jobs <= 1) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      results[i] = attack_one(recipe, targets[i], victim, log, catalog, lex, lm, seed, options);
      if (options.on_result) options.on_result(results[i]);
    }
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(options.jobs),
                                                std::max<std::size_t>(targets.size(), 1));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= targets.size()) return;
        try {
          results[i] =
              attack_one(recipe, targets[i], victim, log, catalog, lex, lm, seed, options);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace rta
