#include "rta/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "rta/errors.hpp"
#include "rta/io_util.hpp"

namespace rta {

using nlohmann::json;

Catalog Catalog::from_items(std::vector<std::pair<std::string, std::string>> items) {
  auto data = std::make_shared<Data>();
  for (auto& [id, title] : items) {
    if (id.empty()) throw ParseError("empty item_id");
    if (title.empty()) throw ParseError("empty title for item " + id);
    if (data->title_by_id.count(id)) throw ParseError("duplicate item_id: " + id);
    data->ids.push_back(id);
    data->title_by_id.emplace(std::move(id), std::move(title));
  }
  Catalog c;
  c.base_ = std::move(data);
  return c;
}

Catalog Catalog::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open catalog: " + path);
  std::vector<std::pair<std::string, std::string>> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("item_id") || !j.contains("title"))
      throw ParseError("bad catalog record at " + path + " line " + std::to_string(line_no));
    items.emplace_back(j["item_id"].get<std::string>(), j["title"].get<std::string>());
  }
  return from_items(std::move(items));
}

void Catalog::save_jsonl(const std::string& path) const {
  std::string body;
  for (const std::string& id : ids()) {
    json j{{"item_id", id}, {"title", title(id)}};
    body += j.dump();
    body += '\n';
  }
  atomic_write_file(path, body);
}

std::size_t Catalog::size() const { return base_ ? base_->ids.size() : 0; }

const std::vector<std::string>& Catalog::ids() const {
  static const std::vector<std::string> empty;
  return base_ ? base_->ids : empty;
}

bool Catalog::contains(const std::string& item_id) const {
  return base_ && base_->title_by_id.count(item_id) > 0;
}

const std::string& Catalog::title(const std::string& item_id) const {
  auto ov = overrides_.find(item_id);
  if (ov != overrides_.end()) return ov->second;
  if (base_) {
    auto it = base_->title_by_id.find(item_id);
    if (it != base_->title_by_id.end()) return it->second;
  }
  throw UnknownItemError("unknown item: " + item_id);
}

Catalog Catalog::with_title(const std::string& item_id, std::string title) const {
  if (!contains(item_id)) throw UnknownItemError("unknown item: " + item_id);
  if (title.empty()) throw InvalidParamError("title must be non-empty");
  Catalog out = *this;
  out.overrides_[item_id] = std::move(title);
  return out;
}

Catalog Catalog::with_titles(const std::map<std::string, std::string>& titles) const {
  Catalog out = *this;
  for (const auto& [id, title] : titles) {
    if (!contains(id)) throw UnknownItemError("unknown item: " + id);
    if (title.empty()) throw InvalidParamError("title must be non-empty");
    out.overrides_[id] = title;
  }
  return out;
}

InteractionLog InteractionLog::from_entries(
    std::vector<std::pair<std::string, std::vector<std::string>>> entries,
    const Catalog& catalog) {
  InteractionLog log;
  for (auto& [user, items] : entries) {
    if (user.empty()) throw ParseError("empty user_id");
    if (items.empty()) throw ParseError("empty history for user " + user);
    if (log.history_by_user_.count(user)) throw ParseError("duplicate user_id: " + user);
    for (const std::string& id : items)
      if (!catalog.contains(id))
        throw ParseError("history of " + user + " references unknown item " + id);
    log.user_ids_.push_back(user);
    log.history_by_user_.emplace(std::move(user), std::move(items));
  }
  return log;
}

InteractionLog InteractionLog::load_jsonl(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open interactions: " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("user_id") || !j.contains("item_ids"))
      throw ParseError("bad interaction record at " + path + " line " + std::to_string(line_no));
    entries.emplace_back(j["user_id"].get<std::string>(),
                         j["item_ids"].get<std::vector<std::string>>());
  }
  return from_entries(std::move(entries), catalog);
}

void InteractionLog::save_jsonl(const std::string& path) const {
  std::string body;
  for (const std::string& user : user_ids_) {
    json j{{"user_id", user}, {"item_ids", history_by_user_.at(user)}};
    body += j.dump();
    body += '\n';
  }
  atomic_write_file(path, body);
}

bool InteractionLog::has_user(const std::string& user_id) const {
  return history_by_user_.count(user_id) > 0;
}

const std::vector<std::string>& InteractionLog::history(const std::string& user_id) const {
  auto it = history_by_user_.find(user_id);
  if (it == history_by_user_.end()) throw UnknownUserError("unknown user: " + user_id);
  return it->second;
}

InteractionLog InteractionLog::with_users(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& extra,
    const Catalog& catalog) const {
  InteractionLog out = *this;
  for (const auto& [user, items] : extra) {
    if (user.empty()) throw ParseError("empty user_id");
    if (items.empty()) throw ParseError("empty history for user " + user);
    if (out.history_by_user_.count(user)) throw ParseError("duplicate user_id: " + user);
    for (const std::string& id : items)
      if (!catalog.contains(id))
        throw ParseError("history of " + user + " references unknown item " + id);
    out.user_ids_.push_back(user);
    out.history_by_user_.emplace(user, items);
  }
  return out;
}

std::unordered_map<std::string, std::int64_t> InteractionLog::item_popularity() const {
  std::unordered_map<std::string, std::int64_t> counts;
  for (const std::string& user : user_ids_)
    for (const std::string& id : history_by_user_.at(user)) counts[id] += 1;
  return counts;
}

}  // namespace rta
