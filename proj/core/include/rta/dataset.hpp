#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace rta {

/// Immutable item catalog. Derived catalogs created by with_title() share the
/// base storage and carry a small title-override map, which victims use to
/// spot perturbed titles cheaply.
class Catalog {
 public:
  Catalog() = default;
  static Catalog from_items(std::vector<std::pair<std::string, std::string>> items);
  // JSON Lines, one {"item_id": ..., "title": ...} object per line.
  static Catalog load_jsonl(const std::string& path);
  void save_jsonl(const std::string& path) const;

  std::size_t size() const;
  bool contains(const std::string& item_id) const;
  const std::vector<std::string>& ids() const;
  const std::string& title(const std::string& item_id) const;  // UnknownItemError

  Catalog with_title(const std::string& item_id, std::string title) const;
  Catalog with_titles(const std::map<std::string, std::string>& titles) const;
  const std::map<std::string, std::string>& overrides() const { return overrides_; }

 private:
  struct Data {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::string> title_by_id;
  };
  std::shared_ptr<const Data> base_;
  std::map<std::string, std::string> overrides_;
};

/// Chronological interaction histories. Every referenced item must exist in
/// the catalog the log was validated against; histories are non-empty.
class InteractionLog {
 public:
  InteractionLog() = default;
  static InteractionLog from_entries(
      std::vector<std::pair<std::string, std::vector<std::string>>> entries,
      const Catalog& catalog);
  // JSON Lines, one {"user_id": ..., "item_ids": [...]} object per line.
  static InteractionLog load_jsonl(const std::string& path, const Catalog& catalog);
  void save_jsonl(const std::string& path) const;

  std::size_t size() const { return user_ids_.size(); }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  bool has_user(const std::string& user_id) const;
  const std::vector<std::string>& history(const std::string& user_id) const;  // UnknownUserError

  /// Augmented copy; the receiver is untouched.
  InteractionLog with_users(
      const std::vector<std::pair<std::string, std::vector<std::string>>>& extra,
      const Catalog& catalog) const;

  /// item_id -> interaction count over all histories.
  std::unordered_map<std::string, std::int64_t> item_popularity() const;

 private:
  std::vector<std::string> user_ids_;
  std::unordered_map<std::string, std::vector<std::string>> history_by_user_;
};

}  // namespace rta
