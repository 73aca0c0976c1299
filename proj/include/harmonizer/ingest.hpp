#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace harmonizer {

// Normalized "city|state|country" triple. Construct through harmonize_location
// or LocationKey::parse so the normalization invariant always holds.
class LocationKey {
 public:
  LocationKey() = default;

  // Parses a serialized key ("espoo||fi"). Throws InputError unless it has
  // exactly three '|'-separated components.
  static LocationKey parse(std::string_view serialized);

  const std::string& str() const noexcept { return value_; }
  // "||" carries no location evidence.
  bool is_blank() const noexcept { return value_ == "||"; }

  auto operator<=>(const LocationKey&) const = default;

 private:
  friend LocationKey harmonize_location(std::string_view, std::string_view, std::string_view);
  explicit LocationKey(std::string v) : value_(std::move(v)) {}
  std::string value_ = "||";
};

LocationKey harmonize_location(std::string_view city, std::string_view state, std::string_view country);

// True when the two sets share a non-blank key.
bool share_location(const std::set<LocationKey>& a, const std::set<LocationKey>& b);

struct AssigneeRecord {
  std::string record_id;
  std::string raw_name;
  std::uint64_t patent_count = 0;
  std::set<LocationKey> locations;

  bool operator==(const AssigneeRecord&) const = default;
};

struct GoldLabel {
  std::string record_id;
  std::string entity_id;

  bool operator==(const GoldLabel&) const = default;
};

// Header: record_id, raw_name, [patent_count], [locations]. Locations are
// ';'-separated LocationKeys. Errors name the offending line or id.
std::vector<AssigneeRecord> load_assignee_table(const std::filesystem::path& path);

// Full four-column serialization; inverse of load_assignee_table for
// well-formed tables.
std::string serialize_assignee_table(const std::vector<AssigneeRecord>& records);

std::vector<GoldLabel> load_gold_standard(const std::filesystem::path& path);

// Read-only id -> record lookup over a loaded table.
class AssigneeIndex {
 public:
  explicit AssigneeIndex(const std::vector<AssigneeRecord>& records);
  const AssigneeRecord* find(std::string_view record_id) const;
  const AssigneeRecord& at(std::string_view record_id) const;
  std::size_t size() const noexcept { return by_id_.size(); }

 private:
  std::unordered_map<std::string, const AssigneeRecord*> by_id_;
};

enum class NameKind { Organization, Individual, Institution };

std::string_view to_string(NameKind kind);

// Lowercase keyword phrases; a phrase matches when its tokens appear as a
// contiguous run in the normalized name.
class KeywordList {
 public:
  KeywordList() = default;
  explicit KeywordList(std::vector<std::string> phrases);

  // One lowercase keyword per line; '#' starts a comment.
  static KeywordList load(const std::filesystem::path& path);
  static const KeywordList& default_institutions();
  // Words that mark a comma-bearing name as an organization (legal forms, "consulting", ...).
  static const KeywordList& default_organization_markers();

  bool matches(const std::vector<std::string>& name_tokens) const;
  const std::vector<std::vector<std::string>>& phrases() const noexcept { return phrases_; }

 private:
  std::vector<std::vector<std::string>> phrases_;
};

// Institution keyword hit -> Institution; otherwise "Surname, Forename(s)" with
// no organization marker -> Individual; otherwise Organization.
NameKind classify_name_kind(std::string_view raw_name, const KeywordList& institutions,
                            const KeywordList& organization_markers);
NameKind classify_name_kind(std::string_view raw_name);

}  // namespace harmonizer
