#include <fstream>
#include "json.hpp"

#include "harmonizer/augment.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

namespace {

using ordered_json = nlohmann::ordered_json;

void put_optional(ordered_json& j, const char* key, const std::optional<std::string>& v) {
  j[key] = v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<std::string> get_optional(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw InputError(std::string("cache entry field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

std::string to_json_line(const AugmentationResult& r) {
  ordered_json j;
  j["query_name"] = r.query_name;
  put_optional(j, "corrected_name", r.corrected_name);
  put_optional(j, "first_url", r.first_url);
  put_optional(j, "first_text", r.first_text);
  j["fetched_at"] = r.fetched_at;
  j["provider_id"] = r.provider_id;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

AugmentationResult from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed cache line: ") + e.what());
  }
  if (!j.is_object()) throw InputError("cache line is not a JSON object");
  AugmentationResult r;
  const auto q = get_optional(j, "query_name");
  if (!q) throw InputError("cache line without query_name");
  r.query_name = *q;
  r.corrected_name = get_optional(j, "corrected_name");
  if (r.corrected_name && text::trim(*r.corrected_name).empty()) r.corrected_name.reset();
  r.first_url = get_optional(j, "first_url");
  r.first_text = get_optional(j, "first_text");
  if (!r.first_url) r.first_text.reset();
  r.fetched_at = get_optional(j, "fetched_at").value_or("");
  r.provider_id = get_optional(j, "provider_id").value_or("");
  return r;
}

AugmentationCache::AugmentationCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(*file_);
  if (!in) return;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    try {
      AugmentationResult r = from_json_line(line);
      std::string key = r.query_name;
      entries_.insert_or_assign(std::move(key), std::move(r));
    } catch (const InputError& e) {
      throw InputError(file_->string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

std::optional<AugmentationResult> AugmentationCache::get(const std::string& query_name) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(query_name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AugmentationCache::put(const AugmentationResult& result) {
  std::unique_lock lock(mutex_);
  if (file_) {
    if (file_->has_parent_path()) std::filesystem::create_directories(file_->parent_path());
    std::ofstream out(*file_, std::ios::app | std::ios::binary);
    if (!out) throw InputError("cannot append to cache " + file_->string());
    out << to_json_line(result) << '\n';
    if (!out) throw InputError("write to cache failed: " + file_->string());
  }
  entries_.insert_or_assign(result.query_name, result);
}

std::size_t AugmentationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<AugmentationResult> AugmentationCache::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<AugmentationResult> out;
  out.reserve(entries_.size());
  for (const auto& [_, r] : entries_) out.push_back(r);
  return out;
}

}  // namespace harmonizer
