#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmonizer/error.hpp"
#include "harmonizer/parse.hpp"

namespace harmonizer {

struct AugmentationResult {
  std::string query_name;
  std::optional<std::string> corrected_name;
  std::optional<std::string> first_url;
  std::optional<std::string> first_text;  // only with first_url
  std::string fetched_at;                 // ISO-8601 UTC
  std::string provider_id;
};

std::string to_json_line(const AugmentationResult& r);
// Throws InputError on malformed JSON or a missing query_name.
AugmentationResult from_json_line(std::string_view line);

// JSON-lines store keyed by query_name. Later lines override earlier ones.
// Reads take a shared lock; put() appends to the backing file under an
// exclusive lock so there is a single writer.
class AugmentationCache {
 public:
  AugmentationCache() = default;  // memory only
  // Loads `file` when it exists; put() appends to it.
  explicit AugmentationCache(std::filesystem::path file);

  AugmentationCache(const AugmentationCache&) = delete;
  AugmentationCache& operator=(const AugmentationCache&) = delete;

  std::optional<AugmentationResult> get(const std::string& query_name) const;
  void put(const AugmentationResult& result);
  std::size_t size() const;
  // All live entries ordered by query_name.
  std::vector<AugmentationResult> snapshot() const;

 private:
  std::optional<std::filesystem::path> file_;
  std::map<std::string, AugmentationResult> entries_;
  mutable std::shared_mutex mutex_;
};

struct ProviderSettings {
  std::string endpoint = "https://html.duckduckgo.com/html/";
  std::string query_param = "q";
  std::string suggestion_selector = "#did_you_mean a";
  std::string result_selector = "a.result__a";
  double rate_limit_per_s = 1.0;
  int max_retries = 3;
  double backoff_initial_s = 1.0;
  double timeout_s = 20.0;
  std::size_t max_text_code_points = 10000;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual std::string id() const = 0;
  virtual const ProviderSettings& settings() const = 0;
  // Only consult the cache; a miss is a TransientFetchError without retries.
  virtual bool offline() const { return false; }
  // Raw markup. Throws TransientFetchError on network trouble.
  virtual std::string search(std::string_view query) = 0;
  virtual std::string fetch_page(std::string_view url) = 0;
};

class OfflineProvider final : public SearchProvider {
 public:
  std::string id() const override { return "offline"; }
  const ProviderSettings& settings() const override { return settings_; }
  bool offline() const override { return true; }
  std::string search(std::string_view query) override;
  std::string fetch_page(std::string_view url) override;

 private:
  ProviderSettings settings_;
};

// HTTP(S) adapter for an HTML results page (see ProviderSettings).
class HttpSearchProvider final : public SearchProvider {
 public:
  explicit HttpSearchProvider(ProviderSettings settings);
  std::string id() const override;
  const ProviderSettings& settings() const override { return settings_; }
  std::string search(std::string_view query) override;
  std::string fetch_page(std::string_view url) override;

 private:
  ProviderSettings settings_;
};

// Minimum spacing between requests to the same host. Clock and sleep are
// injectable for tests.
class RateLimiter {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleep = std::function<void(std::chrono::steady_clock::duration)>;

  explicit RateLimiter(double per_second, Clock clock = {}, Sleep sleep = {});
  void acquire(const std::string& host);

 private:
  std::chrono::steady_clock::duration interval_;
  Clock clock_;
  Sleep sleep_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

struct FetchContext {
  RateLimiter* limiter = nullptr;
  std::function<void(std::chrono::steady_clock::duration)> sleep;  // backoff; default real sleep
  std::function<std::string()> now;                                  // timestamp; default system clock
};

std::optional<std::string> extract_did_u_mean(std::string_view result_page,
                                              std::string_view selector = "#did_you_mean a");
// href of the first result, with redirect wrappers ("...?uddg=<encoded>") unwrapped.
std::optional<std::string> extract_first_result_url(std::string_view result_page,
                                                    std::string_view selector = "a.result__a");

// Cache hit: stored result, no provider call. Miss: search, parse, fetch the
// landing page, store. Throws TransientFetchError when retries run out.
AugmentationResult fetch_augmentation(const std::string& name, SearchProvider& provider, AugmentationCache& cache,
                                      const FetchContext& context = {});

struct AugmentReport {
  std::size_t cached = 0;
  std::size_t fetched = 0;
  std::vector<std::string> failed;  // un-augmented names, input order
};

AugmentReport augment_all(std::span<const std::string> names, SearchProvider& provider, AugmentationCache& cache,
                          unsigned parallelism, const FetchContext& context = {});

class UrlError : public InputError {
 public:
  using InputError::InputError;
};

// Registrable domain, lowercase, "www" and other subdomains removed. Throws
// UrlError when the input is not an absolute url with a host.
std::string extract_domain(std::string_view url);

// RFC 3986 percent-encoding of everything but unreserved characters.
std::string percent_encode(std::string_view s);
// '%XX' decoded, '+' read as space; malformed escapes are kept verbatim.
std::string percent_decode(std::string_view s);

// The k most frequent first-url domains (ties: lexicographic). Unparseable urls are skipped.
std::set<std::string> build_frequent_domain_blocklist(std::span<const AugmentationResult> results, std::size_t k);

// Normalized, tokenized, common words dropped, deduplicated.
std::set<std::string> preprocess_url_text(std::string_view text, const CommonWordList& common);

struct DomainInfo {
  std::string name_id;
  std::optional<std::string> domain;
  std::set<std::string> url_tokens;
  // The name shares at least one token with its own url text.
  bool url_eligible = false;
};

DomainInfo build_domain_info(std::string name_id, const AugmentationResult* result,
                             std::span<const std::string> name_tokens, const std::set<std::string>& blocklist,
                             const CommonWordList& common);

}  // namespace harmonizer
