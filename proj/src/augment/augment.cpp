#include "harmonizer/augment.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "harmonizer/html.hpp"
#include "harmonizer/util/parallel.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Host part of a url, lowercase; the whole input when it does not parse.
std::string host_of(std::string_view url) {
  auto start = url.find("://");
  std::string_view rest = start == std::string_view::npos ? url : url.substr(start + 3);
  rest = rest.substr(0, rest.find_first_of("/?#"));
  return text::ascii_lower(rest);
}

template <typename Fn>
std::string with_retries(Fn&& fn, const std::string& host, const ProviderSettings& settings,
                         const FetchContext& context) {
  for (int attempt = 0;; ++attempt) {
    if (context.limiter) context.limiter->acquire(host);
    try {
      return fn();
    } catch (const TransientFetchError&) {
      if (attempt >= settings.max_retries) throw;
    }
    const double delay = settings.backoff_initial_s * std::pow(2.0, attempt);
    const auto pause = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(delay));
    if (context.sleep) {
      context.sleep(pause);
    } else {
      std::this_thread::sleep_for(pause);
    }
  }
}

}  // namespace

std::string OfflineProvider::search(std::string_view query) {
  throw TransientFetchError("offline: no cached result for '" + std::string(query) + "'");
}

std::string OfflineProvider::fetch_page(std::string_view url) {
  throw TransientFetchError("offline: cannot fetch " + std::string(url));
}

RateLimiter::RateLimiter(double per_second, Clock clock, Sleep sleep)
    : interval_(per_second > 0 ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                     std::chrono::duration<double>(1.0 / per_second))
                               : std::chrono::steady_clock::duration::zero()),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })),
      sleep_(sleep ? std::move(sleep) : Sleep([](auto d) { std::this_thread::sleep_for(d); })) {}

void RateLimiter::acquire(const std::string& host) {
  std::chrono::steady_clock::time_point slot;
  std::chrono::steady_clock::time_point now;
  {
    std::lock_guard lock(mutex_);
    now = clock_();
    auto [it, fresh] = next_slot_.try_emplace(host, now);
    slot = std::max(it->second, now);
    it->second = slot + interval_;
  }
  if (slot > now) sleep_(slot - now);
}

std::optional<std::string> extract_did_u_mean(std::string_view result_page, std::string_view selector) {
  try {
    const html::Document doc{std::string(result_page)};
    const auto hit = doc.select_first(selector);
    if (!hit) return std::nullopt;
    std::string value = doc.text(*hit);
    if (value.empty()) return std::nullopt;
    return value;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<std::string> extract_first_result_url(std::string_view result_page, std::string_view selector) {
  try {
    const html::Document doc{std::string(result_page)};
    const auto hit = doc.select_first(selector);
    if (!hit) return std::nullopt;
    auto href = doc.attribute(*hit, "href");
    if (!href) return std::nullopt;
    std::string url = text::trim(*href);
    const auto q = url.find('?');
    if (q != std::string::npos) {
      for (const auto& param : text::split(url.substr(q + 1), '&')) {
        if (param.rfind("uddg=", 0) == 0) {
          url = percent_decode(param.substr(5));
          break;
        }
      }
    }
    if (url.rfind("//", 0) == 0) url = "https:" + url;
    if (url.empty()) return std::nullopt;
    return url;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

AugmentationResult fetch_augmentation(const std::string& name, SearchProvider& provider, AugmentationCache& cache,
                                      const FetchContext& context) {
  if (auto hit = cache.get(name)) return *hit;
  if (provider.offline()) throw TransientFetchError("offline mode: '" + name + "' is not cached");

  const ProviderSettings& settings = provider.settings();
  const std::string page =
      with_retries([&] { return provider.search(name); }, host_of(settings.endpoint), settings, context);

  AugmentationResult result;
  result.query_name = name;
  result.provider_id = provider.id();
  result.fetched_at = context.now ? context.now() : utc_now();
  try {
    result.corrected_name = extract_did_u_mean(page, settings.suggestion_selector);
    result.first_url = extract_first_result_url(page, settings.result_selector);
  } catch (const std::exception&) {
    result.corrected_name.reset();
    result.first_url.reset();
  }
  if (result.first_url) {
    try {
      const std::string landing = with_retries([&] { return provider.fetch_page(*result.first_url); },
                                               host_of(*result.first_url), settings, context);
      result.first_text = text::truncate_code_points(html::visible_text(landing), settings.max_text_code_points);
    } catch (const TransientFetchError&) {
      // The url alone still feeds the domain condition.
      result.first_text.reset();
    }
  }
  cache.put(result);
  return result;
}

AugmentReport augment_all(std::span<const std::string> names, SearchProvider& provider, AugmentationCache& cache,
                          unsigned parallelism, const FetchContext& context) {
  std::vector<std::string> distinct;
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (seen.insert(n).second) distinct.push_back(n);
  }
  enum class Outcome : unsigned char { Cached, Fetched, Failed };
  std::vector<Outcome> outcome(distinct.size(), Outcome::Failed);
  parallel_for(distinct.size(), std::max(1u, parallelism), [&](std::size_t i) {
    if (cache.get(distinct[i])) {
      outcome[i] = Outcome::Cached;
      return;
    }
    try {
      fetch_augmentation(distinct[i], provider, cache, context);
      outcome[i] = Outcome::Fetched;
    } catch (const TransientFetchError&) {
      outcome[i] = Outcome::Failed;
    }
  });
  AugmentReport report;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    switch (outcome[i]) {
      case Outcome::Cached: ++report.cached; break;
      case Outcome::Fetched: ++report.fetched; break;
      case Outcome::Failed: report.failed.push_back(distinct[i]); break;
    }
  }
  return report;
}

std::set<std::string> build_frequent_domain_blocklist(std::span<const AugmentationResult> results, std::size_t k) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& r : results) {
    if (!r.first_url) continue;
    try {
      ++counts[extract_domain(*r.first_url)];
    } catch (const UrlError&) {
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::set<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.insert(ranked[i].first);
  return out;
}

std::set<std::string> preprocess_url_text(std::string_view text, const CommonWordList& common) {
  std::set<std::string> out;
  for (auto& token : text::split_tokens(text::normalize(text))) {
    if (!common.contains(token)) out.insert(std::move(token));
  }
  return out;
}

DomainInfo build_domain_info(std::string name_id, const AugmentationResult* result,
                             std::span<const std::string> name_tokens, const std::set<std::string>& blocklist,
                             const CommonWordList& common) {
  DomainInfo info;
  info.name_id = std::move(name_id);
  if (!result) return info;
  if (result->first_url) {
    try {
      std::string domain = extract_domain(*result->first_url);
      if (!blocklist.contains(domain)) info.domain = std::move(domain);
    } catch (const UrlError&) {
    }
  }
  if (result->first_text) {
    info.url_tokens = preprocess_url_text(*result->first_text, common);
    info.url_eligible = std::any_of(name_tokens.begin(), name_tokens.end(),
                                    [&](const std::string& t) { return info.url_tokens.contains(t); });
  }
  return info;
}

}  // namespace harmonizer
