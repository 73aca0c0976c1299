#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "harmonizer/augment.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path[?query], at least "/"
};

SplitUrl split_url(std::string_view url) {
  const auto scheme = url.find("://");
  if (scheme == std::string_view::npos) throw TransientFetchError("not an absolute url: " + std::string(url));
  const auto path = url.find_first_of("/?#", scheme + 3);
  SplitUrl out;
  out.origin = std::string(url.substr(0, path));
  out.target = path == std::string_view::npos ? "/" : std::string(url.substr(path));
  if (const auto hash = out.target.find('#'); hash != std::string::npos) out.target.erase(hash);
  if (out.target.empty() || out.target.front() != '/') out.target.insert(0, "/");
  return out;
}

std::string get(const ProviderSettings& settings, std::string_view url) {
  const SplitUrl parts = split_url(url);
  httplib::Client client(parts.origin);
  if (!client.is_valid()) throw TransientFetchError("cannot reach " + parts.origin);
  const auto seconds = static_cast<time_t>(settings.timeout_s);
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_follow_location(true);
  const httplib::Headers headers = {{"User-Agent", "Mozilla/5.0 (compatible; assignee-harmonizer)"},
                                    {"Accept", "text/html"}};
  auto response = client.Get(parts.target, headers);
  if (!response) throw TransientFetchError("request to " + parts.origin + " failed: " + httplib::to_string(response.error()));
  if (response->status < 200 || response->status >= 300)
    throw TransientFetchError("HTTP " + std::to_string(response->status) + " from " + std::string(url));
  return response->body;
}

}  // namespace

HttpSearchProvider::HttpSearchProvider(ProviderSettings settings) : settings_(std::move(settings)) {}

std::string HttpSearchProvider::id() const { return "html:" + settings_.endpoint; }

std::string HttpSearchProvider::search(std::string_view query) {
  std::string url = settings_.endpoint;
  url += url.find('?') == std::string::npos ? '?' : '&';
  url += settings_.query_param + "=" + percent_encode(query);
  return get(settings_, url);
}

std::string HttpSearchProvider::fetch_page(std::string_view url) { return get(settings_, url); }

}  // namespace harmonizer
