#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "harmonizer/augment.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

namespace {

// Multi-label public suffixes seen in assignee websites. Single-label TLDs
// follow the default rule (the last label is the suffix).
constexpr std::array<std::string_view, 72> kPublicSuffixes = {
    "co.uk",  "org.uk", "ac.uk",  "gov.uk", "ltd.uk", "plc.uk", "me.uk",  "net.uk", "co.jp",  "ne.jp",
    "or.jp",  "ac.jp",  "go.jp",  "com.au", "net.au", "org.au", "edu.au", "gov.au", "co.nz",  "org.nz",
    "ac.nz",  "com.br", "net.br", "org.br", "com.cn", "net.cn", "org.cn", "gov.cn", "edu.cn", "ac.cn",
    "com.tw", "org.tw", "edu.tw", "co.kr",  "or.kr",  "ac.kr",  "re.kr",  "co.in",  "net.in", "org.in",
    "firm.in", "ac.in", "com.mx", "com.sg", "edu.sg", "com.hk", "org.hk", "com.my", "co.za",  "org.za",
    "com.tr", "com.ar", "co.il",  "ac.il",  "org.il", "com.pl", "co.at",  "or.at",  "ac.at",  "com.es",
    "com.ru", "com.ua", "co.th",  "ac.th",  "co.id",  "com.ph", "com.vn", "com.sa", "com.eg", "co.ke",
    "com.co", "com.pe",
};

bool valid_host_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_ipv4(std::string_view host) {
  int dots = 0;
  for (char c : host) {
    if (c == '.') {
      ++dots;
    } else if (c < '0' || c > '9') {
      return false;
    }
  }
  return dots == 3;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string extract_domain(std::string_view url) {
  const std::string trimmed = text::trim(url);
  std::string_view u = trimmed;
  const auto scheme_end = u.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) throw UrlError("not an absolute url: " + trimmed);
  for (std::size_t i = 0; i < scheme_end; ++i) {
    const char c = u[i];
    const bool ok = std::isalpha(static_cast<unsigned char>(c)) ||
                    (i > 0 && (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.'));
    if (!ok) throw UrlError("bad url scheme: " + trimmed);
  }
  std::string_view rest = u.substr(scheme_end + 3);
  rest = rest.substr(0, rest.find_first_of("/?#"));
  if (const auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
  if (!rest.empty() && rest.front() == '[') throw UrlError("ipv6 hosts are not supported: " + trimmed);
  rest = rest.substr(0, rest.find(':'));
  std::string host = text::ascii_lower(rest);
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || host.find('.') == std::string::npos || host.front() == '.' ||
      host.find("..") != std::string::npos || !std::all_of(host.begin(), host.end(), valid_host_char))
    throw UrlError("url has no usable host: " + trimmed);
  if (is_ipv4(host)) return host;

  const auto labels = text::split(host, '.');
  // Longest listed suffix wins; otherwise the last label.
  std::size_t suffix_labels = 1;
  for (std::string_view suffix : kPublicSuffixes) {
    const std::size_t n = static_cast<std::size_t>(std::count(suffix.begin(), suffix.end(), '.')) + 1;
    if (n <= suffix_labels || n > labels.size()) continue;
    if (host.size() >= suffix.size() && host.compare(host.size() - suffix.size(), suffix.size(), suffix) == 0 &&
        (host.size() == suffix.size() || host[host.size() - suffix.size() - 1] == '.'))
      suffix_labels = n;
  }
  if (labels.size() <= suffix_labels) throw UrlError("host is a public suffix: " + trimmed);
  std::vector<std::string> kept(labels.end() - static_cast<long>(suffix_labels) - 1, labels.end());
  return text::join(kept, ".");
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out.push_back(' ');
    } else if (s[i] == '%' && i + 2 < s.size() && hex_value(s[i + 1]) >= 0 && hex_value(s[i + 2]) >= 0) {
      out.push_back(static_cast<char>(hex_value(s[i + 1]) * 16 + hex_value(s[i + 2])));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

}  // namespace harmonizer
