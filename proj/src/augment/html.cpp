#include "harmonizer/html.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "harmonizer/util/text.hpp"

namespace harmonizer::html {

namespace {

constexpr std::array kVoidTags = {"area", "base", "br", "col", "embed", "hr", "img", "input",
                                  "link", "meta", "param", "source", "track", "wbr"};
constexpr std::array kRawTextTags = {"script", "style", "textarea", "title", "noscript", "template"};
constexpr std::array kHiddenTags = {"script", "style", "noscript", "template", "head", "svg"};
constexpr std::array kInlineTags = {"a", "abbr", "b", "bdi", "code", "em", "font", "i", "mark",
                                    "s", "small", "span", "strong", "sub", "sup", "u"};

template <std::size_t N>
bool in(const std::array<const char*, N>& set, std::string_view tag) {
  return std::any_of(set.begin(), set.end(), [&](const char* t) { return tag == t; });
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
         c == ':';
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

// Case-insensitive search for "</tag" starting at pos.
std::size_t find_close_tag(std::string_view s, std::string_view tag, std::size_t pos) {
  const std::string needle = "</" + std::string(tag);
  while (pos < s.size()) {
    const std::size_t hit = s.find("</", pos);
    if (hit == std::string_view::npos) return std::string_view::npos;
    if (hit + needle.size() <= s.size() && text::ascii_lower(s.substr(hit, needle.size())) == needle) {
      const std::size_t after = hit + needle.size();
      if (after >= s.size() || !is_name_char(s[after])) return hit;
    }
    pos = hit + 2;
  }
  return std::string_view::npos;
}

struct Tag {
  bool closing = false;
  bool self_closing = false;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::size_t end = 0;  // one past '>'
};

// Parses a tag starting at s[pos] == '<'. Returns nullopt when it is not a tag.
std::optional<Tag> parse_tag(std::string_view s, std::size_t pos) {
  Tag tag;
  std::size_t i = pos + 1;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_begin = i;
  while (i < s.size() && is_name_char(s[i])) ++i;
  if (i == name_begin) return std::nullopt;
  tag.name = text::ascii_lower(s.substr(name_begin, i - name_begin));
  for (;;) {
    while (i < s.size() && is_ws(s[i])) ++i;
    if (i >= s.size()) {
      tag.end = s.size();
      return tag;
    }
    if (s[i] == '>') {
      tag.end = i + 1;
      return tag;
    }
    if (s[i] == '/') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        tag.self_closing = true;
        tag.end = i + 2;
        return tag;
      }
      ++i;
      continue;
    }
    const std::size_t attr_begin = i;
    while (i < s.size() && !is_ws(s[i]) && s[i] != '=' && s[i] != '>' && s[i] != '/') ++i;
    std::string name = text::ascii_lower(s.substr(attr_begin, i - attr_begin));
    if (name.empty()) {
      ++i;
      continue;
    }
    while (i < s.size() && is_ws(s[i])) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && is_ws(s[i])) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        const char quote = s[i++];
        const std::size_t close = s.find(quote, i);
        const std::size_t stop = close == std::string_view::npos ? s.size() : close;
        value = decode_entities(s.substr(i, stop - i));
        i = stop == s.size() ? stop : stop + 1;
      } else {
        const std::size_t vb = i;
        while (i < s.size() && !is_ws(s[i]) && s[i] != '>') ++i;
        value = decode_entities(s.substr(vb, i - vb));
      }
    }
    tag.attributes.emplace_back(std::move(name), std::move(value));
  }
}

struct Compound {
  std::string tag;
  std::string id;
  std::vector<std::string> classes;
  std::vector<std::pair<std::string, std::optional<std::string>>> attributes;
};

std::vector<Compound> parse_selector(std::string_view selector) {
  std::vector<Compound> chain;
  for (const auto& part : text::split_tokens(text::collapse_whitespace(selector))) {
    Compound c;
    std::size_t i = 0;
    auto read_ident = [&] {
      const std::size_t b = i;
      while (i < part.size() && part[i] != '.' && part[i] != '#' && part[i] != '[') ++i;
      return part.substr(b, i - b);
    };
    if (i < part.size() && part[i] != '.' && part[i] != '#' && part[i] != '[') c.tag = text::ascii_lower(read_ident());
    while (i < part.size()) {
      const char kind = part[i++];
      if (kind == '.') {
        c.classes.push_back(read_ident());
      } else if (kind == '#') {
        c.id = read_ident();
      } else {
        const std::size_t close = part.find(']', i);
        const std::string body = part.substr(i, close == std::string::npos ? std::string::npos : close - i);
        i = close == std::string::npos ? part.size() : close + 1;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
          c.attributes.emplace_back(text::ascii_lower(body), std::nullopt);
        } else {
          std::string value = body.substr(eq + 1);
          if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
          c.attributes.emplace_back(text::ascii_lower(body.substr(0, eq)), value);
        }
      }
    }
    chain.push_back(std::move(c));
  }
  return chain;
}

const std::string* find_attribute(const Element& e, std::string_view name) {
  for (const auto& [k, v] : e.attributes) {
    if (k == name) return &v;
  }
  return nullptr;
}

bool matches(const Element& e, const Compound& c) {
  if (!c.tag.empty() && c.tag != "*" && e.tag != c.tag) return false;
  if (!c.id.empty()) {
    const std::string* id = find_attribute(e, "id");
    if (!id || *id != c.id) return false;
  }
  if (!c.classes.empty()) {
    const std::string* cls = find_attribute(e, "class");
    if (!cls) return false;
    const auto have = text::split_tokens(text::collapse_whitespace(*cls));
    for (const auto& want : c.classes) {
      if (std::find(have.begin(), have.end(), want) == have.end()) return false;
    }
  }
  for (const auto& [name, value] : c.attributes) {
    const std::string* v = find_attribute(e, name);
    if (!v || (value && *v != *value)) return false;
  }
  return true;
}

bool matches_chain(const std::vector<Element>& elements, std::size_t index, const std::vector<Compound>& chain) {
  if (chain.empty() || !matches(elements[index], chain.back())) return false;
  long cursor = elements[index].parent;
  std::size_t want = chain.size() - 1;
  while (want > 0 && cursor >= 0) {
    if (matches(elements[static_cast<std::size_t>(cursor)], chain[want - 1])) --want;
    cursor = elements[static_cast<std::size_t>(cursor)].parent;
  }
  return want == 0;
}

bool decode_numeric(std::string_view body, std::string& out) {
  std::uint32_t cp = 0;
  const bool hex = !body.empty() && (body[0] == 'x' || body[0] == 'X');
  const std::string_view digits = hex ? body.substr(1) : body;
  if (digits.empty() || digits.size() > 8) return false;
  for (char c : digits) {
    std::uint32_t d = 0;
    if (c >= '0' && c <= '9') {
      d = static_cast<std::uint32_t>(c - '0');
    } else if (hex && c >= 'a' && c <= 'f') {
      d = static_cast<std::uint32_t>(c - 'a' + 10);
    } else if (hex && c >= 'A' && c <= 'F') {
      d = static_cast<std::uint32_t>(c - 'A' + 10);
    } else {
      return false;
    }
    cp = cp * (hex ? 16 : 10) + d;
  }
  if (cp == 0 || cp > 0x10FFFF) return false;
  out += text::encode_utf8(static_cast<char32_t>(cp));
  return true;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, std::string_view> kNamed[] = {
      {"amp", "&"},   {"lt", "<"},     {"gt", ">"},      {"quot", "\""},   {"apos", "'"},
      {"nbsp", " "},  {"ndash", "-"},  {"mdash", "-"},   {"rsquo", "'"},   {"lsquo", "'"},
      {"rdquo", "\""}, {"ldquo", "\""}, {"hellip", "..."}, {"copy", "(c)"}, {"reg", "(r)"},
  };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view body = s.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!body.empty() && body[0] == '#') {
      done = decode_numeric(body.substr(1), out);
    } else {
      for (const auto& [name, value] : kNamed) {
        if (body == name) {
          out += value;
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

Document::Document(std::string markup) : markup_(std::move(markup)) {
  const std::string_view s = markup_;
  std::vector<std::size_t> open;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t lt = s.find('<', pos);
    if (lt == std::string_view::npos) break;
    if (s.compare(lt, 4, "<!--") == 0) {
      const std::size_t end = s.find("-->", lt + 4);
      pos = end == std::string_view::npos ? s.size() : end + 3;
      continue;
    }
    if (lt + 1 < s.size() && (s[lt + 1] == '!' || s[lt + 1] == '?')) {
      const std::size_t end = s.find('>', lt);
      pos = end == std::string_view::npos ? s.size() : end + 1;
      continue;
    }
    const auto tag = parse_tag(s, lt);
    if (!tag) {
      pos = lt + 1;
      continue;
    }
    if (tag->closing) {
      const auto it = std::find_if(open.rbegin(), open.rend(),
                                   [&](std::size_t idx) { return elements_[idx].tag == tag->name; });
      if (it != open.rend()) {
        const auto keep = static_cast<std::size_t>(open.rend() - it) - 1;
        for (std::size_t k = keep; k < open.size(); ++k) elements_[open[k]].inner_end = lt;
        open.resize(keep);
      }
      pos = tag->end;
      continue;
    }
    Element e;
    e.tag = tag->name;
    e.attributes = tag->attributes;
    e.inner_begin = tag->end;
    e.parent = open.empty() ? -1 : static_cast<long>(open.back());
    const std::size_t index = elements_.size();
    if (tag->self_closing || in(kVoidTags, e.tag)) {
      e.inner_end = e.inner_begin;
      elements_.push_back(std::move(e));
      pos = tag->end;
    } else if (in(kRawTextTags, e.tag)) {
      const std::size_t close = find_close_tag(s, e.tag, tag->end);
      e.inner_end = close == std::string_view::npos ? s.size() : close;
      elements_.push_back(std::move(e));
      if (close == std::string_view::npos) {
        pos = s.size();
      } else {
        const std::size_t gt = s.find('>', close);
        pos = gt == std::string_view::npos ? s.size() : gt + 1;
      }
    } else {
      elements_.push_back(std::move(e));
      open.push_back(index);
      pos = tag->end;
    }
  }
  for (std::size_t idx : open) elements_[idx].inner_end = s.size();
}

std::optional<std::size_t> Document::select_first(std::string_view selector) const {
  const auto chain = parse_selector(selector);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (matches_chain(elements_, i, chain)) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Document::select_all(std::string_view selector) const {
  const auto chain = parse_selector(selector);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (matches_chain(elements_, i, chain)) out.push_back(i);
  }
  return out;
}

std::string Document::text(std::size_t element) const {
  const Element& e = elements_.at(element);
  return visible_text(std::string_view(markup_).substr(e.inner_begin, e.inner_end - e.inner_begin));
}

std::optional<std::string> Document::attribute(std::size_t element, std::string_view name) const {
  const std::string* v = find_attribute(elements_.at(element), text::ascii_lower(name));
  if (!v) return std::nullopt;
  return *v;
}

std::string visible_text(std::string_view s) {
  std::string raw;
  raw.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t lt = s.find('<', pos);
    if (lt == std::string_view::npos) {
      raw.append(s.substr(pos));
      break;
    }
    raw.append(s.substr(pos, lt - pos));
    if (s.compare(lt, 4, "<!--") == 0) {
      const std::size_t end = s.find("-->", lt + 4);
      pos = end == std::string_view::npos ? s.size() : end + 3;
      raw.push_back(' ');
      continue;
    }
    if (lt + 1 < s.size() && (s[lt + 1] == '!' || s[lt + 1] == '?')) {
      const std::size_t end = s.find('>', lt);
      pos = end == std::string_view::npos ? s.size() : end + 1;
      continue;
    }
    const auto tag = parse_tag(s, lt);
    if (!tag) {
      raw.push_back('<');
      pos = lt + 1;
      continue;
    }
    pos = tag->end;
    if (!tag->closing && !tag->self_closing && in(kHiddenTags, tag->name)) {
      const std::size_t close = find_close_tag(s, tag->name, pos);
      if (close == std::string_view::npos) break;
      const std::size_t gt = s.find('>', close);
      pos = gt == std::string_view::npos ? s.size() : gt + 1;
      raw.push_back(' ');
      continue;
    }
    if (!in(kInlineTags, tag->name)) raw.push_back(' ');
  }
  std::string decoded = decode_entities(raw);
  // Non-breaking spaces decode to U+00A0; fold them into plain spaces.
  std::string out;
  out.reserve(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    if (static_cast<unsigned char>(decoded[i]) == 0xC2 && i + 1 < decoded.size() &&
        static_cast<unsigned char>(decoded[i + 1]) == 0xA0) {
      out.push_back(' ');
      ++i;
    } else {
      out.push_back(decoded[i]);
    }
  }
  return text::collapse_whitespace(out);
}

}  // namespace harmonizer::html
