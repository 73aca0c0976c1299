#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Tolerant HTML scanning for search-result pages: enough structure to run
// simple CSS selectors and pull visible text, never throws on bad markup.
namespace harmonizer::html {

struct Element {
  std::string tag;  // lowercase
  std::vector<std::pair<std::string, std::string>> attributes;  // names lowercase, values decoded
  std::size_t inner_begin = 0;
  std::size_t inner_end = 0;
  long parent = -1;
};

// Supported selectors: descendant chains of compounds built from an optional
// tag name plus any of ".class", "#id", "[attr]" and "[attr=value]".
// Example: "div#did_you_mean a", "a.result__a".
class Document {
 public:
  explicit Document(std::string markup);

  std::optional<std::size_t> select_first(std::string_view selector) const;
  std::vector<std::size_t> select_all(std::string_view selector) const;

  // Visible text inside the element, entities decoded, whitespace collapsed.
  std::string text(std::size_t element) const;
  std::optional<std::string> attribute(std::size_t element, std::string_view name) const;

  const std::vector<Element>& elements() const noexcept { return elements_; }

 private:
  std::string markup_;
  std::vector<Element> elements_;
};

std::string decode_entities(std::string_view s);

// Text a reader would see: scripts, styles and comments dropped, tags removed
// (inline tags without a separator), entities decoded, whitespace collapsed.
std::string visible_text(std::string_view markup);

}  // namespace harmonizer::html
