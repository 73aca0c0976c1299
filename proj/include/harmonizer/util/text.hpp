#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace harmonizer::text {

// Replacements applied after case folding and before punctuation is mapped to
// spaces, e.g. {"&", "and"} keeps "AT&T" as "at and t".
using PunctuationExceptions = std::map<std::string, std::string>;

const PunctuationExceptions& default_punctuation_exceptions();

// NFKD decomposition, combining marks dropped, full lowercase (root locale).
std::string fold_case_and_marks(std::string_view utf8);

// fold_case_and_marks, then exceptions, then every code point that is not a
// letter or digit becomes a space, then whitespace is collapsed and trimmed.
// Idempotent.
std::string normalize(std::string_view utf8, const PunctuationExceptions& exceptions);
std::string normalize(std::string_view utf8);

// Trim + collapse runs of ASCII whitespace to single spaces.
std::string collapse_whitespace(std::string_view s);
std::string trim(std::string_view s);
std::string ascii_lower(std::string_view s);

// Split on single spaces; empty pieces are dropped.
std::vector<std::string> split_tokens(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split(std::string_view s, char sep);

// Truncates to at most max_code_points code points without splitting a UTF-8 sequence.
std::string truncate_code_points(std::string_view utf8, std::size_t max_code_points);

// Decodes UTF-8 into code points; invalid bytes are passed through as U+FFFD.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(char32_t cp);

}  // namespace harmonizer::text
