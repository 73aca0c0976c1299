#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace harmonizer::tsv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Index of a header column, or -1 when absent.
  long column(const std::string& name) const;
};

// Reads a UTF-8 TSV with a header row. Trailing '\r' is stripped; blank lines
// are skipped. Throws InputError when the file cannot be opened or is empty.
Table read(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace harmonizer::tsv
