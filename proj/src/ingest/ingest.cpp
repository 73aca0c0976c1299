#include "harmonizer/ingest.hpp"

#include <charconv>
#include <unordered_set>

#include "harmonizer/error.hpp"
#include "harmonizer/util/text.hpp"
#include "harmonizer/util/tsv.hpp"

namespace harmonizer {

namespace {

std::string clean_location_part(std::string_view part) {
  std::string folded = text::fold_case_and_marks(part);
  for (char& c : folded) {
    if (c == '|' || c == ';' || c == '\t') c = ' ';
  }
  return text::collapse_whitespace(folded);
}

std::string line_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  return path.string() + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

LocationKey harmonize_location(std::string_view city, std::string_view state, std::string_view country) {
  return LocationKey(clean_location_part(city) + "|" + clean_location_part(state) + "|" +
                     clean_location_part(country));
}

LocationKey LocationKey::parse(std::string_view serialized) {
  const auto parts = text::split(serialized, '|');
  if (parts.size() != 3) throw InputError("location key must have 3 components: '" + std::string(serialized) + "'");
  return harmonize_location(parts[0], parts[1], parts[2]);
}

bool share_location(const std::set<LocationKey>& a, const std::set<LocationKey>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      if (!ia->is_blank()) return true;
      ++ia;
      ++ib;
    }
  }
  return false;
}

std::vector<AssigneeRecord> load_assignee_table(const std::filesystem::path& path) {
  const tsv::Table table = tsv::read(path);
  const long id_col = table.column("record_id");
  const long name_col = table.column("raw_name");
  const long count_col = table.column("patent_count");
  const long loc_col = table.column("locations");
  if (id_col < 0 || name_col < 0)
    throw InputError(path.string() + ": header must contain record_id and raw_name");

  std::vector<AssigneeRecord> records;
  records.reserve(table.rows.size());
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size())
      throw InputError(line_error(path, row.line,
                                  "expected " + std::to_string(table.header.size()) + " fields, got " +
                                      std::to_string(row.fields.size())));
    AssigneeRecord rec;
    rec.record_id = row.fields[static_cast<std::size_t>(id_col)];
    rec.raw_name = row.fields[static_cast<std::size_t>(name_col)];
    if (rec.record_id.empty()) throw InputError(line_error(path, row.line, "empty record_id"));
    if (text::trim(rec.raw_name).empty()) throw InputError(line_error(path, row.line, "empty raw_name"));
    if (count_col >= 0) {
      const std::string& c = row.fields[static_cast<std::size_t>(count_col)];
      if (!c.empty()) {
        const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), rec.patent_count);
        if (ec != std::errc{} || ptr != c.data() + c.size())
          throw InputError(line_error(path, row.line, "invalid patent_count '" + c + "'"));
      }
    }
    if (loc_col >= 0) {
      const std::string& l = row.fields[static_cast<std::size_t>(loc_col)];
      if (!l.empty()) {
        for (const auto& key : text::split(l, ';')) {
          try {
            rec.locations.insert(LocationKey::parse(key));
          } catch (const InputError& e) {
            throw InputError(line_error(path, row.line, e.what()));
          }
        }
      }
    }
    if (!seen.insert(rec.record_id).second)
      throw InputError(path.string() + ": duplicate record_id '" + rec.record_id + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

std::string serialize_assignee_table(const std::vector<AssigneeRecord>& records) {
  std::string out = "record_id\traw_name\tpatent_count\tlocations\n";
  for (const auto& r : records) {
    out += r.record_id;
    out += '\t';
    out += r.raw_name;
    out += '\t';
    out += std::to_string(r.patent_count);
    out += '\t';
    bool first = true;
    for (const auto& loc : r.locations) {
      if (!first) out += ';';
      out += loc.str();
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::vector<GoldLabel> load_gold_standard(const std::filesystem::path& path) {
  const tsv::Table table = tsv::read(path);
  const long id_col = table.column("record_id");
  const long entity_col = table.column("entity_id");
  if (id_col < 0 || entity_col < 0)
    throw InputError(path.string() + ": gold standard header must contain record_id and entity_id");
  std::vector<GoldLabel> labels;
  std::unordered_set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size())
      throw InputError(line_error(path, row.line, "wrong number of fields"));
    GoldLabel label{row.fields[static_cast<std::size_t>(id_col)], row.fields[static_cast<std::size_t>(entity_col)]};
    if (label.record_id.empty() || label.entity_id.empty())
      throw InputError(line_error(path, row.line, "empty record_id or entity_id"));
    if (!seen.insert(label.record_id).second)
      throw InputError(path.string() + ": duplicate record_id '" + label.record_id + "' in gold standard");
    labels.push_back(std::move(label));
  }
  return labels;
}

AssigneeIndex::AssigneeIndex(const std::vector<AssigneeRecord>& records) {
  by_id_.reserve(records.size());
  for (const auto& r : records) by_id_.emplace(r.record_id, &r);
}

const AssigneeRecord* AssigneeIndex::find(std::string_view record_id) const {
  const auto it = by_id_.find(std::string(record_id));
  return it == by_id_.end() ? nullptr : it->second;
}

const AssigneeRecord& AssigneeIndex::at(std::string_view record_id) const {
  const AssigneeRecord* r = find(record_id);
  if (!r) throw InputError("unknown record_id '" + std::string(record_id) + "'");
  return *r;
}

}  // namespace harmonizer
