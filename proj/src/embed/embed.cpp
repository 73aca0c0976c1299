#include "harmonizer/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "harmonizer/error.hpp"
#include "harmonizer/util/rng.hpp"
#include "harmonizer/util/text.hpp"

namespace harmonizer {

double IdfTable::weight(std::string_view token) const {
  const auto it = weights_.find(std::string(token));
  return it == weights_.end() ? 1.0 : it->second;
}

IdfTable compute_idf(std::span<const std::vector<std::string>> documents, double floor) {
  if (documents.empty()) throw ContractError("compute_idf: empty corpus");
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::unordered_set<std::string_view> seen;
    for (const auto& t : doc) {
      if (seen.insert(t).second) ++df[t];
    }
  }
  const double n = static_cast<double>(documents.size());
  std::unordered_map<std::string, double> raw;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& [token, count] : df) {
    const double v = std::log(n / static_cast<double>(count));
    raw.emplace(token, v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (auto& [token, v] : raw) v = hi > lo ? floor + (1.0 - floor) * (v - lo) / (hi - lo) : 1.0;
  return IdfTable(std::move(raw), documents.size());
}

IdfTable compute_idf(std::span<const CleanName> names, double floor) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(names.size());
  for (const auto& n : names) docs.push_back(n.tokens);
  return compute_idf(std::span<const std::vector<std::string>>(docs), floor);
}

HashingBackend::HashingBackend(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 32) throw ConfigError("hashing backend needs embed.dim >= 32, got " + std::to_string(dim));
}

std::vector<double> HashingBackend::token_vector(std::string_view token) const {
  std::u32string padded = U"<" + text::decode_utf8(token) + U">";
  std::vector<double> v(dim_, 0.0);
  const std::uint64_t salt = mix_seed(seed_);
  const std::size_t grams = padded.size() >= 3 ? padded.size() - 2 : 1;
  for (std::size_t i = 0; i < grams; ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (std::size_t k = i; k < std::min(i + 3, padded.size()); ++k) {
      for (char byte : text::encode_utf8(padded[k])) {
        h ^= static_cast<unsigned char>(byte);
        h *= 0x100000001b3ULL;
      }
    }
    h = mix_seed(h ^ salt);
    v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

FileBackend FileBackend::load(const std::filesystem::path& path, std::uint64_t fallback_seed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open token vectors " + path.string());
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) { throw InputError(path.string() + ":" + std::to_string(number) + ": " + what); };
  if (!std::getline(in, line)) throw InputError("token vector file is empty: " + path.string());
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = text::split(line, '\t');
  std::size_t dim = 0;
  if (header.size() != 2 || header[0] != "dim" ||
      std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim).ec != std::errc{})
    fail("expected header 'dim<TAB>d'");
  FileBackend backend(dim, fallback_seed);
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) fail("missing tab");
    std::vector<double> values;
    values.reserve(dim);
    for (const auto& field : text::split_tokens(line.substr(tab + 1))) {
      double x = 0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(x))
        fail("bad number '" + field + "'");
      values.push_back(x);
    }
    if (values.size() != dim) fail("expected " + std::to_string(dim) + " values, got " + std::to_string(values.size()));
    backend.vectors_.insert_or_assign(line.substr(0, tab), std::move(values));
  }
  return backend;
}

std::vector<double> FileBackend::token_vector(std::string_view token) const {
  const auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? fallback_.token_vector(token) : it->second;
}

NameEmbedding embed_name(std::string_view record_id, std::span<const std::string> tokens,
                         const EmbeddingBackend& backend, const IdfTable& idf) {
  NameEmbedding out;
  out.record_id = std::string(record_id);
  out.vector.assign(backend.dim(), 0.0);
  double total = 0.0;
  for (const auto& t : tokens) {
    const double w = idf.weight(t);
    const auto v = backend.token_vector(t);
    for (std::size_t k = 0; k < out.vector.size(); ++k) out.vector[k] += w * v[k];
    total += w;
  }
  if (total > 0) {
    for (double& x : out.vector) x /= total;
  }
  out.degenerate = std::all_of(out.vector.begin(), out.vector.end(), [](double x) { return x == 0.0; });
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("cosine_similarity: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DegenerateNameError("cosine similarity of a zero vector");
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine_similarity(const NameEmbedding& a, const NameEmbedding& b) {
  if (a.degenerate || b.degenerate) throw DegenerateNameError("cosine similarity with a degenerate embedding");
  return cosine_similarity(std::span<const double>(a.vector), std::span<const double>(b.vector));
}

}  // namespace harmonizer
