#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "harmonizer/parse.hpp"

namespace harmonizer {

inline constexpr double kIdfFloor = 0.01;

// Token weights in [floor, 1]: ln(N / n_i) mapped affinely so the most
// common observed token gets `floor` and the rarest gets 1.
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(std::unordered_map<std::string, double> weights, std::size_t corpus_size)
      : weights_(std::move(weights)), n_(corpus_size) {}

  // Unseen tokens weigh 1.0, like the rarest observed token.
  double weight(std::string_view token) const;
  bool contains(std::string_view token) const { return weights_.contains(std::string(token)); }
  std::size_t corpus_size() const noexcept { return n_; }
  const std::unordered_map<std::string, double>& weights() const noexcept { return weights_; }

 private:
  std::unordered_map<std::string, double> weights_;
  std::size_t n_ = 0;
};

// Each inner vector is one document; repeated tokens count once. Throws
// ContractError on an empty corpus.
IdfTable compute_idf(std::span<const std::vector<std::string>> documents, double floor = kIdfFloor);
IdfTable compute_idf(std::span<const CleanName> names, double floor = kIdfFloor);

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::size_t dim() const = 0;
  // Deterministic, always dim() entries.
  virtual std::vector<double> token_vector(std::string_view token) const = 0;
};

// Signed feature hashing of code-point trigrams of "<token>", L2-normalized.
class HashingBackend final : public EmbeddingBackend {
 public:
  // dim must be at least 32.
  HashingBackend(std::size_t dim, std::uint64_t seed);
  std::size_t dim() const override { return dim_; }
  std::vector<double> token_vector(std::string_view token) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Precomputed vectors. TSV: first row "dim<TAB>d", then "token<TAB>f1 f2 ... fd".
// Tokens missing from the file come from a HashingBackend of the same dimension.
class FileBackend final : public EmbeddingBackend {
 public:
  static FileBackend load(const std::filesystem::path& path, std::uint64_t fallback_seed);

  std::size_t dim() const override { return dim_; }
  std::vector<double> token_vector(std::string_view token) const override;
  std::size_t vocabulary_size() const noexcept { return vectors_.size(); }

 private:
  FileBackend(std::size_t dim, std::uint64_t seed) : dim_(dim), fallback_(dim, seed) {}
  std::size_t dim_;
  HashingBackend fallback_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

struct NameEmbedding {
  std::string record_id;
  std::vector<double> vector;
  // No tokens, or the weighted mean came out as the zero vector.
  bool degenerate = false;
};

// sum_i idf(t_i) v(t_i) / sum_i idf(t_i)
NameEmbedding embed_name(std::string_view record_id, std::span<const std::string> tokens,
                         const EmbeddingBackend& backend, const IdfTable& idf);

// Exactly 1.0 for identical vectors, otherwise clamped to [-1, 1]. Throws
// DegenerateNameError on a zero vector and ContractError on a size mismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);
double cosine_similarity(const NameEmbedding& a, const NameEmbedding& b);

}  // namespace harmonizer
