#include <cmath>

#include "harmonizer/error.hpp"
#include "harmonizer/graph.hpp"

namespace harmonizer {

namespace {

bool usable(const NamingMember& m) { return m.embedding && !m.embedding->degenerate && !m.embedding->vector.empty(); }

}  // namespace

std::size_t name_community_volume(std::span<const NamingMember> members) {
  if (members.empty()) throw ContractError("naming an empty community");
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const auto& a = members[i];
    const auto& b = members[best];
    if (a.patent_count != b.patent_count) {
      if (a.patent_count > b.patent_count) best = i;
    } else if (a.raw_name != b.raw_name) {
      if (a.raw_name < b.raw_name) best = i;
    } else if (a.record_id < b.record_id) {
      best = i;
    }
  }
  return best;
}

std::size_t name_community_centroid(std::span<const NamingMember> members) {
  if (members.empty()) throw ContractError("naming an empty community");
  if (members.size() == 1) return 0;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (usable(members[i])) candidates.push_back(i);
  }
  if (candidates.empty()) return name_community_volume(members);

  // Mean cosine of i to the others = (u_i . sum_j u_j - 1) / (k - 1) on unit vectors.
  const std::size_t dim = members[candidates[0]].embedding->vector.size();
  std::vector<std::vector<double>> unit;
  std::vector<double> total(dim, 0.0);
  for (std::size_t i : candidates) {
    const auto& v = members[i].embedding->vector;
    if (v.size() != dim) throw ContractError("naming: embedding dimensions differ");
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    std::vector<double> u(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      u[k] = v[k] / norm;
      total[k] += u[k];
    }
    unit.push_back(std::move(u));
  }
  const double others = candidates.size() > 1 ? static_cast<double>(candidates.size() - 1) : 1.0;
  std::size_t best = candidates[0];
  double best_mean = -INFINITY;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double self = 0.0;
    double dot = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      dot += unit[c][k] * total[k];
      self += unit[c][k] * unit[c][k];
    }
    const double mean = (dot - self) / others;
    const NamingMember& m = members[candidates[c]];
    const NamingMember& b = members[best];
    const bool tie = std::abs(mean - best_mean) <= 1e-12;
    if ((!tie && mean > best_mean) ||
        (tie && (m.cleaned < b.cleaned || (m.cleaned == b.cleaned && m.record_id < b.record_id)))) {
      best = candidates[c];
      best_mean = std::max(mean, best_mean);
    }
  }
  return best;
}

}  // namespace harmonizer
