#include <algorithm>
#include <cmath>
#include <numeric>

#include "harmonizer/error.hpp"
#include "harmonizer/tune.hpp"

namespace harmonizer {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

ParzenEstimator::ParzenEstimator(std::vector<double> samples, double lower, double upper, BandwidthRule rule)
    : samples_(std::move(samples)), lower_(lower), upper_(upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper))
    throw ContractError("ParzenEstimator: bounds must be finite with lower < upper");
  const double width = upper - lower;
  const double n = static_cast<double>(samples_.size());
  if (rule == BandwidthRule::Scott && samples_.size() >= 2) {
    const double mean = std::accumulate(samples_.begin(), samples_.end(), 0.0) / n;
    double var = 0.0;
    for (double x : samples_) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / (n - 1.0));
    bandwidth_ = std::min(width, 1.06 * sd * std::pow(n, -0.2));
  } else {
    bandwidth_ = width / std::min(100.0, n + 1.0);
  }
  bandwidth_ = std::max(bandwidth_, 1e-3 * width);
  mass_.reserve(samples_.size());
  for (double mu : samples_) {
    mass_.push_back(normal_cdf((upper_ - mu) / bandwidth_) - normal_cdf((lower_ - mu) / bandwidth_));
  }
}

double ParzenEstimator::pdf(double x) const {
  if (x < lower_ || x > upper_) return 0.0;
  double sum = 1.0 / (upper_ - lower_);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double z = (x - samples_[i]) / bandwidth_;
    if (mass_[i] > 0) sum += kInvSqrt2Pi * std::exp(-0.5 * z * z) / bandwidth_ / mass_[i];
  }
  return sum / static_cast<double>(samples_.size() + 1);
}

double ParzenEstimator::log_pdf(double x) const {
  const double p = pdf(x);
  return p > 0 ? std::log(p) : -INFINITY;
}

double ParzenEstimator::sample(Rng& rng) const {
  const std::uint64_t k = rng.below(samples_.size() + 1);
  if (k == samples_.size()) return rng.uniform(lower_, upper_);
  const double mu = samples_[k];
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x = mu + bandwidth_ * rng.normal();
    if (x >= lower_ && x <= upper_) return x;
  }
  return std::clamp(mu, lower_, upper_);
}

}  // namespace harmonizer
