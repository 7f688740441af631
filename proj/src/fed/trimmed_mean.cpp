#include "haven/fed/trimmed_mean.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "haven/fed/model.hpp"

namespace haven::fed {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty sample");
  const std::size_t m = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m), values.end());
  const double upper = values[m];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  return (lower + upper) / 2.0;
}

namespace {

void check_shape(std::span<const std::vector<double>> updates, std::span<const double> weights) {
  if (updates.empty()) throw std::invalid_argument("aggregation: no updates");
  const auto d = updates.front().size();
  for (const auto& u : updates) {
    if (u.size() != d) throw std::invalid_argument("aggregation: dimension mismatch");
  }
  if (!weights.empty() && weights.size() != updates.size()) {
    throw std::invalid_argument("aggregation: weight count differs from update count");
  }
}

}  // namespace

TrimmedMeanResult trimmed_mean_detailed(std::span<const std::vector<double>> updates, double trim_ratio,
                                        std::span<const double> weights) {
  if (updates.size() < 3) throw std::invalid_argument("trimmed_mean: need at least 3 updates");
  if (!(trim_ratio >= 0.0 && trim_ratio < 0.5)) throw std::invalid_argument("trimmed_mean: trim_ratio must lie in [0, 0.5)");
  check_shape(updates, weights);

  const std::size_t n = updates.size(), d = updates.front().size();
  TrimmedMeanResult r;
  r.mean.assign(d, 0.0);
  r.survivors.assign(d, 0);
  r.trimmed_fraction.assign(n, 0.0);
  std::vector<double> column(n), dev(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = updates[i][j];
    const double med = median(column);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(column[i] - med);
    const double cut = quantile(dev, 1.0 - trim_ratio);
    double sum = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dev[i] > cut) {
        r.trimmed_fraction[i] += 1.0;
        continue;
      }
      const double w = weights.empty() ? 1.0 : weights[i];
      sum += w * column[i];
      wsum += w;
      ++r.survivors[j];
    }
    r.mean[j] = wsum > 0.0 ? sum / wsum : med;
  }
  for (auto& f : r.trimmed_fraction) f /= static_cast<double>(std::max<std::size_t>(d, 1));
  return r;
}

std::vector<double> trimmed_mean(std::span<const std::vector<double>> updates, double trim_ratio) {
  return trimmed_mean_detailed(updates, trim_ratio).mean;
}

std::vector<double> coordinate_mean(std::span<const std::vector<double>> updates, std::span<const double> weights) {
  check_shape(updates, weights);
  const std::size_t d = updates.front().size();
  std::vector<double> out(d, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < updates.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    wsum += w;
    for (std::size_t j = 0; j < d; ++j) out[j] += w * updates[i][j];
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("coordinate_mean: weights sum to zero");
  for (auto& v : out) v /= wsum;
  return out;
}

}  // namespace haven::fed
