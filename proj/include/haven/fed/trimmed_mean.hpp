#pragma once

#include <span>
#include <vector>

namespace haven::fed {

/// Per-coordinate outcome of the deviation-quantile trimmed mean.
struct TrimmedMeanResult {
  std::vector<double> mean;
  /// survivors[j]: how many inputs survived in coordinate j.
  std::vector<std::size_t> survivors;
  /// trimmed_fraction[i]: share of coordinates in which input i was removed.
  std::vector<double> trimmed_fraction;
};

/// Linear-interpolation quantile (numpy's default) of an unsorted sample.
double quantile(std::vector<double> values, double p);
double median(std::vector<double> values);

/// For each coordinate independently: drop the values whose absolute
/// deviation from the coordinate median exceeds the (1 - trim_ratio)
/// quantile of the absolute deviations, then average the survivors
/// (weighted by `weights` when non-empty).
/// Throws std::invalid_argument for fewer than 3 updates, mismatched
/// dimensions, or trim_ratio outside [0, 0.5).
TrimmedMeanResult trimmed_mean_detailed(std::span<const std::vector<double>> updates, double trim_ratio,
                                        std::span<const double> weights = {});

std::vector<double> trimmed_mean(std::span<const std::vector<double>> updates, double trim_ratio);

/// Plain (optionally weighted) coordinate mean. Used for small rounds and as
/// the non-robust baseline.
std::vector<double> coordinate_mean(std::span<const std::vector<double>> updates, std::span<const double> weights = {});

}  // namespace haven::fed
