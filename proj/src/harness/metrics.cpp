#include "haven/harness/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace haven::harness {

Confusion confusion_from(std::span<const VerdictRecord> verdicts) {
  Confusion c;
  for (const auto& v : verdicts) {
    if (v.truth) (v.predicted ? c.tp : c.fn)++;
    else (v.predicted ? c.fp : c.tn)++;
  }
  return c;
}

Scores scores_from(const Confusion& c) {
  Scores s;
  const auto total = c.total();
  s.accuracy = total ? static_cast<double>(c.tp + c.tn) / static_cast<double>(total) : 1.0;
  s.precision_defined = c.tp + c.fp > 0;
  s.recall_defined = c.tp + c.fn > 0;
  s.precision = s.precision_defined ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 1.0;
  s.recall = s.recall_defined ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 1.0;
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

void apply_confusion(MetricsReport& r, const Confusion& c, double alpha_min) {
  const auto s = scores_from(c);
  r.windows = c.total();
  r.tp = c.tp;
  r.fp = c.fp;
  r.tn = c.tn;
  r.fn = c.fn;
  r.accuracy = s.accuracy;
  r.precision = s.precision;
  r.recall = s.recall;
  r.f1 = s.f1;
  r.precision_defined = s.precision_defined;
  r.recall_defined = s.recall_defined;
  r.alpha_min_violated = s.accuracy < alpha_min;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size())));
  return values[rank == 0 ? 0 : rank - 1];
}

std::uint64_t rounds_to_converge(std::span<const std::pair<std::uint64_t, double>> series, double tolerance) {
  if (series.empty()) return 0;
  const double final_loss = series.back().second;
  for (const auto& [round, loss] : series) {
    if (std::abs(loss - final_loss) <= tolerance * std::abs(final_loss)) return round;
  }
  return series.back().first;
}

}  // namespace haven::harness
