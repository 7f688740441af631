#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "haven/common/rng.hpp"
#include "haven/edge/scorers.hpp"

namespace haven::edge {

namespace {

struct Adam {
  explicit Adam(std::size_t n, double lr) : m(n, 0.0), v(n, 0.0), lr(lr) {}

  void step(std::span<double> params, std::span<const double> grad) {
    ++t;
    const double b1t = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double b2t = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1 - beta2) * grad[i] * grad[i];
      params[i] -= lr * (m[i] / b1t) / (std::sqrt(v[i] / b2t) + 1e-8);
    }
  }

  std::vector<double> m, v;
  double lr;
  double beta1 = 0.9, beta2 = 0.999;
  std::size_t t = 0;
};

}  // namespace

RecurrentScorer RecurrentScorer::train(const TrainingSet& data, std::uint64_t seed, Params params) {
  if (data.size() == 0) throw std::invalid_argument("RecurrentScorer::train: empty training set");
  if (params.hidden == 0) throw std::invalid_argument("RecurrentScorer::train: hidden size must be positive");

  std::vector<StepInput> all_steps;
  for (const auto& f : data.features) all_steps.insert(all_steps.end(), f.steps.begin(), f.steps.end());
  RecurrentScorer model;
  model.standardizer_ = Standardizer::fit<StepInput>(all_steps, params.input_clip);
  all_steps.clear();
  all_steps.shrink_to_fit();

  const std::size_t H = params.hidden, D = kStepDim;
  // Flat parameter layout: wx | wh | b | v | c
  const std::size_t n_wx = H * D, n_wh = H * H;
  const std::size_t off_wh = n_wx, off_b = off_wh + n_wh, off_v = off_b + H, off_c = off_v + H;
  std::vector<double> theta(off_c + 1, 0.0);
  Rng rng(seed);
  const double sx = 1.0 / std::sqrt(static_cast<double>(D));
  const double sh = 0.5 / std::sqrt(static_cast<double>(H));
  for (std::size_t i = 0; i < n_wx; ++i) theta[i] = rng.normal(0.0, sx);
  for (std::size_t i = 0; i < n_wh; ++i) theta[off_wh + i] = rng.normal(0.0, sh);
  for (std::size_t i = 0; i < H; ++i) theta[off_v + i] = rng.normal(0.0, 0.5);

  std::size_t positives = 0;
  for (int y : data.labels) positives += static_cast<std::size_t>(y);
  const double n = static_cast<double>(data.size());
  const double pos_weight = positives ? n / (2.0 * static_cast<double>(positives)) : 1.0;
  const double neg_weight = positives < data.size() ? n / (2.0 * (n - static_cast<double>(positives))) : 1.0;

  Adam adam(theta.size(), params.learning_rate);
  std::vector<double> grad(theta.size());
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::vector<double>> xs, hs;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (auto idx : order) {
      const auto& steps = data.features[idx].steps;
      const std::size_t T = steps.size();
      xs.assign(T, std::vector<double>(D));
      hs.assign(T + 1, std::vector<double>(H, 0.0));
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t j = 0; j < D; ++j) xs[t][j] = model.standardizer_.apply(j, steps[t][j]);
        for (std::size_t h = 0; h < H; ++h) {
          double a = theta[off_b + h];
          for (std::size_t j = 0; j < D; ++j) a += theta[h * D + j] * xs[t][j];
          for (std::size_t k = 0; k < H; ++k) a += theta[off_wh + h * H + k] * hs[t][k];
          hs[t + 1][h] = std::tanh(a);
        }
      }
      std::vector<double> pooled(H, 0.0);
      for (std::size_t t = 1; t <= T; ++t) {
        for (std::size_t h = 0; h < H; ++h) pooled[h] += hs[t][h] / static_cast<double>(T);
      }
      double logit = theta[off_c];
      for (std::size_t h = 0; h < H; ++h) logit += theta[off_v + h] * pooled[h];
      const double p = logistic(logit);
      const int y = data.labels[idx];
      const double g = (p - static_cast<double>(y)) * (y ? pos_weight : neg_weight);

      std::fill(grad.begin(), grad.end(), 0.0);
      grad[off_c] = g;
      std::vector<double> dpool(H);
      for (std::size_t h = 0; h < H; ++h) {
        grad[off_v + h] = g * pooled[h];
        dpool[h] = g * theta[off_v + h] / static_cast<double>(T);
      }
      std::vector<double> dh_next(H, 0.0), da(H);
      for (std::size_t t = T; t >= 1; --t) {
        for (std::size_t h = 0; h < H; ++h) {
          const double dh = dpool[h] + dh_next[h];
          da[h] = dh * (1.0 - hs[t][h] * hs[t][h]);
        }
        std::fill(dh_next.begin(), dh_next.end(), 0.0);
        for (std::size_t h = 0; h < H; ++h) {
          grad[off_b + h] += da[h];
          for (std::size_t j = 0; j < D; ++j) grad[h * D + j] += da[h] * xs[t - 1][j];
          for (std::size_t k = 0; k < H; ++k) {
            grad[off_wh + h * H + k] += da[h] * hs[t - 1][k];
            dh_next[k] += theta[off_wh + h * H + k] * da[h];
          }
        }
      }
      adam.step(theta, grad);
    }
  }

  model.w_.hidden = H;
  model.w_.wx.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(n_wx));
  model.w_.wh.assign(theta.begin() + static_cast<std::ptrdiff_t>(off_wh), theta.begin() + static_cast<std::ptrdiff_t>(off_b));
  model.w_.b.assign(theta.begin() + static_cast<std::ptrdiff_t>(off_b), theta.begin() + static_cast<std::ptrdiff_t>(off_v));
  model.w_.v.assign(theta.begin() + static_cast<std::ptrdiff_t>(off_v), theta.begin() + static_cast<std::ptrdiff_t>(off_c));
  model.w_.c = theta[off_c];
  return model;
}

double RecurrentScorer::probability(std::span<const StepInput> steps) const {
  const std::size_t H = w_.hidden, D = kStepDim;
  if (H == 0) throw std::logic_error("RecurrentScorer: untrained model");
  if (steps.empty()) throw std::invalid_argument("RecurrentScorer: empty sequence");
  std::vector<double> h(H, 0.0), next(H), pooled(H, 0.0);
  std::array<double, kStepDim> x{};
  for (const auto& step : steps) {
    for (std::size_t j = 0; j < D; ++j) x[j] = standardizer_.apply(j, step[j]);
    for (std::size_t i = 0; i < H; ++i) {
      double a = w_.b[i];
      for (std::size_t j = 0; j < D; ++j) a += w_.wx[i * D + j] * x[j];
      for (std::size_t k = 0; k < H; ++k) a += w_.wh[i * H + k] * h[k];
      next[i] = std::tanh(a);
    }
    h.swap(next);
    for (std::size_t i = 0; i < H; ++i) pooled[i] += h[i];
  }
  double logit = w_.c;
  for (std::size_t i = 0; i < H; ++i) logit += w_.v[i] * pooled[i] / static_cast<double>(steps.size());
  return logistic(logit);
}

ScorerOutput RecurrentScorer::predict(const WindowFeatures& f) const {
  const double p = probability(f.steps);
  return {p, binary_entropy_bits(p)};
}

}  // namespace haven::edge
