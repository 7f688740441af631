#include "haven/fed/byzantine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace haven::fed {

std::string_view to_string(ByzantineKind k) {
  switch (k) {
    case ByzantineKind::SignFlip: return "SignFlip";
    case ByzantineKind::LargeNorm: return "LargeNorm";
    case ByzantineKind::RandomNoise: return "RandomNoise";
    case ByzantineKind::LabelFlip: return "LabelFlip";
  }
  return "?";
}

ByzantineKind byzantine_kind_from_string(std::string_view s) {
  for (auto k : {ByzantineKind::SignFlip, ByzantineKind::LargeNorm, ByzantineKind::RandomNoise, ByzantineKind::LabelFlip}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown byzantine behavior: " + std::string(s));
}

ClientUpdate byzantine_update(const ByzantineBehavior& behavior, const ClientUpdate& honest, Rng& rng,
                              const LabelFlipContext* ctx) {
  if (!std::isfinite(behavior.magnitude) || !(behavior.magnitude > 0.0)) {
    throw std::invalid_argument("byzantine_update: magnitude must be finite and > 0");
  }
  ClientUpdate out = honest;
  switch (behavior.kind) {
    case ByzantineKind::SignFlip:
      for (auto& v : out.delta) v *= -behavior.magnitude;
      break;
    case ByzantineKind::LargeNorm: {
      double n = 0.0;
      do {
        for (auto& v : out.delta) v = rng.normal();
        n = l2_norm(out.delta);
      } while (n == 0.0);
      for (auto& v : out.delta) v *= behavior.magnitude / n;
      break;
    }
    case ByzantineKind::RandomNoise:
      for (auto& v : out.delta) v = rng.normal(0.0, behavior.magnitude);
      break;
    case ByzantineKind::LabelFlip: {
      if (!ctx || !ctx->global || !ctx->data) throw std::invalid_argument("byzantine_update: LabelFlip needs local data");
      const auto flipped = ctx->data->flipped();
      out = local_train(*ctx->global, flipped, ctx->learning_rate, honest.vehicle_id);
      break;
    }
  }
  return out;
}

}  // namespace haven::fed
