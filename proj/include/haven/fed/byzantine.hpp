#pragma once

#include <string_view>

#include "haven/common/rng.hpp"
#include "haven/fed/local_train.hpp"

namespace haven::fed {

enum class ByzantineKind { SignFlip, LargeNorm, RandomNoise, LabelFlip };

std::string_view to_string(ByzantineKind k);
ByzantineKind byzantine_kind_from_string(std::string_view s);

struct ByzantineBehavior {
  ByzantineKind kind = ByzantineKind::SignFlip;
  double magnitude = 1.0;
};

/// What a LabelFlip client needs to recompute its step on inverted labels.
struct LabelFlipContext {
  const GlobalModel* global = nullptr;
  const LogisticObjective* data = nullptr;
  double learning_rate = 0.1;
};

/// Replace an honest update with the adversarial one. LabelFlip requires
/// `ctx`; the other kinds only use the honest delta.
ClientUpdate byzantine_update(const ByzantineBehavior& behavior, const ClientUpdate& honest, Rng& rng,
                              const LabelFlipContext* ctx = nullptr);

}  // namespace haven::fed
