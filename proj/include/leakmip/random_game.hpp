#pragma once

#include <string>

#include "leakmip/game.hpp"
#include "leakmip/rng.hpp"

namespace leakmip {

struct RandomGameShape {
  std::size_t min_size = 1;
  std::size_t max_size = 3;
  std::uint64_t max_weight = 4;
  /// Probability that a predicate entry is 1.
  double density = 0.5;
};

/// Alphabet sizes uniform in [min_size, max_size], weights uniform in
/// [0, max_weight] (re-drawn while all are zero), predicate entries
/// Bernoulli(density).
inline Game random_game(SplitMix64& rng, const RandomGameShape& shape = {}, std::string name = "random") {
  auto size = [&] { return static_cast<std::size_t>(rng.between(shape.min_size, shape.max_size)); };
  const auto xs = size(), ys = size(), as = size(), bs = size();
  std::vector<std::uint64_t> weights(xs * ys);
  std::uint64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& w : weights) total += (w = rng.below(shape.max_weight + 1));
  }
  std::vector<std::uint8_t> pred(xs * ys * as * bs);
  for (auto& p : pred) p = rng.unit() < shape.density;
  return Game(std::move(name), xs, ys, as, bs, std::move(weights), std::move(pred));
}

}  // namespace leakmip
