#pragma once

// Two ways to turn a label cover into a two-prover game.

#include <algorithm>

#include "leakmip/csp.hpp"
#include "leakmip/game.hpp"

namespace leakmip {

/// Pick a uniform edge (u, v); Alice gets u and answers in Sigma_L, Bob gets
/// v and answers in Sigma_R; accept iff phi_e(a) = b. Questions are the
/// endpoints, so the pair (u, v) has to identify the constraint: parallel
/// edges add weight when their projections agree and are rejected otherwise.
inline Game edge_game(const LabelCover& lc) {
  if (lc.edges().empty()) throw InvalidInput("edge game needs at least one edge");
  const std::size_t xs = lc.left_count(), ys = lc.right_count();
  const std::size_t as = lc.left_alphabet(), bs = lc.right_alphabet();
  std::vector<std::uint64_t> weights(xs * ys, 0);
  std::vector<const LabelCoverEdge*> owner(xs * ys, nullptr);
  for (const auto& e : lc.edges()) {
    const auto cell = e.left * ys + e.right;
    if (owner[cell] && owner[cell]->projection != e.projection)
      throw InvalidInput("parallel edges " + std::to_string(e.left) + "-" + std::to_string(e.right) +
                         " carry different projections");
    owner[cell] = &e;
    ++weights[cell];
  }
  std::vector<std::uint8_t> pred(xs * ys * as * bs, 0);
  for (std::size_t cell = 0; cell < owner.size(); ++cell) {
    if (!owner[cell]) continue;
    for (std::size_t a = 0; a < as; ++a) pred[(cell * as + a) * bs + owner[cell]->projection[a]] = 1;
  }
  return Game("edge-game", xs, ys, as, bs, std::move(weights), std::move(pred));
}

/// Alice gets a uniform edge e = (u, v) and answers a label pair encoded as
/// sigma_L * |Sigma_R| + sigma_R. Bob gets one endpoint chosen uniformly:
/// left vertices are questions 0..|L|-1, right vertex v is |L| + v, and he
/// answers in max(|Sigma_L|, |Sigma_R|). Accept iff the pair satisfies phi_e
/// and Bob's label matches Alice's on the queried endpoint.
inline Game consistency_game(const LabelCover& lc) {
  if (lc.edges().empty()) throw InvalidInput("consistency game needs at least one edge");
  const std::size_t xs = lc.edges().size(), ys = lc.left_count() + lc.right_count();
  const std::size_t sl = lc.left_alphabet(), sr = lc.right_alphabet();
  const std::size_t as = sl * sr, bs = std::max(sl, sr);
  std::vector<std::uint64_t> weights(xs * ys, 0);
  std::vector<std::uint8_t> pred(xs * ys * as * bs, 0);
  for (std::size_t x = 0; x < xs; ++x) {
    const auto& e = lc.edges()[x];
    const std::size_t ends[2] = {e.left, lc.left_count() + e.right};
    for (int side = 0; side < 2; ++side) {
      const auto y = ends[side];
      weights[x * ys + y] += 1;
      for (std::size_t s = 0; s < sl; ++s) {
        const std::size_t r = e.projection[s];
        const std::size_t a = s * sr + r;
        const std::size_t b = side == 0 ? s : r;
        pred[((x * ys + y) * as + a) * bs + b] = 1;
      }
    }
  }
  return Game("consistency-game", xs, ys, as, bs, std::move(weights), std::move(pred));
}

/// Strategy for the consistency game induced by a labeling: Alice answers
/// (l_u, phi_e(l_u)) on edge e, Bob answers the queried vertex's label.
inline StrategyPair consistency_strategy(const LabelCover& lc, std::span<const std::size_t> left,
                                         std::span<const std::size_t> right) {
  if (left.size() != lc.left_count() || right.size() != lc.right_count())
    throw ShapeMismatch("labeling does not match the vertex counts");
  for (auto l : left)
    if (l >= lc.left_alphabet()) throw InvalidInput("left label out of range");
  StrategyPair s;
  for (const auto& e : lc.edges()) {
    s.alice.push_back(left[e.left] * lc.right_alphabet() + e.projection[left[e.left]]);
  }
  s.bob.assign(left.begin(), left.end());
  for (auto r : right) {
    if (r >= lc.right_alphabet()) throw InvalidInput("right label out of range");
    s.bob.push_back(r);
  }
  return s;
}

}  // namespace leakmip
