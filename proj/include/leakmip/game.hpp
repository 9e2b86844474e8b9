#pragma once

// Finite two-prover one-round games, deterministic strategies and the exact
// classical value.

#include <concepts>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "leakmip/enumerate.hpp"
#include "leakmip/error.hpp"
#include "leakmip/value.hpp"

namespace leakmip {

/// Anything that looks like a game table: alphabet sizes, integer question
/// weights over a common total, and a 0/1 predicate.
template <class G>
concept GameLike = requires(const G& g, std::size_t i) {
  { g.x_size() } -> std::convertible_to<std::size_t>;
  { g.y_size() } -> std::convertible_to<std::size_t>;
  { g.a_size() } -> std::convertible_to<std::size_t>;
  { g.b_size() } -> std::convertible_to<std::size_t>;
  { g.total_weight() } -> std::convertible_to<std::uint64_t>;
  { g.weight(i, i) } -> std::convertible_to<std::uint64_t>;
  { g.accepts(i, i, i, i) } -> std::convertible_to<bool>;
};

/// A game (pi, X x Y, A x B, V). Questions and answers are the index sets
/// 0..size-1. The distribution is kept as integer weights reduced by their
/// gcd, so two games with proportional weights compare equal.
class Game {
public:
  Game(std::string name, std::size_t x_size, std::size_t y_size, std::size_t a_size, std::size_t b_size,
       std::vector<std::uint64_t> weights, std::vector<std::uint8_t> predicate)
      : name_(std::move(name)),
        x_size_(x_size),
        y_size_(y_size),
        a_size_(a_size),
        b_size_(b_size),
        weights_(std::move(weights)),
        predicate_(std::move(predicate)) {
    if (name_.empty() || name_.find_first_of(" \t\r\n#") != std::string::npos)
      throw InvalidInput("game name must be a single non-empty token");
    if (x_size_ == 0 || y_size_ == 0 || a_size_ == 0 || b_size_ == 0)
      throw InvalidInput("alphabet sizes must be at least 1");
    if (weights_.size() != x_size_ * y_size_)
      throw ShapeMismatch("expected " + std::to_string(x_size_ * y_size_) + " weights, got " +
                          std::to_string(weights_.size()));
    if (predicate_.size() != x_size_ * y_size_ * a_size_ * b_size_)
      throw ShapeMismatch("predicate table has wrong size");
    std::uint64_t g = 0;
    for (auto w : weights_) g = std::gcd(g, w);
    if (g == 0) throw InvalidInput("zero total weight");
    total_ = 0;
    for (auto& w : weights_) {
      w /= g;
      if (total_ > kSaturated - w) throw InvalidInput("total weight overflows 64 bits");
      total_ += w;
    }
    for (auto& bit : predicate_) bit = bit ? 1 : 0;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t x_size() const noexcept { return x_size_; }
  std::size_t y_size() const noexcept { return y_size_; }
  std::size_t a_size() const noexcept { return a_size_; }
  std::size_t b_size() const noexcept { return b_size_; }
  std::uint64_t total_weight() const noexcept { return total_; }

  std::uint64_t weight(std::size_t x, std::size_t y) const { return weights_[x * y_size_ + y]; }
  Rational probability(std::size_t x, std::size_t y) const { return make_rational(weight(x, y), total_); }

  bool accepts(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return predicate_[((x * y_size_ + y) * a_size_ + a) * b_size_ + b] != 0;
  }

  const std::vector<std::uint64_t>& weights() const noexcept { return weights_; }
  const std::vector<std::uint8_t>& predicate() const noexcept { return predicate_; }

  friend bool operator==(const Game&, const Game&) = default;

private:
  std::string name_;
  std::size_t x_size_, y_size_, a_size_, b_size_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::uint8_t> predicate_;
  std::uint64_t total_ = 0;
};

/// Builds a game from a predicate callable V(x, y, a, b) and weight callable
/// w(x, y).
template <class WeightFn, class PredFn>
Game make_game(std::string name, std::size_t xs, std::size_t ys, std::size_t as, std::size_t bs, WeightFn&& w,
               PredFn&& v) {
  std::vector<std::uint64_t> weights(xs * ys);
  std::vector<std::uint8_t> pred(xs * ys * as * bs);
  for (std::size_t x = 0; x < xs; ++x)
    for (std::size_t y = 0; y < ys; ++y) {
      weights[x * ys + y] = w(x, y);
      for (std::size_t a = 0; a < as; ++a)
        for (std::size_t b = 0; b < bs; ++b) pred[((x * ys + y) * as + a) * bs + b] = v(x, y, a, b) ? 1 : 0;
    }
  return Game(std::move(name), xs, ys, as, bs, std::move(weights), std::move(pred));
}

/// CHSH: uniform questions over {0,1}^2, win iff a xor b == x and y.
inline Game chsh_game() {
  return make_game(
      "chsh", 2, 2, 2, 2, [](auto, auto) { return 1; }, [](auto x, auto y, auto a, auto b) { return (a ^ b) == (x & y); });
}

/// Uniform-weight game whose predicate is the constant `value`.
inline Game constant_game(std::string name, std::size_t xs, std::size_t ys, std::size_t as, std::size_t bs,
                          bool value) {
  return make_game(
      std::move(name), xs, ys, as, bs, [](auto, auto) { return 1; }, [value](auto, auto, auto, auto) { return value; });
}

/// Swaps the roles of the two provers.
template <GameLike G>
class TransposedGame {
public:
  explicit TransposedGame(const G& g) : g_(&g) {}
  std::size_t x_size() const { return g_->y_size(); }
  std::size_t y_size() const { return g_->x_size(); }
  std::size_t a_size() const { return g_->b_size(); }
  std::size_t b_size() const { return g_->a_size(); }
  std::uint64_t total_weight() const { return g_->total_weight(); }
  std::uint64_t weight(std::size_t x, std::size_t y) const { return g_->weight(y, x); }
  bool accepts(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const { return g_->accepts(y, x, b, a); }

private:
  const G* g_;
};

/// Deterministic answer tables a: X -> A and b: Y -> B.
struct StrategyPair {
  std::vector<std::size_t> alice;
  std::vector<std::size_t> bob;

  friend bool operator==(const StrategyPair&, const StrategyPair&) = default;
};

template <GameLike G>
void check_shape(const G& g, const StrategyPair& s) {
  if (s.alice.size() != g.x_size() || s.bob.size() != g.y_size())
    throw ShapeMismatch("strategy table lengths do not match the question alphabets");
  for (auto a : s.alice)
    if (a >= g.a_size()) throw ShapeMismatch("alice answer out of range");
  for (auto b : s.bob)
    if (b >= g.b_size()) throw ShapeMismatch("bob answer out of range");
}

/// Winning weight (numerator over total_weight) of a strategy pair.
template <GameLike G>
std::uint64_t strategy_weight(const G& g, const StrategyPair& s) {
  std::uint64_t won = 0;
  for (std::size_t x = 0; x < g.x_size(); ++x)
    for (std::size_t y = 0; y < g.y_size(); ++y) {
      auto w = g.weight(x, y);
      if (w != 0 && g.accepts(x, y, s.alice[x], s.bob[y])) won += w;
    }
  return won;
}

template <GameLike G>
Value strategy_value(const G& g, const StrategyPair& s) {
  check_shape(g, s);
  return Value::from_weights(strategy_weight(g, s), g.total_weight());
}

/// Value when a single party sees both questions: sum over (x, y) of pi(x, y)
/// times [some (a, b) wins]. Ceiling for every leaky value.
template <GameLike G>
Value merged_prover_value(const G& g) {
  std::uint64_t won = 0;
  for (std::size_t x = 0; x < g.x_size(); ++x)
    for (std::size_t y = 0; y < g.y_size(); ++y) {
      auto w = g.weight(x, y);
      if (w == 0) continue;
      bool any = false;
      for (std::size_t a = 0; a < g.a_size() && !any; ++a)
        for (std::size_t b = 0; b < g.b_size() && !any; ++b) any = g.accepts(x, y, a, b);
      if (any) won += w;
    }
  return Value::from_weights(won, g.total_weight());
}

struct ClassicalResult {
  Value value;
  StrategyPair witness;
};

namespace detail {

/// Questions y paired with the x's that have positive weight against them.
template <GameLike G>
std::vector<std::vector<std::size_t>> column_support(const G& g) {
  std::vector<std::vector<std::size_t>> support(g.y_size());
  for (std::size_t y = 0; y < g.y_size(); ++y)
    for (std::size_t x = 0; x < g.x_size(); ++x)
      if (g.weight(x, y) != 0) support[y].push_back(x);
  return support;
}

/// Bob's lexicographically smallest best response to a fixed Alice map.
/// Returns the winning weight and writes the response into `reply`.
template <GameLike G>
std::uint64_t best_reply(const G& g, const std::vector<std::vector<std::size_t>>& support,
                         std::span<const std::size_t> alice, std::span<std::size_t> reply) {
  std::uint64_t total = 0;
  for (std::size_t y = 0; y < g.y_size(); ++y) {
    std::uint64_t best = 0;
    std::size_t best_b = 0;
    for (std::size_t b = 0; b < g.b_size(); ++b) {
      std::uint64_t s = 0;
      for (auto x : support[y])
        if (g.accepts(x, y, alice[x], b)) s += g.weight(x, y);
      if (s > best) {
        best = s;
        best_b = b;
      }
    }
    reply[y] = best_b;
    total += best;
  }
  return total;
}

/// Enumerates the row player's maps and best-responds with the column
/// player. With `column_major` the tie-break key puts the column player's
/// map first (used when the game has been transposed).
template <GameLike G>
StrategyPair classical_search(const G& g, unsigned workers, bool column_major) {
  const auto support = column_support(g);
  const std::uint64_t count = saturating_pow(g.a_size(), g.x_size());
  auto chunk = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::size_t> alice(g.x_size()), reply(g.y_size());
    decode_mixed(begin, g.a_size(), alice);
    Candidate best;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      Candidate c;
      c.valid = true;
      c.score = best_reply(g, support, alice, reply);
      if (column_major) {
        c.primary = encode_mixed(reply, g.b_size());
        c.secondary = idx;
      } else {
        c.primary = idx;
        c.secondary = 0;
      }
      keep_better(best, c);
      next_tuple(alice, g.a_size());
    }
    return best;
  };
  Candidate best = partitioned_best(count, workers, chunk);
  StrategyPair s{std::vector<std::size_t>(g.x_size()), std::vector<std::size_t>(g.y_size())};
  decode_mixed(column_major ? best.secondary : best.primary, g.a_size(), s.alice);
  best_reply(g, support, s.alice, s.bob);
  return s;
}

}  // namespace detail

/// Exact classical value with the lexicographically smallest optimal
/// (alice, bob) pair. Only the smaller side is enumerated; the other side
/// best-responds per question, which is exact because the objective
/// separates over that side's questions.
template <GameLike G>
ClassicalResult classical_value(const G& g, const SolverOptions& opt = {}) {
  const std::uint64_t alice_count = saturating_pow(g.a_size(), g.x_size());
  const std::uint64_t bob_count = saturating_pow(g.b_size(), g.y_size());
  if (saturating_mul(alice_count, bob_count) > opt.budget)
    throw BudgetExceeded("classical value: strategy-pair count exceeds budget of " + std::to_string(opt.budget));
  StrategyPair s;
  if (alice_count <= bob_count) {
    s = detail::classical_search(g, opt.workers, false);
  } else {
    TransposedGame<G> t(g);
    auto ts = detail::classical_search(t, opt.workers, true);
    s = StrategyPair{std::move(ts.bob), std::move(ts.alice)};
  }
  auto v = Value::from_weights(strategy_weight(g, s), g.total_weight());
  return ClassicalResult{std::move(v), std::move(s)};
}

}  // namespace leakmip
