#pragma once

// N-fold parallel repetition: questions drawn independently per coordinate,
// the provers win only if every coordinate wins.

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "leakmip/leakage.hpp"

namespace leakmip {

inline constexpr std::uint64_t kDefaultCellCap = std::uint64_t{1} << 24;

/// Implicit G^{(x)N}. Product indices are mixed-radix tuples with coordinate
/// 0 as the most significant digit.
class RepeatedGame {
public:
  RepeatedGame(Game base, std::size_t copies) : base_(std::move(base)), copies_(copies) {
    if (copies_ == 0) throw InvalidInput("repetition count must be at least 1");
    auto check = [&](std::uint64_t v, const char* what) {
      auto p = saturating_pow(v, copies_);
      if (p == kSaturated) throw InvalidInput(std::string("repeated ") + what + " does not fit in 64 bits");
      return p;
    };
    x_size_ = check(base_.x_size(), "question alphabet");
    y_size_ = check(base_.y_size(), "question alphabet");
    a_size_ = check(base_.a_size(), "answer alphabet");
    b_size_ = check(base_.b_size(), "answer alphabet");
    total_ = check(base_.total_weight(), "total weight");
  }

  const Game& base() const noexcept { return base_; }
  std::size_t copies() const noexcept { return copies_; }
  std::size_t x_size() const noexcept { return x_size_; }
  std::size_t y_size() const noexcept { return y_size_; }
  std::size_t a_size() const noexcept { return a_size_; }
  std::size_t b_size() const noexcept { return b_size_; }
  std::uint64_t total_weight() const noexcept { return total_; }

  std::uint64_t weight(std::size_t x, std::size_t y) const {
    std::uint64_t w = 1;
    for (std::size_t i = 0; i < copies_ && w != 0; ++i) {
      w *= base_.weight(x % base_.x_size(), y % base_.y_size());
      x /= base_.x_size();
      y /= base_.y_size();
    }
    return w;
  }

  bool accepts(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    for (std::size_t i = 0; i < copies_; ++i) {
      if (!base_.accepts(x % base_.x_size(), y % base_.y_size(), a % base_.a_size(), b % base_.b_size())) return false;
      x /= base_.x_size();
      y /= base_.y_size();
      a /= base_.a_size();
      b /= base_.b_size();
    }
    return true;
  }

  /// Splits a product index into per-coordinate indices.
  std::vector<std::size_t> split(std::size_t index, std::size_t radix) const {
    std::vector<std::size_t> digits(copies_);
    decode_mixed(index, radix, digits);
    return digits;
  }

  std::size_t join(std::span<const std::size_t> digits, std::size_t radix) const {
    return static_cast<std::size_t>(encode_mixed(digits, radix));
  }

private:
  Game base_;
  std::size_t copies_;
  std::size_t x_size_, y_size_, a_size_, b_size_;
  std::uint64_t total_;
};

inline RepeatedGame repeat_game(const Game& g, std::size_t n) { return RepeatedGame(g, n); }

inline std::uint64_t cell_count(const RepeatedGame& rg) {
  return saturating_mul(saturating_mul(rg.x_size(), rg.y_size()), saturating_mul(rg.a_size(), rg.b_size()));
}

/// Explicit product table. Refuses when the table would exceed `cell_cap`.
inline Game materialize(const RepeatedGame& rg, std::uint64_t cell_cap = kDefaultCellCap) {
  if (cell_count(rg) > cell_cap) throw BudgetExceeded("repeated game table exceeds memory cap");
  return make_game(
      rg.base().name() + "^" + std::to_string(rg.copies()), rg.x_size(), rg.y_size(), rg.a_size(), rg.b_size(),
      [&](auto x, auto y) { return rg.weight(x, y); }, [&](auto x, auto y, auto a, auto b) { return rg.accepts(x, y, a, b); });
}

/// Exact classical value of the repeated game. Uses the explicit table when
/// it fits under `cell_cap`, the implicit view otherwise.
inline ClassicalResult repeated_exact_value(const RepeatedGame& rg, const SolverOptions& opt = {},
                                            std::uint64_t cell_cap = kDefaultCellCap) {
  if (rg.copies() == 1) return classical_value(rg.base(), opt);
  if (cell_count(rg) <= cell_cap) return classical_value(materialize(rg, cell_cap), opt);
  return classical_value(rg, opt);
}

/// The repeated-game strategy that plays `per_coordinate[i]` on coordinate i.
inline StrategyPair product_strategy(const RepeatedGame& rg, std::span<const StrategyPair> per_coordinate) {
  if (per_coordinate.size() != rg.copies()) throw ShapeMismatch("need one strategy per coordinate");
  for (const auto& s : per_coordinate) check_shape(rg.base(), s);
  StrategyPair out{std::vector<std::size_t>(rg.x_size()), std::vector<std::size_t>(rg.y_size())};
  std::vector<std::size_t> digits(rg.copies());
  for (std::size_t x = 0; x < rg.x_size(); ++x) {
    decode_mixed(x, rg.base().x_size(), digits);
    for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = per_coordinate[i].alice[digits[i]];
    out.alice[x] = rg.join(digits, rg.base().a_size());
  }
  for (std::size_t y = 0; y < rg.y_size(); ++y) {
    decode_mixed(y, rg.base().y_size(), digits);
    for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = per_coordinate[i].bob[digits[i]];
    out.bob[y] = rg.join(digits, rg.base().b_size());
  }
  return out;
}

/// Value of a coordinate-wise strategy: the product of the base values.
inline Value product_strategy_value(const RepeatedGame& rg, std::span<const StrategyPair> per_coordinate) {
  if (per_coordinate.size() != rg.copies()) throw ShapeMismatch("need one strategy per coordinate");
  Rational v = 1;
  for (const auto& s : per_coordinate) v *= strategy_value(rg.base(), s).exact();
  return Value(v);
}

/// Plug-in constants for (1 - eps^c_exp)^(c_rate * N / s). The constants in
/// the parallel repetition theorem are not explicit, so curves built from
/// these are illustrative only.
struct RepetitionBoundParams {
  double epsilon = 0.25;
  double s = 3.0;
  double c_exp = 1.0;
  double c_rate = 1.0 / 16.0;

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 0.5)) throw InvalidInput("epsilon must lie in (0, 1/2]");
    if (!(s >= 1)) throw InvalidInput("s must be at least 1");
    if (!(c_exp > 0) || !(c_rate > 0)) throw InvalidInput("bound constants must be positive");
  }

  /// epsilon = 1 - w_c(G), s = log2|A x B| + 1.
  static RepetitionBoundParams from_game(const Game& g, double c_exp = 1.0, double c_rate = 1.0 / 16.0,
                                         const SolverOptions& opt = {}) {
    RepetitionBoundParams p;
    p.epsilon = (Rational(1) - classical_value(g, opt).value.exact()).convert_to<double>();
    p.s = std::log2(static_cast<double>(g.a_size() * g.b_size())) + 1.0;
    p.c_exp = c_exp;
    p.c_rate = c_rate;
    p.validate();
    return p;
  }
};

inline double repetition_bound(const RepetitionBoundParams& p, std::size_t n) {
  p.validate();
  if (n == 0) return 1.0;
  return std::pow(1.0 - std::pow(p.epsilon, p.c_exp), p.c_rate * static_cast<double>(n) / p.s);
}

/// (N, bound(N)) for N = 1..n_max.
inline std::vector<std::pair<std::size_t, double>> repetition_bound_curve(const RepetitionBoundParams& p,
                                                                          std::size_t n_max) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t n = 1; n <= n_max; ++n) out.emplace_back(n, repetition_bound(p, n));
  return out;
}

enum class BoundKind {
  Exact,               // exhaustive leaky search on G^N
  RepeatedUpperBound,  // min(1, 2^l * w_c(G^N))
  BaseUpperBound,      // min(1, 2^l * w_c(G)), since w_c(G^N) <= w_c(G)
  Trivial,             // 1
};

inline std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Exact: return "exact";
    case BoundKind::RepeatedUpperBound: return "repeated-upper-bound";
    case BoundKind::BaseUpperBound: return "base-upper-bound";
    case BoundKind::Trivial: return "trivial";
  }
  return "?";
}

struct LeakyRepetitionResult {
  Value value;
  BoundKind kind = BoundKind::Exact;
  std::optional<LeakyStrategy> witness;
};

/// Leaky value of G^N under `m`: exact when the search fits the budget,
/// otherwise the tightest guess-and-abort upper bound that can be computed.
inline LeakyRepetitionResult leaky_repetition_experiment(const Game& g, std::size_t n, const LeakageModel& m,
                                                         const SolverOptions& opt = {},
                                                         std::uint64_t cell_cap = kDefaultCellCap) {
  m.validate();
  const RepeatedGame rg(g, n);
  auto run_exact = [&]() -> LeakyResult {
    if (n == 1) return leaky_value_exact(g, m, opt);
    if (cell_count(rg) <= cell_cap) return leaky_value_exact(materialize(rg, cell_cap), m, opt);
    return leaky_value_exact(rg, m, opt);
  };
  try {
    auto r = run_exact();
    return {std::move(r.value), BoundKind::Exact, std::move(r.witness)};
  } catch (const BudgetExceeded&) {
  }
  const Rational factor = pow2(m.total_bits());
  try {
    auto v = repeated_exact_value(rg, opt, cell_cap).value;
    return {Value::clamped(factor * v.exact()), BoundKind::RepeatedUpperBound, std::nullopt};
  } catch (const BudgetExceeded&) {
  }
  try {
    auto v = classical_value(g, opt).value;
    return {Value::clamped(factor * v.exact()), BoundKind::BaseUpperBound, std::nullopt};
  } catch (const BudgetExceeded&) {
  }
  return {Value(Rational(1)), BoundKind::Trivial, std::nullopt};
}

}  // namespace leakmip
