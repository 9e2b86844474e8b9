#pragma once

// Exact values of games in which the provers may exchange a bounded number
// of bits after seeing their questions, plus the guess-and-abort transform
// that turns such a protocol into a communication-free one.
//
// Message flow for one round: each prover receives its question, emits its
// message (a function of its own question only), then answers as a function
// of its question and the message it received. For one-round games it makes
// no difference whether the first prover answers before or after leaking,
// since both depend only on its question.

#include <algorithm>
#include <string>
#include <vector>

#include "leakmip/game.hpp"

namespace leakmip {

enum class LeakageKind { OneWayAB, OneWayBA, Simultaneous };

inline std::string to_string(LeakageKind k) {
  switch (k) {
    case LeakageKind::OneWayAB: return "one-way-ab";
    case LeakageKind::OneWayBA: return "one-way-ba";
    case LeakageKind::Simultaneous: return "simultaneous";
  }
  return "?";
}

inline LeakageKind parse_leakage_kind(const std::string& s) {
  if (s == "one-way-ab" || s == "ab") return LeakageKind::OneWayAB;
  if (s == "one-way-ba" || s == "ba") return LeakageKind::OneWayBA;
  if (s == "simultaneous" || s == "sim") return LeakageKind::Simultaneous;
  throw InvalidInput("unknown leakage model '" + s + "'");
}

inline constexpr unsigned kMaxLeakageBits = 30;

/// Who may talk to whom, and how many bits in each direction. The total
/// budget is bits_ab + bits_ba.
struct LeakageModel {
  LeakageKind kind = LeakageKind::OneWayAB;
  unsigned bits_ab = 0;
  unsigned bits_ba = 0;

  static LeakageModel none() { return {LeakageKind::OneWayAB, 0, 0}; }
  static LeakageModel one_way_ab(unsigned bits) { return {LeakageKind::OneWayAB, bits, 0}; }
  static LeakageModel one_way_ba(unsigned bits) { return {LeakageKind::OneWayBA, 0, bits}; }
  static LeakageModel simultaneous(unsigned ab, unsigned ba) { return {LeakageKind::Simultaneous, ab, ba}; }

  unsigned total_bits() const { return bits_ab + bits_ba; }
  std::size_t messages_ab() const { return std::size_t{1} << bits_ab; }
  std::size_t messages_ba() const { return std::size_t{1} << bits_ba; }

  void validate() const {
    if (kind == LeakageKind::OneWayAB && bits_ba != 0) throw InvalidInput("one-way-ab model forces bits_ba = 0");
    if (kind == LeakageKind::OneWayBA && bits_ab != 0) throw InvalidInput("one-way-ba model forces bits_ab = 0");
    if (total_bits() > kMaxLeakageBits)
      throw InvalidInput("leakage budget above " + std::to_string(kMaxLeakageBits) + " bits");
  }

  friend bool operator==(const LeakageModel&, const LeakageModel&) = default;
};

/// Message and answer tables. `alice_ans` is row-major over
/// (x, incoming message from Bob), `bob_ans` over (y, incoming from Alice).
struct LeakyStrategy {
  std::vector<std::size_t> alice_msg;
  std::vector<std::size_t> bob_msg;
  std::vector<std::size_t> alice_ans;
  std::vector<std::size_t> bob_ans;

  friend bool operator==(const LeakyStrategy&, const LeakyStrategy&) = default;
};

/// The zero-leakage embedding of a deterministic strategy pair.
inline LeakyStrategy embed(const StrategyPair& s, const LeakageModel& m) {
  LeakyStrategy out;
  out.alice_msg.assign(s.alice.size(), 0);
  out.bob_msg.assign(s.bob.size(), 0);
  for (auto a : s.alice) out.alice_ans.insert(out.alice_ans.end(), m.messages_ba(), a);
  for (auto b : s.bob) out.bob_ans.insert(out.bob_ans.end(), m.messages_ab(), b);
  return out;
}

template <GameLike G>
void check_shape(const G& g, const LeakageModel& m, const LeakyStrategy& s) {
  m.validate();
  const std::size_t m1 = m.messages_ab(), m2 = m.messages_ba();
  if (s.alice_msg.size() != g.x_size() || s.bob_msg.size() != g.y_size() || s.alice_ans.size() != g.x_size() * m2 ||
      s.bob_ans.size() != g.y_size() * m1)
    throw ShapeMismatch("leaky strategy tables do not match the game and leakage model");
  auto in_range = [](const std::vector<std::size_t>& v, std::size_t n) {
    return std::all_of(v.begin(), v.end(), [n](auto e) { return e < n; });
  };
  if (!in_range(s.alice_msg, m1) || !in_range(s.bob_msg, m2)) throw ShapeMismatch("message out of range");
  if (!in_range(s.alice_ans, g.a_size()) || !in_range(s.bob_ans, g.b_size()))
    throw ShapeMismatch("answer out of range");
}

template <GameLike G>
std::uint64_t leaky_strategy_weight(const G& g, const LeakageModel& m, const LeakyStrategy& s) {
  const std::size_t m1 = m.messages_ab(), m2 = m.messages_ba();
  std::uint64_t won = 0;
  for (std::size_t x = 0; x < g.x_size(); ++x)
    for (std::size_t y = 0; y < g.y_size(); ++y) {
      auto w = g.weight(x, y);
      if (w == 0) continue;
      auto a = s.alice_ans[x * m2 + s.bob_msg[y]];
      auto b = s.bob_ans[y * m1 + s.alice_msg[x]];
      if (g.accepts(x, y, a, b)) won += w;
    }
  return won;
}

template <GameLike G>
Value leaky_strategy_value(const G& g, const LeakageModel& m, const LeakyStrategy& s) {
  check_shape(g, m, s);
  return Value::from_weights(leaky_strategy_weight(g, m, s), g.total_weight());
}

struct LeakyResult {
  Value value;
  LeakyStrategy witness;
};

namespace detail {

/// Number of Alice-side tables (her messages, Bob's messages, her answers)
/// that the exact search walks; Bob's answers are a best response.
template <GameLike G>
std::uint64_t leaky_sender_count(const G& g, std::size_t m1, std::size_t m2) {
  return saturating_mul(saturating_mul(saturating_pow(m1, g.x_size()), saturating_pow(m2, g.y_size())),
                        saturating_pow(g.a_size(), g.x_size() * m2));
}

/// Bob's best answers per (y, incoming message) given everything else.
template <GameLike G>
std::uint64_t leaky_best_reply(const G& g, const std::vector<std::vector<std::size_t>>& support, std::size_t m1,
                               std::size_t m2, std::span<const std::size_t> alice_msg,
                               std::span<const std::size_t> bob_msg, std::span<const std::size_t> alice_ans,
                               std::span<std::size_t> reply, std::vector<std::uint64_t>& acc,
                               std::vector<std::uint64_t>& best) {
  std::uint64_t total = 0;
  for (std::size_t y = 0; y < g.y_size(); ++y) {
    std::fill(best.begin(), best.end(), 0);
    for (std::size_t m = 0; m < m1; ++m) reply[y * m1 + m] = 0;
    for (std::size_t b = 0; b < g.b_size(); ++b) {
      std::fill(acc.begin(), acc.end(), 0);
      for (auto x : support[y])
        if (g.accepts(x, y, alice_ans[x * m2 + bob_msg[y]], b)) acc[alice_msg[x]] += g.weight(x, y);
      for (std::size_t m = 0; m < m1; ++m)
        if (acc[m] > best[m]) {
          best[m] = acc[m];
          reply[y * m1 + m] = b;
        }
    }
    for (std::size_t m = 0; m < m1; ++m) total += best[m];
  }
  return total;
}

/// Exhaustive search over Alice-side tables, lexicographic over
/// (alice_msg, bob_msg, alice_ans), with Bob best-responding.
template <GameLike G>
LeakyStrategy leaky_search(const G& g, std::size_t m1, std::size_t m2, unsigned workers) {
  const auto support = column_support(g);
  const std::size_t xs = g.x_size(), ys = g.y_size();
  std::vector<std::size_t> radices;
  radices.insert(radices.end(), xs, m1);
  radices.insert(radices.end(), ys, m2);
  radices.insert(radices.end(), xs * m2, g.a_size());
  const std::uint64_t count = leaky_sender_count(g, m1, m2);

  auto chunk = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<std::size_t> digits(radices.size()), reply(ys * m1);
    std::vector<std::uint64_t> acc(m1), best_m(m1);
    decode_mixed(begin, radices, digits);
    std::span<const std::size_t> all(digits);
    auto amsg = all.subspan(0, xs), bmsg = all.subspan(xs, ys), aans = all.subspan(xs + ys);
    Candidate best;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      Candidate c;
      c.valid = true;
      c.score = leaky_best_reply(g, support, m1, m2, amsg, bmsg, aans, reply, acc, best_m);
      c.primary = idx;
      c.secondary = 0;
      keep_better(best, c);
      next_tuple(digits, radices);
    }
    return best;
  };
  Candidate best = partitioned_best(count, workers, chunk);

  std::vector<std::size_t> digits(radices.size());
  decode_mixed(best.primary, radices, digits);
  LeakyStrategy s;
  s.alice_msg.assign(digits.begin(), digits.begin() + xs);
  s.bob_msg.assign(digits.begin() + xs, digits.begin() + xs + ys);
  s.alice_ans.assign(digits.begin() + xs + ys, digits.end());
  s.bob_ans.assign(ys * m1, 0);
  std::vector<std::uint64_t> acc(m1), best_m(m1);
  leaky_best_reply(g, support, m1, m2, s.alice_msg, s.bob_msg, s.alice_ans, s.bob_ans, acc, best_m);
  return s;
}

}  // namespace detail

/// Size of the space the exact leaky search enumerates for `m`.
template <GameLike G>
std::uint64_t leaky_search_size(const G& g, const LeakageModel& m) {
  m.validate();
  if (m.kind == LeakageKind::OneWayBA) return detail::leaky_sender_count(TransposedGame<G>(g), m.messages_ba(), 1);
  return detail::leaky_sender_count(g, m.messages_ab(), m.messages_ba());
}

/// Exact optimum over all deterministic leaky strategies consistent with
/// `m`. The witness is lexicographically smallest in sender-major order:
/// (alice_msg, bob_msg, alice_ans, bob_ans) for one-way-ab and simultaneous,
/// (bob_msg, alice_msg, bob_ans, alice_ans) for one-way-ba.
template <GameLike G>
LeakyResult leaky_value_exact(const G& g, const LeakageModel& m, const SolverOptions& opt = {}) {
  const auto size = leaky_search_size(g, m);
  if (size > opt.budget)
    throw BudgetExceeded("leaky value: " + std::to_string(size) + " sender strategies exceed budget of " +
                         std::to_string(opt.budget));
  LeakyStrategy s;
  if (m.kind == LeakageKind::OneWayBA) {
    auto t = detail::leaky_search(TransposedGame<G>(g), m.messages_ba(), 1, opt.workers);
    s.alice_msg = std::move(t.bob_msg);
    s.bob_msg = std::move(t.alice_msg);
    s.alice_ans = std::move(t.bob_ans);
    s.bob_ans = std::move(t.alice_ans);
  } else {
    s = detail::leaky_search(g, m.messages_ab(), m.messages_ba(), opt.workers);
  }
  auto v = Value::from_weights(leaky_strategy_weight(g, m, s), g.total_weight());
  return LeakyResult{std::move(v), std::move(s)};
}

/// Winning probability of the communication-free protocol obtained from `s`:
/// the provers share a uniformly random guess of the whole transcript, each
/// aborts unless its own message equals the guess, and each answers as if
/// the guessed incoming message had arrived. Computed by summing over every
/// guess.
template <GameLike G>
Value guess_and_abort_value(const G& g, const LeakageModel& m, const LeakyStrategy& s) {
  check_shape(g, m, s);
  const std::size_t m1 = m.messages_ab(), m2 = m.messages_ba();
  std::uint64_t won = 0;
  for (std::size_t guess_ab = 0; guess_ab < m1; ++guess_ab)
    for (std::size_t guess_ba = 0; guess_ba < m2; ++guess_ba)
      for (std::size_t x = 0; x < g.x_size(); ++x) {
        if (s.alice_msg[x] != guess_ab) continue;  // Alice aborts
        for (std::size_t y = 0; y < g.y_size(); ++y) {
          auto w = g.weight(x, y);
          if (w == 0 || s.bob_msg[y] != guess_ba) continue;  // Bob aborts
          if (g.accepts(x, y, s.alice_ans[x * m2 + guess_ba], s.bob_ans[y * m1 + guess_ab])) won += w;
        }
      }
  return Value(make_rational(won, g.total_weight()) / pow2(m.total_bits()));
}

/// min(1, 2^bits * classical value): holds for any interactive protocol
/// exchanging `bits` bits, by guess-and-abort.
template <GameLike G>
Value leaky_value_upper_bound(const G& g, unsigned total_bits, const SolverOptions& opt = {}) {
  auto base = classical_value(g, opt).value;
  return Value::clamped(base.exact() * pow2(total_bits));
}

/// Visits every leaky strategy consistent with `m` (all four tables).
template <GameLike G, class Fn>
void for_each_leaky_strategy(const G& g, const LeakageModel& m, Fn&& fn) {
  m.validate();
  const std::size_t m1 = m.messages_ab(), m2 = m.messages_ba();
  const std::size_t xs = g.x_size(), ys = g.y_size();
  std::vector<std::size_t> radices;
  radices.insert(radices.end(), xs, m1);
  radices.insert(radices.end(), ys, m2);
  radices.insert(radices.end(), xs * m2, g.a_size());
  radices.insert(radices.end(), ys * m1, g.b_size());
  std::vector<std::size_t> digits(radices.size(), 0);
  LeakyStrategy s;
  do {
    auto it = digits.begin();
    s.alice_msg.assign(it, it + xs);
    it += xs;
    s.bob_msg.assign(it, it + ys);
    it += ys;
    s.alice_ans.assign(it, it + xs * m2);
    it += xs * m2;
    s.bob_ans.assign(it, digits.end());
    fn(std::as_const(s));
  } while (next_tuple(digits, radices));
}

}  // namespace leakmip
