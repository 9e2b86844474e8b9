#pragma once

// The one-round verifier for a k-ary CSP against provers with one-way
// leakage:
//
//   1. pick a constraint e = (u_1..u_k) uniformly and send it to P1;
//   2. P1 answers a tuple sigma and may leak l bits to P2;
//   3. pick a position i uniformly and ask P2 for the value of u_i;
//   4. accept iff sigma satisfies e and sigma_i equals P2's answer.
//
// A deterministic P2 is a list of 2^l assignments, one per possible leaked
// message. Given that list, P1's best reply decomposes per constraint: it
// picks the message m and satisfying sigma maximizing the number of scope
// positions where sigma agrees with assignment m. So the optimum over all
// deterministic cheats is the maximum, over P2 lists, of
//
//   (1/|E|) * sum_e max_m max_{sigma satisfies e} agree(sigma, A_m|e) / k.
//
// Randomized provers cannot do better: acceptance is affine in each
// prover's mixture over deterministic behaviors. Repeated variables in a
// scope count as separate positions.

#include <string>
#include <thread>
#include <vector>

#include "leakmip/csp.hpp"

namespace leakmip {

inline constexpr unsigned kMaxCheatLeakBits = 16;

struct ProverOneReply {
  std::size_t message = 0;
  std::uint64_t tuple = 0;
  std::size_t agreement = 0;
  bool satisfiable = false;

  friend bool operator==(const ProverOneReply&, const ProverOneReply&) = default;
};

struct CheatProfile {
  unsigned leak_bits = 0;
  /// P2's assignment for each leaked message; exactly 2^leak_bits entries.
  std::vector<Assignment> assignments;
  /// P1's reply for each constraint.
  std::vector<ProverOneReply> replies;
};

namespace detail {

inline std::size_t agreement(const CspInstance& c, std::size_t con, std::uint64_t tuple,
                             std::span<const std::size_t> values) {
  const auto& scope = c.constraints()[con].scope;
  std::size_t n = 0;
  for (std::size_t i = scope.size(); i-- > 0;) {
    n += (tuple % c.alphabet_size()) == values[scope[i]];
    tuple /= c.alphabet_size();
  }
  return n;
}

/// max over satisfying sigma of agreement with `values`; 0 if none.
inline std::size_t best_agreement(const CspInstance& c, std::size_t con, std::span<const std::size_t> values) {
  std::size_t best = 0;
  for (auto t : c.constraints()[con].allowed) best = std::max(best, agreement(c, con, t, values));
  return best;
}

inline void check_profile_shape(const CspInstance& c, unsigned leak_bits, const std::vector<Assignment>& as) {
  if (leak_bits > kMaxCheatLeakBits) throw InvalidInput("leak bits above " + std::to_string(kMaxCheatLeakBits));
  if (as.size() != (std::size_t{1} << leak_bits))
    throw ShapeMismatch("profile needs exactly 2^l = " + std::to_string(std::size_t{1} << leak_bits) +
                        " assignments, got " + std::to_string(as.size()));
  for (const auto& a : as) c.check(a);
}

}  // namespace detail

/// P1's best reply to a fixed P2 list; ties go to the smaller message, then
/// the smaller tuple code.
inline std::vector<ProverOneReply> prover_one_best_reply(const CspInstance& c, const std::vector<Assignment>& as) {
  std::vector<ProverOneReply> replies(c.size());
  for (std::size_t e = 0; e < c.size(); ++e) {
    auto& r = replies[e];
    const auto& allowed = c.constraints()[e].allowed;
    if (allowed.empty()) continue;
    r.satisfiable = true;
    r.tuple = allowed.front();
    r.agreement = detail::agreement(c, e, r.tuple, as[0].values);
    for (std::size_t m = 0; m < as.size(); ++m)
      for (auto t : allowed)
        if (auto n = detail::agreement(c, e, t, as[m].values); n > r.agreement) {
          r = {m, t, n, true};
        }
  }
  return replies;
}

inline CheatProfile make_cheat_profile(const CspInstance& c, unsigned leak_bits, std::vector<Assignment> as) {
  detail::check_profile_shape(c, leak_bits, as);
  CheatProfile p{leak_bits, std::move(as), {}};
  p.replies = prover_one_best_reply(c, p.assignments);
  return p;
}

/// Both provers follow one assignment; nothing useful is leaked.
inline CheatProfile honest_profile(const CspInstance& c, unsigned leak_bits, const Assignment& a) {
  return make_cheat_profile(c, leak_bits, std::vector<Assignment>(std::size_t{1} << leak_bits, a));
}

/// Acceptance probability when P1 plays `replies` (not necessarily best)
/// against P2's list.
inline Value reply_acceptance(const CspInstance& c, const std::vector<Assignment>& as,
                              const std::vector<ProverOneReply>& replies) {
  if (replies.size() != c.size()) throw ShapeMismatch("need one P1 reply per constraint");
  std::uint64_t hits = 0;
  for (std::size_t e = 0; e < c.size(); ++e) {
    const auto& r = replies[e];
    if (r.message >= as.size()) throw ShapeMismatch("reply uses a message outside the profile");
    if (!c.allows(e, r.tuple)) continue;
    hits += detail::agreement(c, e, r.tuple, as[r.message].values);
  }
  return Value::from_weights(hits, c.size() * c.arity());
}

/// Exact acceptance probability of the verifier against P2's list and P1's
/// best reply.
inline Value algorithm_one_acceptance(const CspInstance& c, const CheatProfile& profile) {
  detail::check_profile_shape(c, profile.leak_bits, profile.assignments);
  std::uint64_t hits = 0;
  for (std::size_t e = 0; e < c.size(); ++e) {
    std::size_t best = 0;
    for (const auto& a : profile.assignments) best = std::max(best, detail::best_agreement(c, e, a.values));
    hits += best;
  }
  return Value::from_weights(hits, c.size() * c.arity());
}

struct CheatResult {
  Value value;
  CheatProfile profile;
};

/// Optimal cheating against l bits of one-way leakage. Searches every
/// multiset of 2^l assignments (the value ignores their order) in
/// lexicographic order, which also yields the lexicographically smallest
/// optimal list. The budget is charged for all ordered lists,
/// (|Sigma|^n)^(2^l). Workers split the range of the first assignment.
inline CheatResult optimal_cheat(const CspInstance& c, unsigned leak_bits, const SolverOptions& opt = {}) {
  if (leak_bits > kMaxCheatLeakBits) throw InvalidInput("leak bits above " + std::to_string(kMaxCheatLeakBits));
  const std::uint64_t n_assign = saturating_pow(c.alphabet_size(), c.num_vars());
  const std::size_t slots = std::size_t{1} << leak_bits;
  const std::uint64_t count = saturating_pow(n_assign, slots);
  if (count > opt.budget)
    throw BudgetExceeded("optimal cheat: " + (count == kSaturated ? std::string("more than 2^64") : std::to_string(count)) +
                         " P2 profiles exceed budget of " + std::to_string(opt.budget));
  const std::size_t edges = c.size();
  const std::uint64_t perfect = edges * c.arity();

  // Per-assignment best agreement for every constraint. Tabulated only when
  // several slots reuse it; then n_assign^2 <= budget keeps it small.
  std::vector<std::uint8_t> table;
  if (slots > 1) {
    table.resize(n_assign * edges);
    std::vector<std::size_t> values(c.num_vars());
    for (std::uint64_t i = 0; i < n_assign; ++i) {
      decode_mixed(i, c.alphabet_size(), values);
      for (std::size_t e = 0; e < edges; ++e)
        table[i * edges + e] = static_cast<std::uint8_t>(detail::best_agreement(c, e, values));
    }
  }

  struct Partial {
    bool found = false;
    std::uint64_t score = 0;
    std::vector<std::uint64_t> tuple;
  };

  auto search = [&](std::uint64_t first_begin, std::uint64_t first_end) {
    Partial best;
    std::vector<std::uint64_t> cur(slots, 0);
    std::vector<std::size_t> values(c.num_vars());
    std::vector<std::uint8_t> scratch(edges);
    std::vector<std::vector<std::uint8_t>> running(slots, std::vector<std::uint8_t>(edges, 0));
    auto row = [&](std::uint64_t i) -> const std::uint8_t* {
      if (!table.empty()) return &table[i * edges];
      decode_mixed(i, c.alphabet_size(), values);
      for (std::size_t e = 0; e < edges; ++e) scratch[e] = static_cast<std::uint8_t>(detail::best_agreement(c, e, values));
      return scratch.data();
    };
    // running[d] holds the per-constraint max over the first d assignments.
    auto descend = [&](auto&& self, std::size_t depth, std::uint64_t begin, std::uint64_t end) -> bool {
      const auto& prev = running[depth];
      for (std::uint64_t i = begin; i < end; ++i) {
        cur[depth] = i;
        const std::uint8_t* r = row(i);
        if (depth + 1 == slots) {
          std::uint64_t s = 0;
          for (std::size_t e = 0; e < edges; ++e) s += std::max(prev[e], r[e]);
          if (!best.found || s > best.score) {
            best = {true, s, cur};
            if (s == perfect) return true;
          }
        } else {
          auto& next = running[depth + 1];
          for (std::size_t e = 0; e < edges; ++e) next[e] = std::max(prev[e], r[e]);
          if (self(self, depth + 1, i, n_assign)) return true;
        }
      }
      return false;
    };
    descend(descend, 0, first_begin, first_end);
    return best;
  };

  Partial best;
  const unsigned workers = std::max(1u, opt.workers);
  if (workers == 1 || n_assign < 2 * static_cast<std::uint64_t>(workers)) {
    best = search(0, n_assign);
  } else {
    std::vector<Partial> parts(workers);
    std::vector<std::thread> threads;
    const std::uint64_t step = n_assign / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * step;
      const std::uint64_t end = (w + 1 == workers) ? n_assign : begin + step;
      threads.emplace_back([&, w, begin, end] { parts[w] = search(begin, end); });
    }
    for (auto& t : threads) t.join();
    for (auto& p : parts)
      if (p.found && (!best.found || p.score > best.score)) best = std::move(p);
  }

  std::vector<Assignment> as(slots);
  for (std::size_t m = 0; m < slots; ++m) {
    as[m].values.resize(c.num_vars());
    decode_mixed(best.tuple[m], c.alphabet_size(), as[m].values);
  }
  auto profile = make_cheat_profile(c, leak_bits, std::move(as));
  return {Value::from_weights(best.score, perfect), std::move(profile)};
}

/// 1 - 1/(2k): the acceptance ceiling for any cheat when no assignment
/// satisfies more than a 2^-(l+1) fraction of constraints.
inline Rational cheat_soundness_bound(std::size_t arity) { return Rational(1) - Rational(1) / Rational(2 * arity); }

/// Whether val <= 2^-(l+1).
inline bool low_value_promise(const Value& val, unsigned leak_bits) {
  return val.exact() <= Rational(1) / pow2(leak_bits + 1);
}

}  // namespace leakmip
