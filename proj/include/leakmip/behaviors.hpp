#pragma once

// Ready-made prover behaviors for the harness.

#include "leakmip/harness.hpp"
#include "leakmip/one_way_mip.hpp"

namespace leakmip {

inline ProverBehavior silent_prover(Role role, std::vector<std::size_t> answers) {
  ProverBehavior p;
  p.role = role;
  p.leak = [](std::size_t, std::uint64_t) { return BitString(); };
  p.answer = [answers = std::move(answers)](std::size_t q, const BitString&, std::uint64_t) {
    if (q >= answers.size()) throw InvalidInput("question outside the strategy table");
    return answers[q];
  };
  return p;
}

/// Deterministic no-communication strategy.
inline Provers strategy_provers(const StrategyPair& s) {
  return {silent_prover(Role::First, s.alice), silent_prover(Role::Second, s.bob)};
}

/// Plays a leaky strategy table under `model`: each prover leaks its
/// message and answers from the row selected by what it received.
inline Provers leaky_provers(const LeakyStrategy& s, const LeakageModel& model) {
  model.validate();
  auto make = [](Role role, std::vector<std::size_t> msg, unsigned out_bits, std::vector<std::size_t> ans,
                 std::size_t in_messages) {
    ProverBehavior p;
    p.role = role;
    p.leak = [msg = std::move(msg), out_bits](std::size_t q, std::uint64_t) {
      if (q >= msg.size()) throw InvalidInput("question outside the strategy table");
      return BitString(msg[q], out_bits);
    };
    p.answer = [ans = std::move(ans), in_messages](std::size_t q, const BitString& in, std::uint64_t) {
      if (in.value() >= in_messages || q * in_messages + in.value() >= ans.size())
        throw InvalidInput("received message outside the strategy table");
      return ans[q * in_messages + in.value()];
    };
    return p;
  };
  return {make(Role::First, s.alice_msg, model.bits_ab, s.alice_ans, model.messages_ba()),
          make(Role::Second, s.bob_msg, model.bits_ba, s.bob_ans, model.messages_ab())};
}

/// Both provers follow one assignment in the constraint protocol.
inline Provers honest_csp_provers(const CspInstance& c, const Assignment& a) {
  c.check(a);
  std::vector<std::size_t> codes(c.size());
  for (std::size_t e = 0; e < c.size(); ++e) codes[e] = c.scope_code(e, a.values);
  return {silent_prover(Role::First, std::move(codes)), silent_prover(Role::Second, a.values)};
}

/// P1 leaks its chosen message index in leak_bits bits and answers its
/// tuple; P2 answers from the assignment the message selects.
inline Provers cheat_provers(const CspInstance& c, const CheatProfile& profile) {
  if (profile.replies.size() != c.size()) throw ShapeMismatch("profile needs one P1 reply per constraint");
  ProverBehavior p1, p2;
  p1.role = Role::First;
  p1.leak = [replies = profile.replies, bits = profile.leak_bits](std::size_t e, std::uint64_t) {
    return BitString(replies.at(e).message, bits);
  };
  p1.answer = [replies = profile.replies](std::size_t e, const BitString&, std::uint64_t) {
    return static_cast<std::size_t>(replies.at(e).tuple);
  };
  p2.role = Role::Second;
  p2.leak = [](std::size_t, std::uint64_t) { return BitString(); };
  p2.answer = [as = profile.assignments](std::size_t u, const BitString& in, std::uint64_t) {
    if (in.value() >= as.size()) throw InvalidInput("received message outside the profile");
    return as[in.value()].values.at(u);
  };
  return {std::move(p1), std::move(p2)};
}

/// Flips the low bit of the shared coins to pick `a` or `b`, then hands the
/// chosen pair fresh coins. Acceptance is the average of the two.
inline Provers coin_mixture(Provers a, Provers b) {
  auto mix = [](ProverBehavior x, ProverBehavior y) {
    ProverBehavior p;
    p.role = x.role;
    p.leak = [lx = x.leak, ly = y.leak](std::size_t q, std::uint64_t coins) {
      return (coins & 1) ? ly(q, mix64(coins)) : lx(q, mix64(coins));
    };
    p.answer = [ax = x.answer, ay = y.answer](std::size_t q, const BitString& in, std::uint64_t coins) {
      return (coins & 1) ? ay(q, in, mix64(coins)) : ax(q, in, mix64(coins));
    };
    return p;
  };
  return {mix(std::move(a.first), std::move(b.first)), mix(std::move(a.second), std::move(b.second))};
}

}  // namespace leakmip
