#include <catch2/catch_amalgamated.hpp>

#include "leakmip/csp_io.hpp"
#include "leakmip/generator.hpp"
#include "leakmip/leakage.hpp"
#include "leakmip/one_way_mip.hpp"
#include "leakmip/pcp_games.hpp"
#include "oracles.hpp"

using namespace leakmip;

namespace {

Rational frac(int p, int q) { return Rational(p) / q; }

/// Cheat optimum by enumerating every ordered P2 list and every P1 choice
/// of (message, tuple) per constraint, unsatisfying tuples included.
Rational naive_cheat_value(const CspInstance& c, unsigned leak_bits) {
  const std::size_t slots = std::size_t{1} << leak_bits;
  const std::size_t k = c.arity(), sigma = c.alphabet_size();
  std::size_t tuples = 1;
  for (std::size_t i = 0; i < k; ++i) tuples *= sigma;
  std::size_t best = 0;
  oracle::for_each_table(slots * c.num_vars(), sigma, [&](const std::vector<std::size_t>& p2) {
    oracle::for_each_table(c.size(), slots * tuples, [&](const std::vector<std::size_t>& p1) {
      std::size_t hits = 0;
      for (std::size_t e = 0; e < c.size(); ++e) {
        const std::size_t m = p1[e] / tuples;
        std::vector<std::size_t> sig(k);
        std::size_t code = p1[e] % tuples;
        for (std::size_t i = k; i-- > 0;) {
          sig[i] = code % sigma;
          code /= sigma;
        }
        // The verifier checks sigma itself against the allowed list, so with a
        // repeated scope variable P1 may answer a tuple no assignment induces.
        bool allowed = false;
        for (auto t : c.constraints()[e].allowed) allowed |= c.decode(t) == sig;
        if (!allowed) continue;
        const auto& scope = c.constraints()[e].scope;
        for (std::size_t i = 0; i < k; ++i) hits += sig[i] == p2[m * c.num_vars() + scope[i]];
      }
      best = std::max(best, hits);
    });
  });
  return Rational(best) / Rational(c.size() * k);
}

std::uint64_t naive_cheat_size(const CspInstance& c, unsigned leak_bits) {
  const std::uint64_t slots = std::uint64_t{1} << leak_bits;
  return saturating_mul(saturating_pow(c.alphabet_size(), c.num_vars() * slots),
                        saturating_pow(slots * c.tuple_count(), c.size()));
}

CspInstance planted(SplitMix64& rng, std::size_t n, std::size_t sigma, std::size_t k, std::size_t m) {
  std::vector<std::size_t> plant(n);
  for (auto& v : plant) v = rng.below(sigma);
  std::vector<Constraint> cons(m);
  for (auto& con : cons) {
    con.scope.resize(k);
    for (auto& v : con.scope) v = rng.below(n);
    std::uint64_t code = 0;
    for (auto v : con.scope) code = code * sigma + plant[v];
    con.allowed = {code, rng.below(saturating_pow(sigma, k))};
  }
  return CspInstance(n, sigma, k, std::move(cons));
}

CspInstance random_small(SplitMix64& rng) {
  InstanceSpec spec{2 + rng.below(3), 2, 1 + rng.below(3), 1 + rng.below(4), 0, 0};
  spec.max_tuples = 1 + rng.below(spec.arity == 1 ? 2 : 4);
  return random_csp(rng, spec);
}

}  // namespace

TEST_CASE("honest provers are always accepted on satisfiable instances", "[mip]") {
  SplitMix64 rng(1);
  for (int i = 0; i < 100; ++i) {
    auto c = planted(rng, 2 + rng.below(5), 2 + rng.below(2), 1 + rng.below(3), 1 + rng.below(8));
    auto sol = csp_value_exact(c);
    REQUIRE(sol.value.exact() == 1);
    for (unsigned l = 0; l <= 2; ++l) {
      auto p = honest_profile(c, l, sol.witness);
      CHECK(algorithm_one_acceptance(c, p).exact() == 1);
      CHECK(reply_acceptance(c, p.assignments, p.replies).exact() == 1);
    }
  }
}

TEST_CASE("a constraint both assignments violate contributes at most one half", "[mip]") {
  auto c = load_csp("csp 2 2 2\ncon 0 1 : 01 10\n");
  std::vector<Assignment> as{{{1, 1}}, {{0, 0}}};
  auto p = make_cheat_profile(c, 1, as);
  CHECK(algorithm_one_acceptance(c, p).exact() == frac(1, 2));
  CHECK(p.replies[0] == ProverOneReply{0, 1, 1, true});

  auto one_sided = load_csp("csp 2 2 2\ncon 0 1 : 00\n");
  CHECK(algorithm_one_acceptance(one_sided, make_cheat_profile(one_sided, 1, {{{1, 1}}, {{1, 1}}})).exact() == 0);
}

TEST_CASE("empty allowed sets are never accepted", "[mip]") {
  auto c = load_csp("csp 3 2 2\ncon 0 1 :\ncon 1 2 :\n");
  for (unsigned l = 0; l <= 2; ++l) {
    CHECK(algorithm_one_acceptance(c, honest_profile(c, l, Assignment{{0, 1, 0}})).exact() == 0);
    auto r = optimal_cheat(c, l);
    CHECK(r.value.exact() == 0);
    CHECK_FALSE(r.profile.replies[0].satisfiable);
  }
}

TEST_CASE("malformed profiles are rejected", "[mip]") {
  auto c = load_csp("csp 2 2 2\ncon 0 1 : 01\n");
  CHECK_THROWS_AS(make_cheat_profile(c, 1, {{{0, 0}}}), ShapeMismatch);
  CHECK_THROWS_AS(make_cheat_profile(c, 0, {{{0, 0, 0}}}), ShapeMismatch);
  CHECK_THROWS_AS(make_cheat_profile(c, 0, {{{0, 2}}}), InvalidInput);
  CheatProfile bad{2, {{{0, 0}}}, {}};
  CHECK_THROWS_AS(algorithm_one_acceptance(c, bad), ShapeMismatch);
  CHECK_THROWS_AS(reply_acceptance(c, {{{0, 0}}}, {ProverOneReply{1, 0, 0, true}}), ShapeMismatch);
  CHECK_THROWS_AS(reply_acceptance(c, {{{0, 0}}}, {}), ShapeMismatch);
  CHECK_THROWS_AS(optimal_cheat(c, kMaxCheatLeakBits + 1), InvalidInput);
}

TEST_CASE("optimal cheat on satisfiable instances is 1", "[mip]") {
  SplitMix64 rng(2);
  for (int i = 0; i < 30; ++i) {
    auto c = planted(rng, 2 + rng.below(3), 2, 2, 1 + rng.below(6));
    for (unsigned l = 0; l <= 2; ++l) CHECK(optimal_cheat(c, l).value.exact() == 1);
  }
}

TEST_CASE("optimal cheat without leakage is the best single assignment", "[mip]") {
  SplitMix64 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto c = random_small(rng);
    std::size_t best = 0;
    oracle::for_each_table(c.num_vars(), c.alphabet_size(), [&](const std::vector<std::size_t>& a) {
      std::size_t hits = 0;
      for (std::size_t e = 0; e < c.size(); ++e) {
        std::size_t top = 0;
        for (auto code : c.constraints()[e].allowed) {
          auto sig = c.decode(code);
          std::size_t agree = 0;
          for (std::size_t j = 0; j < c.arity(); ++j) agree += sig[j] == a[c.constraints()[e].scope[j]];
          top = std::max(top, agree);
        }
        hits += top;
      }
      best = std::max(best, hits);
    });
    CHECK(optimal_cheat(c, 0).value.exact() == Rational(best) / Rational(c.size() * c.arity()));
  }
}

TEST_CASE("optimal cheat matches naive prover enumeration", "[mip][property]") {
  SplitMix64 rng(4);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 120; ++i) {
    auto c = random_small(rng);
    for (unsigned l = 0; l <= 1; ++l) {
      if (naive_cheat_size(c, l) > 100000) continue;
      ++checked;
      auto r = optimal_cheat(c, l);
      REQUIRE(r.value.exact() == naive_cheat_value(c, l));
      CHECK(algorithm_one_acceptance(c, r.profile) == r.value);
      CHECK(reply_acceptance(c, r.profile.assignments, r.profile.replies) == r.value);
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("optimal cheat picks the lexicographically first optimal list", "[mip]") {
  SplitMix64 rng(5);
  for (int i = 0; i < 40; ++i) {
    auto c = random_small(rng);
    if (saturating_pow(c.alphabet_size(), 2 * c.num_vars()) > 5000) continue;
    auto r = optimal_cheat(c, 1);
    // Ordered scan over all lists; the optimum of a list ignores its order.
    const std::uint64_t n = saturating_pow(c.alphabet_size(), c.num_vars());
    std::vector<Assignment> first;
    Rational best = -1;
    for (std::uint64_t i0 = 0; i0 < n; ++i0)
      for (std::uint64_t i1 = 0; i1 < n; ++i1) {
        std::vector<Assignment> as(2, Assignment{std::vector<std::size_t>(c.num_vars())});
        decode_mixed(i0, c.alphabet_size(), as[0].values);
        decode_mixed(i1, c.alphabet_size(), as[1].values);
        auto v = algorithm_one_acceptance(c, make_cheat_profile(c, 1, as)).exact();
        if (v > best) {
          best = v;
          first = as;
        }
      }
    CHECK(r.value.exact() == best);
    CHECK(r.profile.assignments == first);
  }
}

TEST_CASE("optimal cheat is monotone in leakage and dominates the value", "[mip][property]") {
  SplitMix64 rng(6);
  for (int i = 0; i < 60; ++i) {
    InstanceSpec spec{2 + rng.below(3), 2, 2, 2 + rng.below(6), 1, 2};
    auto c = random_csp(rng, spec);
    const auto val = csp_value_exact(c).value;
    Value prev = optimal_cheat(c, 0).value;
    CHECK(prev >= val);
    for (unsigned l = 1; l <= 2; ++l) {
      auto cur = optimal_cheat(c, l).value;
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("best reply beats any other reply", "[mip][property]") {
  SplitMix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto c = random_small(rng);
    std::vector<Assignment> as(2, Assignment{std::vector<std::size_t>(c.num_vars())});
    for (auto& a : as)
      for (auto& v : a.values) v = rng.below(c.alphabet_size());
    auto p = make_cheat_profile(c, 1, as);
    const auto best = algorithm_one_acceptance(c, p);
    for (int j = 0; j < 20; ++j) {
      std::vector<ProverOneReply> alt(c.size());
      for (auto& r : alt) {
        r.message = rng.below(2);
        r.tuple = rng.below(c.tuple_count());
      }
      CHECK(reply_acceptance(c, as, alt) <= best);
    }
  }
}

TEST_CASE("optimal cheat respects budget and worker count", "[mip]") {
  auto c = load_csp("csp 4 2 2\ncon 0 1 : 01\ncon 1 2 : 10\ncon 2 3 : 11\ncon 3 0 : 00\n");
  CHECK_THROWS_AS(optimal_cheat(c, 1, SolverOptions{255, 1}), BudgetExceeded);
  CHECK_NOTHROW(optimal_cheat(c, 1, SolverOptions{256, 1}));
  CHECK_THROWS_AS(optimal_cheat(c, 5), BudgetExceeded);

  SplitMix64 rng(8);
  for (int i = 0; i < 20; ++i) {
    auto r = random_csp(rng, InstanceSpec{5, 2, 2, 12, 1, 1});
    for (unsigned l = 0; l <= 1; ++l) {
      auto a = optimal_cheat(r, l, SolverOptions{kDefaultStrategyBudget, 1});
      auto b = optimal_cheat(r, l, SolverOptions{kDefaultStrategyBudget, 3});
      CHECK(a.value == b.value);
      CHECK(a.profile.assignments == b.profile.assignments);
    }
  }
}

TEST_CASE("generator returns certified low-value instances", "[mip][generator]") {
  SearchSpec any{InstanceSpec{4, 2, 2, 5, 1, 2}, 1, 9};
  auto first = find_low_value_instance(any);
  CHECK(first.attempts == 1);
  SplitMix64 rng(derive_seed(9, 0));
  CHECK(first.instance == random_csp(rng, any.instance));

  SearchSpec low{InstanceSpec{8, 2, 2, 32, 0, 1}, frac(1, 4), 2024};
  auto r = find_low_value_instance(low);
  CHECK(r.value.exact() <= frac(1, 4));
  CHECK(r.value.exact() == oracle::naive_csp_value(r.instance));
  CHECK(r.instance.value_of(r.witness) == r.value);
  auto again = find_low_value_instance(low);
  CHECK(again.instance == r.instance);
  CHECK(again.attempts == r.attempts);

  SearchSpec tautology{InstanceSpec{3, 2, 2, 4, 4, 4}, 0, 1, 25};
  CHECK_THROWS_AS(find_low_value_instance(tautology), GeneratorExhausted);
  CHECK_THROWS_AS(find_low_value_instance(SearchSpec{InstanceSpec{30, 2, 2, 4, 1, 1}, 1, 1}), BudgetExceeded);
  CHECK_THROWS_AS(find_low_value_instance(SearchSpec{InstanceSpec{3, 2, 2, 4, 1, 1}, 2, 1}), InvalidInput);
}

TEST_CASE("low-value promise caps the cheat at 1 - 1/2k", "[mip][property]") {
  struct Family {
    InstanceSpec spec;
    unsigned leak;
  };
  const Family families[] = {
      {{6, 3, 2, 32, 1, 1}, 1},
      {{7, 2, 3, 32, 1, 1}, 1},
      {{4, 2, 2, 24, 0, 1}, 2},
  };
  for (const auto& f : families) {
    const Rational target = Rational(1) / pow2(f.leak + 1);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto r = find_low_value_instance(SearchSpec{f.spec, target, seed, 2000});
      REQUIRE(low_value_promise(r.value, f.leak));
      auto cheat = optimal_cheat(r.instance, f.leak);
      CHECK(cheat.value.exact() <= cheat_soundness_bound(f.spec.arity));
    }
  }
}

TEST_CASE("leaky edge game value is at most 2^l times the cover value", "[mip][games][property]") {
  SplitMix64 rng(10);
  for (int i = 0; i < 40; ++i) {
    LabelCoverSpec spec{1 + rng.below(3), 1 + rng.below(2), 2, 2, 1};
    spec.num_edges = 1 + rng.below(spec.left * spec.right);
    auto lc = random_label_cover(rng, spec);
    const auto s = oracle::naive_label_cover_value(lc);
    const auto g = edge_game(lc);
    for (unsigned l = 0; l <= 1; ++l) {
      auto v = leaky_value_exact(g, LeakageModel::one_way_ab(l)).value.exact();
      CHECK(v <= std::min(Rational(1), pow2(l) * s));
    }
  }
}
