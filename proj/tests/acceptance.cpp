// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "leakmip/behaviors.hpp"
#include "leakmip/csp_io.hpp"
#include "leakmip/generator.hpp"
#include "leakmip/pcp_games.hpp"
#include "leakmip/random_game.hpp"
#include "leakmip/repetition.hpp"
#include "oracles.hpp"

using namespace leakmip;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failures; the first few are kept for the report line.
struct Checker {
  Outcome out;
  int failures = 0;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    out.pass = false;
    if (++failures <= 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
  }
};

std::string fixture(const std::string& name) { return std::string(LEAKMIP_FIXTURE_DIR) + "/" + name; }

std::string rat(const Rational& r) { return to_fraction_string(r); }

/// Small random games shared by criteria 3 and 4.
std::vector<Game> shared_games() {
  std::vector<Game> games{chsh_game()};
  SplitMix64 rng(2024);
  while (games.size() < 6) games.push_back(random_game(rng, RandomGameShape{2, 3, 4, 0.5}));
  return games;
}

// 1 --------------------------------------------------------------------------
Outcome exact_values() {
  Checker c;
  const auto chsh = chsh_game();
  const auto v1 = classical_value(chsh).value.exact();
  c.require(v1 == Rational(3, 4), "w(CHSH) = " + rat(v1));
  c.require(oracle::naive_classical_value(chsh) == v1, "naive oracle disagrees on CHSH");
  const auto rg = repeat_game(chsh, 2);
  const auto v2 = repeated_exact_value(rg).value.exact();
  c.require(v2 == Rational(10, 16), "w(CHSH^2) = " + rat(v2));
  c.require(oracle::naive_classical_value(materialize(rg)) == v2, "naive oracle disagrees on CHSH^2 table");
  c.require(oracle::naive_classical_value(rg) == v2, "naive oracle disagrees on implicit CHSH^2");
  c.out.detail = c.out.pass ? "w(CHSH) = " + rat(v1) + ", w(CHSH^2) = " + rat(v2) + ", naive oracles agree"
                            : c.out.detail;
  return c.out;
}

// 2 --------------------------------------------------------------------------
Outcome repetition_sandwich() {
  Checker c;
  SplitMix64 rng(77);
  // The repeated solver enumerates the smaller prover's maps, (A^2)^(X^2)
  // or (B^2)^(Y^2); draws where both exceed 4^9 are skipped.
  const std::uint64_t side_cap = 262144;
  const SolverOptions unlimited{kSaturated, 1};
  int tested = 0, drawn = 0, both_three = 0;
  while (tested < 24) {
    ++drawn;
    auto g = random_game(rng, RandomGameShape{1, 3, 4, 0.5});
    const auto alice = saturating_pow(g.a_size() * g.a_size(), g.x_size() * g.x_size());
    const auto bob = saturating_pow(g.b_size() * g.b_size(), g.y_size() * g.y_size());
    if (std::min(alice, bob) > side_cap) continue;
    ++tested;
    both_three += (g.x_size() == 3 || g.y_size() == 3) && (g.a_size() == 3 || g.b_size() == 3);
    const auto w = classical_value(g).value.exact();
    const auto w2 = repeated_exact_value(repeat_game(g, 2), unlimited).value.exact();
    c.require(w * w <= w2, "w^2 > w(G^2) on draw " + std::to_string(drawn));
    c.require(w2 <= w, "w(G^2) > w on draw " + std::to_string(drawn));
  }
  if (c.out.pass)
    c.out.detail = std::to_string(tested) + " games (" + std::to_string(both_three) +
                   " with a size-3 question set and a size-3 answer set), " + std::to_string(drawn - tested) +
                   " oversized draws skipped";
  return c.out;
}

// 3 --------------------------------------------------------------------------
Outcome guess_and_abort() {
  Checker c;
  std::uint64_t strategies = 0;
  for (const auto& g : shared_games()) {
    const auto m = LeakageModel::one_way_ab(1);
    for_each_leaky_strategy(g, m, [&](const LeakyStrategy& s) {
      ++strategies;
      const auto p = leaky_strategy_value(g, m, s).exact();
      const auto q = guess_and_abort_value(g, m, s).exact();
      c.require(q == p / 2, g.name() + ": transformed " + rat(q) + " vs leaky " + rat(p));
    });
  }
  if (c.out.pass) c.out.detail = std::to_string(strategies) + " strategies over 6 games, all exactly halved";
  return c.out;
}

// 4 --------------------------------------------------------------------------
Outcome inflation_bound() {
  Checker c;
  int checks = 0;
  for (const auto& g : shared_games()) {
    const auto w = classical_value(g).value.exact();
    for (unsigned l = 0; l <= 2; ++l) {
      const auto v = leaky_value_exact(g, LeakageModel::one_way_ab(l)).value.exact();
      const Rational cap = std::min(Rational(1), pow2(l) * w);
      c.require(v <= cap, g.name() + " l=" + std::to_string(l) + ": " + rat(v) + " > " + rat(cap));
      ++checks;
    }
  }
  if (c.out.pass) c.out.detail = std::to_string(checks) + " (game, l) pairs within min(1, 2^l w)";
  return c.out;
}

// 5 --------------------------------------------------------------------------
Outcome csp_soundness() {
  Checker c;
  struct Family {
    InstanceSpec spec;
    int count;
  };
  const Family families[] = {{{6, 3, 2, 32, 1, 1}, 12}, {{7, 2, 3, 32, 1, 1}, 4}};
  std::string detail;
  for (const auto& f : families) {
    const Rational bound = cheat_soundness_bound(f.spec.arity);
    Rational worst = 0;
    std::vector<CspInstance> seen;
    for (std::uint64_t seed = 0; static_cast<int>(seen.size()) < f.count; ++seed) {
      auto r = find_low_value_instance(SearchSpec{f.spec, Rational(1, 4), seed, 10000});
      if (std::find(seen.begin(), seen.end(), r.instance) != seen.end()) continue;
      c.require(oracle::naive_csp_value(r.instance) == r.value.exact(), "certified value disagrees with oracle");
      c.require(r.value.exact() <= Rational(1, 4), "certificate above 1/4");
      const auto v = optimal_cheat(r.instance, 1).value.exact();
      c.require(v <= bound, "k=" + std::to_string(f.spec.arity) + " cheat " + rat(v) + " > " + rat(bound));
      worst = std::max(worst, v);
      seen.push_back(std::move(r.instance));
    }
    detail += (detail.empty() ? "" : ", ") + std::to_string(seen.size()) + " instances k=" +
              std::to_string(f.spec.arity) + " max cheat " + rat(worst) + " <= " + rat(bound);
  }
  if (c.out.pass) c.out.detail = detail;
  return c.out;
}

// 6 --------------------------------------------------------------------------
Outcome completeness() {
  Checker c;
  const std::uint64_t sessions = 10000;
  std::string detail;
  for (const char* name : {"triangle.csp"}) {
    ConstraintProtocol proto(load_csp_file(fixture(name)));
    auto sol = csp_value_exact(proto.instance());
    c.require(sol.value.exact() == 1, std::string(name) + " is not satisfiable");
    for (unsigned l = 0; l <= 1; ++l) {
      auto r = estimate_acceptance(proto, honest_csp_provers(proto.instance(), sol.witness),
                                   LeakageModel::one_way_ab(l), sessions, 600 + l);
      c.require(r.accepted == sessions, std::string(name) + ": " + std::to_string(r.accepted) + " accepted");
    }
  }
  // Planted satisfiable instances for the constraint protocol.
  SplitMix64 rng(6);
  for (int i = 0; i < 4; ++i) {
    std::vector<std::size_t> plant(6);
    for (auto& v : plant) v = rng.below(3);
    std::vector<Constraint> cons(12);
    for (auto& con : cons) {
      con.scope = {rng.below(6), rng.below(6), rng.below(6)};
      con.allowed = {(plant[con.scope[0]] * 3 + plant[con.scope[1]]) * 3 + plant[con.scope[2]], rng.below(27)};
    }
    CspInstance inst(6, 3, 3, cons);
    ConstraintProtocol proto(inst);
    auto r = estimate_acceptance(proto, honest_csp_provers(inst, Assignment{plant}), LeakageModel::one_way_ab(1),
                                 sessions, 700 + i);
    c.require(r.accepted == sessions, "planted k=3 instance: " + std::to_string(r.accepted) + " accepted");
  }
  auto lc = load_label_cover_file(fixture("satisfiable.labelcover"));
  auto best = csp_value_exact(lc.to_csp()).witness.values;
  std::vector<std::size_t> left(best.begin(), best.begin() + 2), right(best.begin() + 2, best.end());
  c.require(lc.value_of(left, right).exact() == 1, "label cover fixture not satisfied");
  GameProtocol cg(consistency_game(lc));
  auto r = estimate_acceptance(cg, strategy_provers(consistency_strategy(lc, left, right)), LeakageModel::none(),
                               sessions, 800);
  c.require(r.accepted == sessions, "consistency game: " + std::to_string(r.accepted) + " accepted");
  if (c.out.pass) c.out.detail = "constraint protocol (6 runs) and consistency game: 10000/10000 accepted each";
  return c.out;
}

// 7 --------------------------------------------------------------------------
Outcome conversions() {
  Checker c;
  SplitMix64 rng(31);
  int n = 0, strict = 0;
  while (n < 16) {
    LabelCoverSpec spec{2 + rng.below(2), 2 + rng.below(2), 2 + rng.below(2), 2, 1};
    spec.num_edges = 2 + rng.below(spec.left * spec.right - 1);
    auto lc = random_label_cover(rng, spec);
    ++n;
    const auto val = oracle::naive_label_cover_value(lc);
    strict += val < 1;
    const auto e = classical_value(edge_game(lc)).value.exact();
    const auto k = classical_value(consistency_game(lc)).value.exact();
    c.require(e == val, "edge game " + rat(e) + " vs val " + rat(val));
    c.require(k <= (1 + val) / 2, "consistency game " + rat(k) + " > (1+val)/2 = " + rat((1 + val) / 2));
  }
  for (const char* name : {"two_thirds.labelcover", "satisfiable.labelcover"}) {
    auto lc = load_label_cover_file(fixture(name));
    const auto val = oracle::naive_label_cover_value(lc);
    strict += val < 1;
    c.require(classical_value(edge_game(lc)).value.exact() == val, std::string(name) + " edge game");
    c.require(classical_value(consistency_game(lc)).value.exact() <= (1 + val) / 2,
              std::string(name) + " consistency game");
    ++n;
  }
  if (c.out.pass)
    c.out.detail = std::to_string(n) + " label covers (" + std::to_string(strict) + " with val < 1)";
  return c.out;
}

// 8 --------------------------------------------------------------------------
Outcome harness_statistics() {
  Checker c;
  struct Case {
    std::string name;
    std::unique_ptr<Protocol> proto;
    Provers provers;
    LeakageModel model;
    double exact;
  };
  std::vector<Case> cases;
  {
    auto g = chsh_game();
    auto w = classical_value(g);
    cases.push_back({"chsh-optimal", std::make_unique<GameProtocol>(g), strategy_provers(w.witness),
                     LeakageModel::none(), w.value.to_double()});
  }
  {
    auto g = chsh_game();
    const StrategyPair s1{{0, 0}, {0, 0}}, s2{{0, 1}, {0, 1}};
    const double exact = ((strategy_value(g, s1).exact() + strategy_value(g, s2).exact()) / 2).convert_to<double>();
    cases.push_back({"chsh-coin-mixture", std::make_unique<GameProtocol>(g),
                     coin_mixture(strategy_provers(s1), strategy_provers(s2)), LeakageModel::none(), exact});
  }
  {
    SplitMix64 rng(404);
    auto g = random_game(rng, RandomGameShape{2, 3, 4, 0.5});
    const auto m = LeakageModel::simultaneous(1, 1);
    LeakyStrategy s;
    for (std::size_t x = 0; x < g.x_size(); ++x) s.alice_msg.push_back(rng.below(2));
    for (std::size_t y = 0; y < g.y_size(); ++y) s.bob_msg.push_back(rng.below(2));
    for (std::size_t i = 0; i < 2 * g.x_size(); ++i) s.alice_ans.push_back(rng.below(g.a_size()));
    for (std::size_t i = 0; i < 2 * g.y_size(); ++i) s.bob_ans.push_back(rng.below(g.b_size()));
    const double exact = leaky_strategy_value(g, m, s).to_double();
    cases.push_back({"random-simultaneous-leaky", std::make_unique<GameProtocol>(g), leaky_provers(s, m), m, exact});
  }
  {
    auto inst = load_csp_file(fixture("low_value.csp"));
    auto r = optimal_cheat(inst, 1);
    cases.push_back({"csp-optimal-cheat", std::make_unique<ConstraintProtocol>(inst), cheat_provers(inst, r.profile),
                     LeakageModel::one_way_ab(1), r.value.to_double()});
  }
  {
    auto lc = load_label_cover_file(fixture("two_thirds.labelcover"));
    auto g = consistency_game(lc);
    const std::vector<std::size_t> left{0, 1, 1}, right{1};
    auto s = consistency_strategy(lc, left, right);
    cases.push_back({"consistency-labeling", std::make_unique<GameProtocol>(g), strategy_provers(s),
                     LeakageModel::none(), strategy_value(g, s).to_double()});
  }
  std::string detail;
  for (const auto& k : cases) {
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      auto r = estimate_acceptance(*k.proto, k.provers, k.model, 100000, derive_seed(0xacce97, seed));
      inside += std::abs(r.estimate - k.exact) <= 4 * r.half_width;
    }
    c.require(inside >= 99, k.name + " only " + std::to_string(inside) + "/100");
    detail += (detail.empty() ? "" : ", ") + k.name + " " + std::to_string(inside) + "/100";
  }
  if (c.out.pass) c.out.detail = detail;
  return c.out;
}

// 9 --------------------------------------------------------------------------
Outcome meter_soundness() {
  Checker c;
  // Predicate is always true, so rejection can only come from the meter.
  GameProtocol proto(constant_game("ones", 3, 3, 2, 2, true));
  struct Attack {
    std::string name;
    /// Payload for a given (budget, question, coins).
    std::function<BitString(unsigned, std::size_t, std::uint64_t)> payload;
    bool always_overflows;
  };
  const std::vector<Attack> attacks{
      {"one-extra-bit", [](unsigned b, std::size_t, std::uint64_t) { return BitString(0, b + 1); }, true},
      {"all-ones-extra", [](unsigned b, std::size_t, std::uint64_t) {
         return BitString((std::uint64_t{1} << (b + 1)) - 1, b + 1);
       }, true},
      {"zero-padding", [](unsigned b, std::size_t q, std::uint64_t) { return BitString(q & 1, b + 8); }, true},
      {"max-width", [](unsigned, std::size_t, std::uint64_t) { return BitString(~std::uint64_t{0}, 64); }, true},
      {"random-length", [](unsigned b, std::size_t q, std::uint64_t coins) {
         const auto len = static_cast<std::size_t>(mix64(coins + q) % (b + 4));
         return BitString(len == 0 ? 0 : mix64(coins ^ q) >> (64 - len), len);
       }, false},
      {"exact-budget", [](unsigned b, std::size_t q, std::uint64_t) {
         return BitString(b == 0 ? 0 : q % (std::uint64_t{1} << b), b);
       }, false},
  };
  const LeakageModel models[] = {LeakageModel::one_way_ab(0), LeakageModel::one_way_ab(1),
                                 LeakageModel::one_way_ab(3), LeakageModel::one_way_ba(2),
                                 LeakageModel::simultaneous(1, 2), LeakageModel::simultaneous(0, 0)};
  std::uint64_t sessions = 0, attempts = 0, flagged = 0;
  for (const auto& a : attacks) {
    for (const auto& m : models) {
      std::size_t max_received[2] = {0, 0};
      auto make = [&](Role role, unsigned budget, std::size_t& seen) {
        ProverBehavior p;
        p.role = role;
        p.leak = [&a, budget](std::size_t q, std::uint64_t coins) { return a.payload(budget, q, coins); };
        p.answer = [&seen](std::size_t, const BitString& in, std::uint64_t) {
          seen = std::max(seen, in.length());
          return std::size_t{0};
        };
        return p;
      };
      // Both provers attack; under one-way models the silent direction has
      // budget zero.
      Provers provers{make(Role::First, m.bits_ab, max_received[1]), make(Role::Second, m.bits_ba, max_received[0])};
      for (std::uint64_t s = 0; s < 2000; ++s) {
        auto t = run_session(proto, provers, m, derive_seed(0x9e7e, s));
        ++sessions;
        unsigned spent[2] = {0, 0};
        bool attempted = false;
        for (const auto& e : t.leakage) {
          const int d = e.direction == Direction::AB ? 0 : 1;
          const unsigned budget = d == 0 ? m.bits_ab : m.bits_ba;
          const bool over = spent[d] + e.payload.length() > budget;
          if (over) {
            ++attempts;
            attempted = true;
            flagged += !e.delivered;
            c.require(!e.delivered, a.name + ": overflowing payload delivered");
          } else {
            c.require(e.delivered, a.name + ": in-budget payload dropped");
            spent[d] += static_cast<unsigned>(e.payload.length());
          }
        }
        c.require(spent[0] <= m.bits_ab && spent[1] <= m.bits_ba, a.name + ": budget exceeded");
        c.require(t.overflow == attempted, a.name + ": overflow flag mismatch");
        c.require(t.accepted == !attempted, a.name + ": verdict ignores overflow");
        c.require(replay_verify(t, proto), a.name + ": replay failed");
        if (a.always_overflows) c.require(attempted, a.name + ": expected an overflow attempt");
      }
      c.require(max_received[0] <= m.bits_ab, a.name + ": P2 received more than " + std::to_string(m.bits_ab) + " bits");
      c.require(max_received[1] <= m.bits_ba, a.name + ": P1 received more than " + std::to_string(m.bits_ba) + " bits");
    }
  }
  if (c.out.pass)
    c.out.detail = std::to_string(sessions) + " sessions, " + std::to_string(attempts) + " overflow attempts, " +
                   std::to_string(flagged) + " flagged and rejected";
  return c.out;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "exact values", 10, exact_values},
      {2, "repetition sandwich", 300, repetition_sandwich},
      {3, "guess-and-abort identity", 300, guess_and_abort},
      {4, "leakage inflation bound", 300, inflation_bound},
      {5, "one-way verifier soundness", 1800, csp_soundness},
      {6, "perfect completeness", 300, completeness},
      {7, "conversion consistency", 300, conversions},
      {8, "harness statistics", 1800, harness_statistics},
      {9, "meter soundness", 300, meter_soundness},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + std::to_string(int(cr.limit_seconds)) + " s limit)";
    }
    failed += !o.pass;
    std::printf("criterion %d %s: %s (%.2fs) %s\n", cr.id, o.pass ? "PASS" : "FAIL", cr.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
