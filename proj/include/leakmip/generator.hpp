#pragma once

// Seeded random CSP and label cover instances, and a search for instances
// whose exact value is at most a target.
//
// Random model: each constraint draws its k scope variables uniformly with
// replacement, then an allowed-set size uniform in [min_tuples,
// max_tuples], then that many distinct tuples uniformly.

#include <string>

#include "leakmip/csp.hpp"
#include "leakmip/rng.hpp"

namespace leakmip {

struct InstanceSpec {
  std::size_t num_vars = 8;
  std::size_t alphabet = 2;
  std::size_t arity = 2;
  std::size_t num_constraints = 32;
  std::size_t min_tuples = 1;
  std::size_t max_tuples = 1;

  void validate() const {
    if (num_vars == 0 || alphabet == 0 || arity == 0 || num_constraints == 0)
      throw InvalidInput("instance sizes must be at least 1");
    const auto tuples = saturating_pow(alphabet, arity);
    if (tuples > kMaxTupleCount) throw InvalidInput("alphabet^arity too large");
    if (min_tuples > max_tuples || max_tuples > tuples)
      throw InvalidInput("allowed-set sizes must satisfy min <= max <= alphabet^arity");
  }
};

inline CspInstance random_csp(SplitMix64& rng, const InstanceSpec& spec) {
  spec.validate();
  const auto tuples = saturating_pow(spec.alphabet, spec.arity);
  std::vector<Constraint> cons(spec.num_constraints);
  std::vector<std::uint64_t> pool(tuples);
  for (auto& con : cons) {
    con.scope.resize(spec.arity);
    for (auto& v : con.scope) v = rng.below(spec.num_vars);
    const auto size = static_cast<std::size_t>(rng.between(spec.min_tuples, spec.max_tuples));
    // Partial Fisher-Yates over the tuple codes.
    for (std::uint64_t t = 0; t < tuples; ++t) pool[t] = t;
    for (std::size_t i = 0; i < size; ++i) {
      const auto j = i + rng.below(tuples - i);
      std::swap(pool[i], pool[j]);
    }
    con.allowed.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return CspInstance(spec.num_vars, spec.alphabet, spec.arity, std::move(cons));
}

struct SearchSpec {
  InstanceSpec instance;
  Rational target = 1;
  std::uint64_t seed = 0;
  std::size_t attempt_cap = 10000;
  std::uint64_t budget = kDefaultAssignmentBudget;
};

struct LowValueInstance {
  CspInstance instance;
  Value value;
  Assignment witness;
  std::size_t attempts = 0;
};

/// Draws instances from the seeded stream until one has exact value at most
/// the target. Attempt i uses derive_seed(seed, i).
inline LowValueInstance find_low_value_instance(const SearchSpec& s) {
  s.instance.validate();
  if (s.target < 0 || s.target > 1) throw InvalidInput("target value must lie in [0, 1]");
  const auto count = saturating_pow(s.instance.alphabet, s.instance.num_vars);
  if (count > s.budget)
    throw BudgetExceeded("generator: " + std::to_string(count) + " assignments per certification exceed budget of " +
                         std::to_string(s.budget));
  for (std::size_t i = 0; i < s.attempt_cap; ++i) {
    SplitMix64 rng(derive_seed(s.seed, i));
    auto c = random_csp(rng, s.instance);
    auto r = csp_value_exact(c, s.budget);
    if (r.value.exact() <= s.target) return {std::move(c), r.value, std::move(r.witness), i + 1};
  }
  throw GeneratorExhausted("no instance with value <= " + to_fraction_string(s.target) + " within " +
                           std::to_string(s.attempt_cap) + " attempts; relax the parameters");
}

struct LabelCoverSpec {
  std::size_t left = 3;
  std::size_t right = 3;
  std::size_t left_alphabet = 2;
  std::size_t right_alphabet = 2;
  std::size_t num_edges = 4;
};

/// Random label cover with distinct edges and uniform projections.
inline LabelCover random_label_cover(SplitMix64& rng, const LabelCoverSpec& spec) {
  if (spec.left == 0 || spec.right == 0 || spec.left_alphabet == 0 || spec.right_alphabet == 0 || spec.num_edges == 0)
    throw InvalidInput("label cover sizes must be at least 1");
  if (spec.num_edges > spec.left * spec.right) throw InvalidInput("more edges than vertex pairs");
  std::vector<std::uint64_t> pairs(spec.left * spec.right);
  for (std::uint64_t i = 0; i < pairs.size(); ++i) pairs[i] = i;
  for (std::size_t i = 0; i < spec.num_edges; ++i) std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
  std::sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(spec.num_edges));
  std::vector<LabelCoverEdge> edges(spec.num_edges);
  for (std::size_t i = 0; i < spec.num_edges; ++i) {
    edges[i].left = pairs[i] / spec.right;
    edges[i].right = pairs[i] % spec.right;
    edges[i].projection.resize(spec.left_alphabet);
    for (auto& p : edges[i].projection) p = rng.below(spec.right_alphabet);
  }
  return LabelCover(spec.left, spec.right, spec.left_alphabet, spec.right_alphabet, std::move(edges));
}

}  // namespace leakmip
