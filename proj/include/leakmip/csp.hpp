#pragma once

// k-ary constraint systems with explicit allowed-tuple sets, label cover as
// the projection special case, and exact / heuristic satisfiable fractions.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "leakmip/enumerate.hpp"
#include "leakmip/rng.hpp"
#include "leakmip/value.hpp"

namespace leakmip {

/// Allowed tuples are stored as base-|Sigma| codes, scope position 0 most
/// significant.
struct Constraint {
  std::vector<std::size_t> scope;
  std::vector<std::uint64_t> allowed;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Assignment {
  std::vector<std::size_t> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

inline constexpr std::uint64_t kMaxTupleCount = std::uint64_t{1} << 24;

class CspInstance {
public:
  CspInstance(std::size_t num_vars, std::size_t alphabet_size, std::size_t arity, std::vector<Constraint> constraints)
      : num_vars_(num_vars), alphabet_(alphabet_size), arity_(arity), constraints_(std::move(constraints)) {
    if (num_vars_ == 0 || alphabet_ == 0 || arity_ == 0) throw InvalidInput("csp sizes must be at least 1");
    if (constraints_.empty()) throw InvalidInput("csp needs at least one constraint");
    tuple_count_ = saturating_pow(alphabet_, arity_);
    if (tuple_count_ > kMaxTupleCount) throw InvalidInput("alphabet^arity too large");
    masks_.reserve(constraints_.size());
    for (auto& c : constraints_) {
      if (c.scope.size() != arity_) throw ShapeMismatch("constraint scope length differs from arity");
      for (auto v : c.scope)
        if (v >= num_vars_) throw InvalidInput("constraint scope references unknown variable " + std::to_string(v));
      std::sort(c.allowed.begin(), c.allowed.end());
      c.allowed.erase(std::unique(c.allowed.begin(), c.allowed.end()), c.allowed.end());
      if (!c.allowed.empty() && c.allowed.back() >= tuple_count_) throw InvalidInput("allowed tuple out of range");
      std::vector<std::uint8_t> mask(tuple_count_, 0);
      for (auto t : c.allowed) mask[t] = 1;
      masks_.push_back(std::move(mask));
    }
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t alphabet_size() const noexcept { return alphabet_; }
  std::size_t arity() const noexcept { return arity_; }
  std::uint64_t tuple_count() const noexcept { return tuple_count_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return constraints_.size(); }

  bool allows(std::size_t c, std::uint64_t code) const { return code < tuple_count_ && masks_[c][code] != 0; }

  std::uint64_t encode(std::span<const std::size_t> tuple) const { return encode_mixed(tuple, alphabet_); }

  std::vector<std::size_t> decode(std::uint64_t code) const {
    std::vector<std::size_t> t(arity_);
    decode_mixed(code, alphabet_, t);
    return t;
  }

  /// Code of the assignment restricted to constraint c's scope.
  std::uint64_t scope_code(std::size_t c, std::span<const std::size_t> values) const {
    std::uint64_t code = 0;
    for (auto v : constraints_[c].scope) code = code * alphabet_ + values[v];
    return code;
  }

  std::size_t satisfied_count(std::span<const std::size_t> values) const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < constraints_.size(); ++c) n += allows(c, scope_code(c, values));
    return n;
  }

  void check(const Assignment& a) const {
    if (a.values.size() != num_vars_) throw ShapeMismatch("assignment length differs from variable count");
    for (auto v : a.values)
      if (v >= alphabet_) throw ShapeMismatch("assignment value out of range");
  }

  Value value_of(const Assignment& a) const {
    check(a);
    return Value::from_weights(satisfied_count(a.values), constraints_.size());
  }

  friend bool operator==(const CspInstance& a, const CspInstance& b) {
    return a.num_vars_ == b.num_vars_ && a.alphabet_ == b.alphabet_ && a.arity_ == b.arity_ &&
           a.constraints_ == b.constraints_;
  }

private:
  std::size_t num_vars_, alphabet_, arity_;
  std::vector<Constraint> constraints_;
  std::uint64_t tuple_count_ = 0;
  std::vector<std::vector<std::uint8_t>> masks_;
};

struct CspResult {
  Value value;
  Assignment witness;
};

/// Maximum satisfied fraction over all |Sigma|^n assignments, with the
/// lexicographically smallest optimal assignment.
inline CspResult csp_value_exact(const CspInstance& c, std::uint64_t budget = kDefaultAssignmentBudget) {
  const auto count = saturating_pow(c.alphabet_size(), c.num_vars());
  if (count > budget)
    throw BudgetExceeded("csp value: " + std::to_string(count) + " assignments exceed budget of " +
                         std::to_string(budget));
  std::vector<std::size_t> values(c.num_vars(), 0);
  Assignment best{values};
  std::size_t best_count = c.satisfied_count(values);
  while (next_tuple(values, c.alphabet_size()) && best_count < c.size()) {
    auto n = c.satisfied_count(values);
    if (n > best_count) {
      best_count = n;
      best.values = values;
    }
  }
  return {Value::from_weights(best_count, c.size()), std::move(best)};
}

/// Seeded greedy hill climbing with random restarts. Each restart starts
/// from a uniform assignment and applies the best single-variable change
/// until none improves. The result is a lower bound on the true value.
inline CspResult csp_value_local_search(const CspInstance& c, std::uint64_t seed, std::size_t restarts) {
  SplitMix64 rng(seed);
  std::vector<std::size_t> cur(c.num_vars());
  Assignment best{std::vector<std::size_t>(c.num_vars(), 0)};
  std::size_t best_count = c.satisfied_count(best.values);
  for (std::size_t r = 0; r < restarts && best_count < c.size(); ++r) {
    for (auto& v : cur) v = rng.below(c.alphabet_size());
    std::size_t score = c.satisfied_count(cur);
    for (;;) {
      std::size_t best_var = 0, best_val = 0, best_score = score;
      for (std::size_t var = 0; var < c.num_vars(); ++var) {
        const auto keep = cur[var];
        for (std::size_t val = 0; val < c.alphabet_size(); ++val) {
          if (val == keep) continue;
          cur[var] = val;
          if (auto s = c.satisfied_count(cur); s > best_score) {
            best_score = s;
            best_var = var;
            best_val = val;
          }
        }
        cur[var] = keep;
      }
      if (best_score == score) break;
      cur[best_var] = best_val;
      score = best_score;
    }
    if (score > best_count) {
      best_count = score;
      best.values = cur;
    }
  }
  return {Value::from_weights(best_count, c.size()), std::move(best)};
}

struct LabelCoverEdge {
  std::size_t left = 0;
  std::size_t right = 0;
  /// phi_e(sigma) for sigma in Sigma_L.
  std::vector<std::size_t> projection;

  friend bool operator==(const LabelCoverEdge&, const LabelCoverEdge&) = default;
};

/// Bipartite graph (L, R, E) with a projection phi_e: Sigma_L -> Sigma_R on
/// every edge; edge e is satisfied by (A_L, A_R) iff phi_e(A_L(u)) = A_R(v).
class LabelCover {
public:
  LabelCover(std::size_t left_count, std::size_t right_count, std::size_t left_alphabet, std::size_t right_alphabet,
             std::vector<LabelCoverEdge> edges)
      : left_(left_count), right_(right_count), sigma_l_(left_alphabet), sigma_r_(right_alphabet),
        edges_(std::move(edges)) {
    if (left_ == 0 || right_ == 0 || sigma_l_ == 0 || sigma_r_ == 0)
      throw InvalidInput("label cover sizes must be at least 1");
    for (const auto& e : edges_) {
      if (e.left >= left_ || e.right >= right_) throw InvalidInput("edge references unknown vertex");
      if (e.projection.size() != sigma_l_) throw ShapeMismatch("projection must list phi(sigma) for every left label");
      for (auto p : e.projection)
        if (p >= sigma_r_) throw InvalidInput("projection value outside the right alphabet");
    }
  }

  std::size_t left_count() const noexcept { return left_; }
  std::size_t right_count() const noexcept { return right_; }
  std::size_t left_alphabet() const noexcept { return sigma_l_; }
  std::size_t right_alphabet() const noexcept { return sigma_r_; }
  const std::vector<LabelCoverEdge>& edges() const noexcept { return edges_; }

  /// Variables 0..|L|-1 are left vertices, |L|..|L|+|R|-1 right vertices,
  /// over the alphabet max(|Sigma_L|, |Sigma_R|). Labels beyond a side's
  /// alphabet satisfy nothing, so the value is unchanged.
  CspInstance to_csp() const {
    if (edges_.empty()) throw InvalidInput("label cover has no edges");
    const std::size_t sigma = std::max(sigma_l_, sigma_r_);
    std::vector<Constraint> cons;
    cons.reserve(edges_.size());
    for (const auto& e : edges_) {
      Constraint c{{e.left, left_ + e.right}, {}};
      for (std::size_t s = 0; s < sigma_l_; ++s) c.allowed.push_back(s * sigma + e.projection[s]);
      cons.push_back(std::move(c));
    }
    return CspInstance(left_ + right_, sigma, 2, std::move(cons));
  }

  Value value_of(std::span<const std::size_t> left_labels, std::span<const std::size_t> right_labels) const {
    if (left_labels.size() != left_ || right_labels.size() != right_) throw ShapeMismatch("label vector lengths");
    if (edges_.empty()) throw InvalidInput("label cover has no edges");
    for (auto l : left_labels)
      if (l >= sigma_l_) throw ShapeMismatch("left label out of range");
    for (auto r : right_labels)
      if (r >= sigma_r_) throw ShapeMismatch("right label out of range");
    std::size_t sat = 0;
    for (const auto& e : edges_) sat += e.projection[left_labels[e.left]] == right_labels[e.right];
    return Value::from_weights(sat, edges_.size());
  }

  friend bool operator==(const LabelCover&, const LabelCover&) = default;

private:
  std::size_t left_, right_, sigma_l_, sigma_r_;
  std::vector<LabelCoverEdge> edges_;
};

}  // namespace leakmip
