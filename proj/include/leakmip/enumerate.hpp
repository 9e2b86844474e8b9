#pragma once

// Shared enumeration plumbing: saturating counters, mixed-radix tuples
// and the partitioned argmax used by every exact solver.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

namespace leakmip {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
inline constexpr std::uint64_t kDefaultStrategyBudget = 100'000'000;
inline constexpr std::uint64_t kDefaultAssignmentBudget = 10'000'000;

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = saturating_mul(r, base);
    if (r == kSaturated) break;
  }
  return r;
}

struct SolverOptions {
  std::uint64_t budget = kDefaultStrategyBudget;
  unsigned workers = 1;
};

/// Writes the base-`radix` digits of `index` into `digits`, position 0 most
/// significant, so increasing indices walk tuples in lexicographic order.
inline void decode_mixed(std::uint64_t index, std::uint64_t radix, std::span<std::size_t> digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<std::size_t>(index % radix);
    index /= radix;
  }
}

inline std::uint64_t encode_mixed(std::span<const std::size_t> digits, std::uint64_t radix) {
  std::uint64_t index = 0;
  for (auto d : digits) index = index * radix + d;
  return index;
}

/// Odometer step in lexicographic order. Returns false on wrap-around.
inline bool next_tuple(std::span<std::size_t> digits, std::size_t radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

/// Per-position radix variants, for tuples that concatenate several tables.
inline void decode_mixed(std::uint64_t index, std::span<const std::size_t> radices, std::span<std::size_t> digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<std::size_t>(index % radices[i]);
    index /= radices[i];
  }
}

inline bool next_tuple(std::span<std::size_t> digits, std::span<const std::size_t> radices) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radices[i]) return true;
    digits[i] = 0;
  }
  return false;
}

/// A scored search point. Higher score wins; ties go to the smaller
/// (primary, secondary) key, which is how lexicographic witnesses are kept
/// stable regardless of how the index range is split.
struct Candidate {
  std::uint64_t score = 0;
  std::uint64_t primary = kSaturated;
  std::uint64_t secondary = kSaturated;
  bool valid = false;

  bool better_than(const Candidate& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    if (score != o.score) return score > o.score;
    if (primary != o.primary) return primary < o.primary;
    return secondary < o.secondary;
  }
};

inline void keep_better(Candidate& best, const Candidate& c) {
  if (c.better_than(best)) best = c;
}

/// Runs `chunk(begin, end) -> Candidate` over [0, count) split into
/// contiguous blocks and reduces deterministically.
template <class ChunkFn>
Candidate partitioned_best(std::uint64_t count, unsigned workers, ChunkFn&& chunk) {
  if (count == 0) return {};
  workers = std::max(1u, workers);
  if (workers == 1 || count < 2 * static_cast<std::uint64_t>(workers)) return chunk(std::uint64_t{0}, count);

  std::vector<Candidate> partial(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::uint64_t step = count / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * step;
    const std::uint64_t end = (w + 1 == workers) ? count : begin + step;
    threads.emplace_back([&, w, begin, end] { partial[w] = chunk(begin, end); });
  }
  for (auto& t : threads) t.join();
  Candidate best;
  for (const auto& c : partial) keep_better(best, c);
  return best;
}

}  // namespace leakmip
