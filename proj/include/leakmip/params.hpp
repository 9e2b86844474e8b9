#pragma once

// Parameter arithmetic for amplifying a one-round protocol by parallel
// repetition so that it tolerates l bits of leakage: repeat N = k*l times,
// then charge the leakage as a factor 2^l on the repeated soundness.

#include <cmath>

#include "leakmip/error.hpp"
#include "leakmip/repetition.hpp"

namespace leakmip {

struct ParamInput {
  unsigned leak_bits = 1;
  unsigned question_bits = 1;
  unsigned answer_bits = 1;
  double epsilon = 0.25;
  std::size_t k = 16;
  double c_exp = 1.0;
  double c_rate = 1.0 / 16.0;

  void validate() const {
    if (!(epsilon > 0 && epsilon <= 0.5)) throw InvalidInput("epsilon must lie in (0, 1/2]");
    if (k == 0) throw InvalidInput("k must be at least 1");
    if (answer_bits == 0) throw InvalidInput("answer bits must be at least 1");
    if (leak_bits > 1000) throw InvalidInput("leak bits above 1000");
    if (!(c_exp > 0) || !(c_rate > 0)) throw InvalidInput("bound constants must be positive");
  }
};

struct ParamReport {
  ParamInput input;
  std::size_t repetitions = 0;
  std::uint64_t question_bits = 0;
  std::uint64_t answer_bits = 0;
  /// Repetition bound at N before the 2^l factor.
  double repetition_bound = 1.0;
  /// 2^l times the repetition bound, before clamping.
  double inflated_bound = 1.0;
  /// min(1, inflated_bound).
  double claim = 1.0;
  bool vacuous = false;
};

inline ParamReport compute_params(const ParamInput& in) {
  in.validate();
  ParamReport r;
  r.input = in;
  r.repetitions = in.k * std::max(in.leak_bits, 1u);
  r.question_bits = std::uint64_t(r.repetitions) * in.question_bits;
  r.answer_bits = std::uint64_t(r.repetitions) * in.answer_bits;
  const RepetitionBoundParams b{in.epsilon, 2.0 * in.answer_bits + 1.0, in.c_exp, in.c_rate};
  r.repetition_bound = repetition_bound(b, r.repetitions);
  r.inflated_bound = std::ldexp(r.repetition_bound, static_cast<int>(in.leak_bits));
  r.claim = std::min(1.0, r.inflated_bound);
  r.vacuous = r.inflated_bound > 1.0;
  return r;
}

}  // namespace leakmip
