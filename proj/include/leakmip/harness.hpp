#pragma once

// Session-level simulation of one-round two-prover protocols with a metered
// leakage channel.
//
// Message schedule per leakage kind (P1 = first prover, P2 = second):
//
//   one-way-ab    P1 gets x, answers, leaks; P2 leaks; P2 gets y and the
//                 AB payload, answers.
//   one-way-ba    mirror image with P2 moving first.
//   simultaneous  both get questions and leak; both receive and answer.
//
// Every leak goes through the meter. A payload that would push a direction
// past its budget is logged, not delivered, and forces rejection. Provers
// receive only the delivered payload bits; there is no other field.
//
// Seeds: session s draws questions from SplitMix64(derive_seed(s, 0)) and
// hands both provers the shared coins derive_seed(s, 1). Experiments run
// session i with seed derive_seed(master, i).

#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "leakmip/csp_io.hpp"
#include "leakmip/game_io.hpp"
#include "leakmip/leakage.hpp"
#include "leakmip/rng.hpp"

namespace leakmip {

using Json = nlohmann::ordered_json;

/// `length` bits holding `value`, most significant bit first.
class BitString {
 public:
  BitString() = default;
  BitString(std::uint64_t value, std::size_t length) : value_(value), length_(length) {
    if (length > 64) throw InvalidInput("bit strings hold at most 64 bits");
    if (length < 64 && (value >> length) != 0)
      throw InvalidInput("value " + std::to_string(value) + " does not fit in " + std::to_string(length) + " bits");
  }

  std::uint64_t value() const noexcept { return value_; }
  std::size_t length() const noexcept { return length_; }

  std::string str() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i)
      if ((value_ >> (length_ - 1 - i)) & 1) s[i] = '1';
    return s;
  }

  static BitString parse(const std::string& bits) {
    if (bits.size() > 64) throw InvalidInput("bit strings hold at most 64 bits");
    std::uint64_t v = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw InvalidInput("bit string '" + bits + "' has a non-binary digit");
      v = (v << 1) | std::uint64_t(ch == '1');
    }
    return BitString(v, bits.size());
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint64_t value_ = 0;
  std::size_t length_ = 0;
};

enum class Direction { AB, BA };

inline std::string to_string(Direction d) { return d == Direction::AB ? "ab" : "ba"; }

struct LeakEvent {
  Direction direction = Direction::AB;
  BitString payload;
  bool delivered = false;

  friend bool operator==(const LeakEvent&, const LeakEvent&) = default;
};

class MeteredChannel {
 public:
  MeteredChannel(unsigned budget_ab, unsigned budget_ba) : budget_{budget_ab, budget_ba} {
    if (budget_ab > kMaxLeakageBits || budget_ba > kMaxLeakageBits)
      throw InvalidInput("channel budget above " + std::to_string(kMaxLeakageBits) + " bits");
  }
  explicit MeteredChannel(const LeakageModel& m) : MeteredChannel(m.bits_ab, m.bits_ba) {}

  /// Delivers the payload iff it fits the remaining budget. Returns whether
  /// it was delivered.
  bool send(Direction d, const BitString& payload) {
    const auto i = index(d);
    const bool fits = payload.length() <= budget_[i] - spent_[i];
    log_.push_back({d, payload, fits});
    if (!fits) {
      overflow_ = true;
      return false;
    }
    spent_[i] += static_cast<unsigned>(payload.length());
    inbox_[i].push_back(payload);
    return true;
  }

  /// Concatenation of everything delivered in direction d.
  BitString receive(Direction d) const {
    std::uint64_t v = 0;
    std::size_t len = 0;
    for (const auto& p : inbox_[index(d)]) {
      v = (v << p.length()) | p.value();
      len += p.length();
    }
    return BitString(v, len);
  }

  unsigned budget(Direction d) const noexcept { return budget_[index(d)]; }
  unsigned spent(Direction d) const noexcept { return spent_[index(d)]; }
  bool overflow() const noexcept { return overflow_; }
  const std::vector<LeakEvent>& log() const noexcept { return log_; }

 private:
  static std::size_t index(Direction d) noexcept { return d == Direction::AB ? 0 : 1; }

  unsigned budget_[2];
  unsigned spent_[2] = {0, 0};
  std::vector<BitString> inbox_[2];
  std::vector<LeakEvent> log_;
  bool overflow_ = false;
};

enum class Role { First, Second };

/// One prover's pre-agreed behavior. `coins` is the session's shared
/// randomness; both rules must be pure functions of their arguments.
struct ProverBehavior {
  Role role = Role::First;
  std::function<BitString(std::size_t question, std::uint64_t coins)> leak;
  std::function<std::size_t(std::size_t question, const BitString& received, std::uint64_t coins)> answer;
};

struct Provers {
  ProverBehavior first;
  ProverBehavior second;
};

struct Questions {
  std::size_t x = 0;
  std::size_t y = 0;
  /// Scope position asked of P2 in the constraint protocol; 0 for games.
  std::size_t probe = 0;

  friend bool operator==(const Questions&, const Questions&) = default;
};

/// What the verifier does: sample questions and judge answers.
class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::string id() const = 0;
  virtual std::size_t first_answers() const = 0;
  virtual std::size_t second_answers() const = 0;
  virtual Questions sample(SplitMix64& rng) const = 0;
  virtual bool accepts(const Questions& q, std::size_t a, std::size_t b) const = 0;
};

/// 64-bit FNV-1a; identifiers hash the canonical text form of an instance.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

class GameProtocol final : public Protocol {
 public:
  explicit GameProtocol(Game g) : g_(std::move(g)), id_("game:" + g_.name() + ":" + hex64(fnv1a(save_game(g_)))) {
    std::uint64_t acc = 0;
    cumulative_.reserve(g_.weights().size());
    for (auto w : g_.weights()) cumulative_.push_back(acc += w);
  }

  const Game& game() const noexcept { return g_; }
  std::string id() const override { return id_; }
  std::size_t first_answers() const override { return g_.a_size(); }
  std::size_t second_answers() const override { return g_.b_size(); }

  Questions sample(SplitMix64& rng) const override {
    const auto r = rng.below(g_.total_weight());
    const auto cell = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), r) -
                                               cumulative_.begin());
    return {cell / g_.y_size(), cell % g_.y_size(), 0};
  }

  bool accepts(const Questions& q, std::size_t a, std::size_t b) const override {
    return q.x < g_.x_size() && q.y < g_.y_size() && q.probe == 0 && g_.accepts(q.x, q.y, a, b);
  }

 private:
  Game g_;
  std::string id_;
  std::vector<std::uint64_t> cumulative_;
};

/// The one-round CSP verifier: a uniform constraint goes to P1, who answers
/// a tuple code; a uniform scope position i is chosen and its variable goes
/// to P2, who answers a value. Accept iff the tuple is allowed and its i-th
/// entry equals P2's value.
class ConstraintProtocol final : public Protocol {
 public:
  explicit ConstraintProtocol(CspInstance c) : c_(std::move(c)), id_("csp:" + hex64(fnv1a(save_csp(c_)))) {}

  const CspInstance& instance() const noexcept { return c_; }
  std::string id() const override { return id_; }
  std::size_t first_answers() const override { return c_.tuple_count(); }
  std::size_t second_answers() const override { return c_.alphabet_size(); }

  Questions sample(SplitMix64& rng) const override {
    const auto e = static_cast<std::size_t>(rng.below(c_.size()));
    const auto i = static_cast<std::size_t>(rng.below(c_.arity()));
    return {e, c_.constraints()[e].scope[i], i};
  }

  bool accepts(const Questions& q, std::size_t a, std::size_t b) const override {
    if (q.x >= c_.size() || q.probe >= c_.arity() || c_.constraints()[q.x].scope[q.probe] != q.y) return false;
    if (!c_.allows(q.x, a)) return false;
    return c_.decode(a)[q.probe] == b;
  }

 private:
  CspInstance c_;
  std::string id_;
};

struct Transcript {
  std::string instance;
  std::uint64_t seed = 0;
  LeakageModel model;
  Questions questions;
  std::vector<LeakEvent> leakage;
  std::size_t a = 0;
  std::size_t b = 0;
  bool overflow = false;
  bool accepted = false;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

namespace detail {

inline std::size_t checked_answer(std::size_t v, std::size_t limit, const char* who) {
  if (v >= limit)
    throw InvalidInput(std::string(who) + " answered " + std::to_string(v) + ", outside [0, " + std::to_string(limit) +
                       ")");
  return v;
}

inline void check_provers(const Provers& p) {
  if (p.first.role != Role::First || p.second.role != Role::Second)
    throw InvalidInput("provers must be given as (first, second)");
  if (!p.first.leak || !p.first.answer || !p.second.leak || !p.second.answer)
    throw InvalidInput("prover behavior is missing a rule");
}

}  // namespace detail

inline Transcript run_session(const Protocol& proto, const Provers& provers, const LeakageModel& model,
                              std::uint64_t seed) {
  model.validate();
  detail::check_provers(provers);
  Transcript t;
  t.instance = proto.id();
  t.seed = seed;
  t.model = model;
  SplitMix64 rng(derive_seed(seed, 0));
  const std::uint64_t coins = derive_seed(seed, 1);
  t.questions = proto.sample(rng);
  const auto x = t.questions.x, y = t.questions.y;
  MeteredChannel ch(model);
  const auto& p1 = provers.first;
  const auto& p2 = provers.second;
  auto first_answer = [&] { return detail::checked_answer(p1.answer(x, ch.receive(Direction::BA), coins), proto.first_answers(), "first prover"); };
  auto second_answer = [&] { return detail::checked_answer(p2.answer(y, ch.receive(Direction::AB), coins), proto.second_answers(), "second prover"); };

  switch (model.kind) {
    case LeakageKind::OneWayAB:
      t.a = first_answer();
      ch.send(Direction::AB, p1.leak(x, coins));
      ch.send(Direction::BA, p2.leak(y, coins));
      t.b = second_answer();
      break;
    case LeakageKind::OneWayBA:
      t.b = second_answer();
      ch.send(Direction::BA, p2.leak(y, coins));
      ch.send(Direction::AB, p1.leak(x, coins));
      t.a = first_answer();
      break;
    case LeakageKind::Simultaneous:
      ch.send(Direction::AB, p1.leak(x, coins));
      ch.send(Direction::BA, p2.leak(y, coins));
      t.a = first_answer();
      t.b = second_answer();
      break;
  }
  t.leakage = ch.log();
  t.overflow = ch.overflow();
  t.accepted = !t.overflow && proto.accepts(t.questions, t.a, t.b);
  return t;
}

/// Recomputes the verdict, including the meter, from the recorded fields.
inline bool replay_verify(const Transcript& t, const Protocol& proto) {
  if (t.instance != proto.id())
    throw IdentifierMismatch("transcript is for '" + t.instance + "', not '" + proto.id() + "'");
  unsigned spent[2] = {0, 0};
  bool overflow = false;
  for (const auto& e : t.leakage) {
    const auto i = e.direction == Direction::AB ? 0 : 1;
    const unsigned budget = i == 0 ? t.model.bits_ab : t.model.bits_ba;
    const bool fits = e.payload.length() <= budget - spent[i];
    if (fits != e.delivered) return false;
    if (fits)
      spent[i] += static_cast<unsigned>(e.payload.length());
    else
      overflow = true;
  }
  if (overflow != t.overflow) return false;
  const bool verdict = !overflow && t.a < proto.first_answers() && t.b < proto.second_answers() &&
                       proto.accepts(t.questions, t.a, t.b);
  return verdict == t.accepted;
}

/// z for a two-sided 99% normal interval.
inline constexpr double kZ99 = 2.5758293035489004;

struct ExperimentRecord {
  std::uint64_t sessions = 0;
  std::uint64_t accepted = 0;
  std::uint64_t overflows = 0;
  double estimate = 0;
  double half_width = 0;
  std::uint64_t master_seed = 0;
  Json config = Json::object();

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

inline ExperimentRecord estimate_acceptance(const Protocol& proto, const Provers& provers, const LeakageModel& model,
                                            std::uint64_t sessions, std::uint64_t master_seed, unsigned workers = 1,
                                            Json config = Json::object()) {
  if (sessions == 0) throw InvalidInput("need at least one session");
  model.validate();
  detail::check_provers(provers);
  workers = std::max(1u, workers);
  if (sessions < workers) workers = 1;
  std::vector<std::uint64_t> acc(workers, 0), over(workers, 0);
  auto chunk = [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      auto t = run_session(proto, provers, model, derive_seed(master_seed, i));
      acc[w] += t.accepted;
      over[w] += t.overflow;
    }
  };
  const std::uint64_t step = sessions / workers;
  if (workers == 1) {
    chunk(0, 0, sessions);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back(chunk, w, w * step, w + 1 == workers ? sessions : (w + 1) * step);
    for (auto& t : threads) t.join();
  }
  ExperimentRecord r;
  r.sessions = sessions;
  for (unsigned w = 0; w < workers; ++w) {
    r.accepted += acc[w];
    r.overflows += over[w];
  }
  r.estimate = double(r.accepted) / double(sessions);
  r.half_width = kZ99 * std::sqrt(r.estimate * (1 - r.estimate) / double(sessions));
  r.master_seed = master_seed;
  r.config = std::move(config);
  return r;
}

// JSON shapes ---------------------------------------------------------------

inline Json to_json(const LeakageModel& m) {
  return Json{{"kind", to_string(m.kind)}, {"bits_ab", m.bits_ab}, {"bits_ba", m.bits_ba}};
}

inline Json to_json(const Transcript& t) {
  Json leaks = Json::array();
  for (const auto& e : t.leakage)
    leaks.push_back({{"direction", to_string(e.direction)}, {"payload", e.payload.str()}, {"delivered", e.delivered}});
  return Json{{"instance", t.instance},
              {"seed", t.seed},
              {"model", to_json(t.model)},
              {"questions", {{"x", t.questions.x}, {"y", t.questions.y}, {"probe", t.questions.probe}}},
              {"leakage", leaks},
              {"answers", {{"a", t.a}, {"b", t.b}}},
              {"overflow", t.overflow},
              {"accepted", t.accepted}};
}

inline Transcript transcript_from_json(const Json& j) {
  try {
    Transcript t;
    t.instance = j.at("instance").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    const auto& m = j.at("model");
    t.model = {parse_leakage_kind(m.at("kind").get<std::string>()), m.at("bits_ab").get<unsigned>(),
               m.at("bits_ba").get<unsigned>()};
    const auto& q = j.at("questions");
    t.questions = {q.at("x").get<std::size_t>(), q.at("y").get<std::size_t>(), q.at("probe").get<std::size_t>()};
    for (const auto& e : j.at("leakage")) {
      const auto dir = e.at("direction").get<std::string>();
      if (dir != "ab" && dir != "ba") throw InvalidInput("leak direction must be 'ab' or 'ba'");
      t.leakage.push_back({dir == "ab" ? Direction::AB : Direction::BA,
                           BitString::parse(e.at("payload").get<std::string>()), e.at("delivered").get<bool>()});
    }
    t.a = j.at("answers").at("a").get<std::size_t>();
    t.b = j.at("answers").at("b").get<std::size_t>();
    t.overflow = j.at("overflow").get<bool>();
    t.accepted = j.at("accepted").get<bool>();
    return t;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed transcript: ") + e.what());
  }
}

inline Json to_json(const ExperimentRecord& r) {
  return Json{{"sessions", r.sessions},     {"accepted", r.accepted},       {"overflows", r.overflows},
              {"estimate", r.estimate},     {"half_width", r.half_width},   {"master_seed", r.master_seed},
              {"config", r.config}};
}

}  // namespace leakmip
