#pragma once

// Command-line front end. `run_cli` is the whole program; tools/leakmip.cpp
// only forwards argv to it.
//
// Every command produces one results table. It is printed to stdout as CSV
// or JSON (--format), and with --out DIR also written to DIR/<command>.csv
// and DIR/<command>.json. Files are written only after the command has
// fully succeeded.
//
// Exit codes: 0 ok, 2 invalid input, 3 budget exceeded, 4 generator cap
// exhausted.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leakmip/behaviors.hpp"
#include "leakmip/csp_io.hpp"
#include "leakmip/game_io.hpp"
#include "leakmip/generator.hpp"
#include "leakmip/one_way_mip.hpp"
#include "leakmip/params.hpp"
#include "leakmip/pcp_games.hpp"
#include "leakmip/random_game.hpp"
#include "leakmip/repetition.hpp"

namespace leakmip {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitBudget = 3, kExitExhausted = 4 };

struct CommandOutput {
  CommandOutput() = default;
  CommandOutput(std::string name, std::vector<std::string> cols) : command(std::move(name)), columns(std::move(cols)) {}

  std::string command;
  std::vector<std::string> columns;
  std::vector<Json> rows;
  Json extra = Json::object();
  /// Additional artifacts (file name, content) written next to the tables.
  std::vector<std::pair<std::string, std::string>> files;
  /// Printed instead of the table when no --out directory is given.
  std::optional<std::string> stdout_text;
};

namespace cli {

inline std::string csv_field(const Json& v) {
  std::string s;
  if (v.is_null()) return s;
  if (v.is_string())
    s = v.get<std::string>();
  else
    s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

inline std::string render_csv(const CommandOutput& o) {
  std::ostringstream out;
  for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
  out << '\n';
  for (const auto& row : o.rows) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) {
      const auto it = row.find(o.columns[i]);
      out << (i ? "," : "") << (it == row.end() ? std::string() : csv_field(*it));
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_json(const CommandOutput& o) {
  Json j{{"command", o.command}, {"rows", o.rows}};
  for (auto it = o.extra.begin(); it != o.extra.end(); ++it) j[it.key()] = it.value();
  return j.dump(2) + "\n";
}

/// Writes every file under a temporary name first, then renames, so a
/// failure leaves no artifacts behind.
inline void write_artifacts(const std::filesystem::path& dir,
                            const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files) {
    auto tmp = dir / (name + ".tmp");
    std::ofstream f(tmp, std::ios::binary);
    staged.push_back(tmp);
    if (!(f << content) || !f.flush()) {
      cleanup();
      throw InvalidInput("cannot write '" + tmp.string() + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], dir / files[i].first, ec);
    if (ec) {
      cleanup();
      throw InvalidInput("cannot write '" + (dir / files[i].first).string() + "': " + ec.message());
    }
  }
}

inline std::string join(const std::vector<std::size_t>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

inline std::string stem(const std::string& path) { return std::filesystem::path(path).filename().string(); }

inline void put_value(Json& row, const std::string& key, const Value& v) {
  row[key] = v.str();
  row[key + "_float"] = v.to_double();
}

inline void put_rational(Json& row, const std::string& key, const Rational& r) {
  row[key] = to_fraction_string(r);
  row[key + "_float"] = r.convert_to<double>();
}

inline Json to_json(const LeakyStrategy& s) {
  return Json{{"alice_msg", s.alice_msg}, {"bob_msg", s.bob_msg}, {"alice_ans", s.alice_ans}, {"bob_ans", s.bob_ans}};
}

inline LeakageModel make_model(const std::string& kind, unsigned bits, unsigned bits_ab, unsigned bits_ba) {
  const auto k = parse_leakage_kind(kind);
  LeakageModel m;
  switch (k) {
    case LeakageKind::OneWayAB: m = LeakageModel::one_way_ab(bits); break;
    case LeakageKind::OneWayBA: m = LeakageModel::one_way_ba(bits); break;
    case LeakageKind::Simultaneous: m = LeakageModel::simultaneous(bits_ab, bits_ba); break;
  }
  m.validate();
  return m;
}

inline void put_model(Json& row, const LeakageModel& m) {
  row["model"] = to_string(m.kind);
  row["bits_ab"] = m.bits_ab;
  row["bits_ba"] = m.bits_ba;
}

struct Globals {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> budget;
  unsigned workers = 1;
  std::string out_dir;
  std::string format = "csv";

  SolverOptions solver() const { return {budget.value_or(kDefaultStrategyBudget), workers}; }
  std::uint64_t assignment_budget() const { return budget.value_or(kDefaultAssignmentBudget); }
};

// Commands -------------------------------------------------------------------

inline CommandOutput cmd_value(const Globals& g, const std::string& path) {
  auto game = load_game_file(path);
  auto r = classical_value(game, g.solver());
  CommandOutput o{"value", {"command", "instance", "value", "value_float", "alice", "bob"}};
  Json row{{"command", "value"}, {"instance", game.name()}};
  put_value(row, "value", r.value);
  row["alice"] = join(r.witness.alice);
  row["bob"] = join(r.witness.bob);
  o.rows.push_back(row);
  return o;
}

inline CommandOutput cmd_leaky_value(const Globals& g, const std::string& path, const LeakageModel& m) {
  auto game = load_game_file(path);
  auto r = leaky_value_exact(game, m, g.solver());
  auto base = classical_value(game, g.solver()).value;
  CommandOutput o{"leaky-value",
                  {"command", "instance", "model", "bits_ab", "bits_ba", "value", "value_float", "classical",
                   "classical_float", "inflation_bound", "inflation_bound_float"}};
  Json row{{"command", "leaky-value"}, {"instance", game.name()}};
  put_model(row, m);
  put_value(row, "value", r.value);
  put_value(row, "classical", base);
  put_value(row, "inflation_bound", Value::clamped(pow2(m.total_bits()) * base.exact()));
  o.rows.push_back(row);
  o.extra["witness"] = to_json(r.witness);
  return o;
}

inline CommandOutput cmd_repeat(const Globals& g, const std::string& path, std::size_t copies, const LeakageModel& m,
                                double c_exp, double c_rate) {
  if (copies == 0) throw InvalidInput("need at least one copy");
  auto game = load_game_file(path);
  const auto base = classical_value(game, g.solver()).value;
  CommandOutput o{"repeat",
                  {"command", "instance", "copies", "model", "bits_ab", "bits_ba", "value", "value_float", "kind",
                   "base_value", "base_value_float", "base_power", "base_power_float", "bound_float"}};
  Json row{{"command", "repeat"}, {"instance", game.name()}, {"copies", copies}};
  put_model(row, m);
  if (m.total_bits() == 0) {
    auto r = repeated_exact_value(repeat_game(game, copies), g.solver());
    put_value(row, "value", r.value);
    row["kind"] = to_string(BoundKind::Exact);
  } else {
    auto r = leaky_repetition_experiment(game, copies, m, g.solver());
    put_value(row, "value", r.value);
    row["kind"] = to_string(r.kind);
    if (r.witness) o.extra["witness"] = to_json(*r.witness);
  }
  put_value(row, "base_value", base);
  Rational power = 1;
  for (std::size_t i = 0; i < copies; ++i) power *= base.exact();
  put_rational(row, "base_power", power);
  // The bound needs 0 < epsilon <= 1/2, i.e. a base value in [1/2, 1).
  const Rational eps = Rational(1) - base.exact();
  if (eps > 0 && eps <= Rational(1, 2)) {
    RepetitionBoundParams p{eps.convert_to<double>(), std::log2(double(game.a_size() * game.b_size())) + 1.0, c_exp,
                            c_rate};
    row["bound_float"] = repetition_bound(p, copies);
  }
  o.rows.push_back(row);
  return o;
}

inline CspInstance load_csp_or_cover(const std::string& path, bool label_cover) {
  return label_cover ? load_label_cover_file(path).to_csp() : load_csp_file(path);
}

inline CommandOutput cmd_csp_val(const Globals& g, const std::string& path, bool label_cover, const std::string& method,
                                 std::size_t restarts) {
  auto c = load_csp_or_cover(path, label_cover);
  CspResult r;
  if (method == "exact")
    r = csp_value_exact(c, g.assignment_budget());
  else if (method == "local")
    r = csp_value_local_search(c, g.seed, restarts);
  else
    throw InvalidInput("method must be 'exact' or 'local'");
  CommandOutput o{"csp-val", {"command", "instance", "method", "value", "value_float", "assignment"}};
  Json row{{"command", "csp-val"}, {"instance", stem(path)}, {"method", method}};
  put_value(row, "value", r.value);
  row["assignment"] = join(r.witness.values);
  o.rows.push_back(row);
  return o;
}

inline CommandOutput cmd_cheat(const Globals& g, const std::string& path, bool label_cover, unsigned leak_bits) {
  auto c = load_csp_or_cover(path, label_cover);
  auto val = csp_value_exact(c, g.assignment_budget()).value;
  auto r = optimal_cheat(c, leak_bits, g.solver());
  const auto bound = cheat_soundness_bound(c.arity());
  CommandOutput o{"cheat",
                  {"command", "instance", "leak_bits", "value", "value_float", "csp_value", "csp_value_float",
                   "promise", "soundness_bound", "soundness_bound_float", "within_bound", "assignments"}};
  Json row{{"command", "cheat"}, {"instance", stem(path)}, {"leak_bits", leak_bits}};
  put_value(row, "value", r.value);
  put_value(row, "csp_value", val);
  row["promise"] = low_value_promise(val, leak_bits);
  put_rational(row, "soundness_bound", bound);
  row["within_bound"] = r.value.exact() <= bound;
  std::string as;
  for (std::size_t m = 0; m < r.profile.assignments.size(); ++m) {
    if (m) as += " | ";
    as += join(r.profile.assignments[m].values);
  }
  row["assignments"] = as;
  o.rows.push_back(row);
  Json replies = Json::array();
  for (const auto& p : r.profile.replies)
    replies.push_back({{"message", p.message}, {"tuple", p.tuple}, {"agreement", p.agreement}});
  o.extra["replies"] = replies;
  return o;
}

inline CommandOutput cmd_params(const ParamInput& in) {
  auto r = compute_params(in);
  CommandOutput o{"params",
                  {"command", "leak_bits", "question_bits", "answer_bits", "epsilon", "k", "c_exp", "c_rate",
                   "repetitions", "repeated_question_bits", "repeated_answer_bits", "repetition_bound",
                   "inflated_bound", "claim", "vacuous"}};
  o.rows.push_back(Json{{"command", "params"},
                        {"leak_bits", in.leak_bits},
                        {"question_bits", in.question_bits},
                        {"answer_bits", in.answer_bits},
                        {"epsilon", in.epsilon},
                        {"k", in.k},
                        {"c_exp", in.c_exp},
                        {"c_rate", in.c_rate},
                        {"repetitions", r.repetitions},
                        {"repeated_question_bits", r.question_bits},
                        {"repeated_answer_bits", r.answer_bits},
                        {"repetition_bound", r.repetition_bound},
                        {"inflated_bound", r.inflated_bound},
                        {"claim", r.claim},
                        {"vacuous", r.vacuous}});
  return o;
}

struct GenOptions {
  std::string kind;
  InstanceSpec csp;
  std::string target = "1";
  std::size_t attempts = 10000;
  LabelCoverSpec cover;
  RandomGameShape game;
  std::string name = "random";
};

inline CommandOutput cmd_gen(const Globals& g, const GenOptions& opt) {
  CommandOutput o{"gen", {"command", "kind", "seed", "attempts", "value", "value_float", "file"}};
  Json row{{"command", "gen"}, {"kind", opt.kind}, {"seed", g.seed}};
  std::string text, file;
  if (opt.kind == "csp") {
    SearchSpec s{opt.csp, parse_rational(opt.target), g.seed, opt.attempts, g.assignment_budget()};
    auto r = find_low_value_instance(s);
    row["attempts"] = r.attempts;
    put_value(row, "value", r.value);
    text = save_csp(r.instance);
    file = "gen.csp";
  } else if (opt.kind == "labelcover") {
    SplitMix64 rng(g.seed);
    auto lc = random_label_cover(rng, opt.cover);
    row["attempts"] = 1;
    put_value(row, "value", csp_value_exact(lc.to_csp(), g.assignment_budget()).value);
    text = save_label_cover(lc);
    file = "gen.labelcover";
  } else if (opt.kind == "game") {
    SplitMix64 rng(g.seed);
    auto game = random_game(rng, opt.game, opt.name);
    row["attempts"] = 1;
    put_value(row, "value", classical_value(game, g.solver()).value);
    text = save_game(game);
    file = "gen.game";
  } else {
    throw InvalidInput("gen kind must be 'csp', 'labelcover' or 'game'");
  }
  row["file"] = file;
  o.rows.push_back(row);
  o.files.emplace_back(file, text);
  o.extra["instance"] = text;
  o.stdout_text = text;
  return o;
}

// Experiment configs ------------------------------------------------------

/// JSON experiment description consumed by `run`:
///
///   {"protocol": "game" | "csp" | "consistency",
///    "input": "<path, relative to the config file>",
///    "behavior": "optimal" | "honest" | "optimal-cheat" | "strategy",
///    "strategy": {"alice": [...], "bob": [...]},     (behavior "strategy")
///    "model": {"kind": "one-way-ab", "bits_ab": 1, "bits_ba": 0},
///    "sessions": 10000, "seed": 7, "workers": 1, "transcripts": 2}
struct ExperimentConfig {
  std::string protocol;
  std::string input;
  std::string behavior;
  std::optional<StrategyPair> strategy;
  LeakageModel model = LeakageModel::none();
  std::uint64_t sessions = 10000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::size_t transcripts = 0;
  Json echo;

  static ExperimentConfig parse(const Json& j, const std::filesystem::path& base_dir) {
    static const char* known[] = {"protocol", "input", "behavior", "strategy", "model",
                                  "sessions", "seed",  "workers",  "transcripts"};
    if (!j.is_object()) throw InvalidInput("experiment config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
        throw InvalidInput("unknown config key '" + it.key() + "'");
    ExperimentConfig c;
    try {
      c.protocol = j.at("protocol").get<std::string>();
      c.input = j.at("input").get<std::string>();
      c.behavior = j.at("behavior").get<std::string>();
      if (j.contains("strategy"))
        c.strategy = StrategyPair{j["strategy"].at("alice").get<std::vector<std::size_t>>(),
                                  j["strategy"].at("bob").get<std::vector<std::size_t>>()};
      if (j.contains("model")) {
        const auto& m = j["model"];
        c.model = {parse_leakage_kind(m.value("kind", std::string("one-way-ab"))), m.value("bits_ab", 0u),
                   m.value("bits_ba", 0u)};
      }
      c.sessions = j.value("sessions", std::uint64_t{10000});
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      c.workers = j.value("workers", 1u);
      c.transcripts = j.value("transcripts", std::size_t{0});
    } catch (const Json::exception& e) {
      throw InvalidInput(std::string("bad experiment config: ") + e.what());
    }
    c.model.validate();
    if (c.protocol != "game" && c.protocol != "csp" && c.protocol != "consistency")
      throw InvalidInput("protocol must be 'game', 'csp' or 'consistency'");
    if (c.sessions == 0 || c.sessions > 1'000'000'000) throw InvalidInput("sessions must be in 1..1e9");
    if (c.workers == 0 || c.workers > 256) throw InvalidInput("workers must be in 1..256");
    if (c.transcripts > 1000) throw InvalidInput("transcripts must be at most 1000");
    if (c.transcripts > c.sessions) throw InvalidInput("cannot log more transcripts than sessions");
    auto p = std::filesystem::path(c.input);
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) throw InvalidInput("input file '" + p.string() + "' does not exist");
    c.input = p.string();
    c.echo = j;
    return c;
  }
};

struct PreparedExperiment {
  std::unique_ptr<Protocol> protocol;
  Provers provers;
  Value exact;
};

inline PreparedExperiment prepare(const Globals& g, const ExperimentConfig& c) {
  PreparedExperiment p;
  const auto& m = c.model;
  auto bad_behavior = [&] {
    return InvalidInput("behavior '" + c.behavior + "' is not available for protocol '" + c.protocol + "'");
  };
  if (c.protocol == "game" || (c.protocol == "consistency" && c.behavior != "honest")) {
    Game game = c.protocol == "game" ? load_game_file(c.input) : consistency_game(load_label_cover_file(c.input));
    if (c.behavior == "optimal") {
      if (m.total_bits() == 0) {
        auto r = classical_value(game, g.solver());
        p.provers = strategy_provers(r.witness);
        p.exact = r.value;
      } else {
        auto r = leaky_value_exact(game, m, g.solver());
        p.provers = leaky_provers(r.witness, m);
        p.exact = r.value;
      }
    } else if (c.behavior == "strategy") {
      if (!c.strategy) throw InvalidInput("behavior 'strategy' needs a 'strategy' object");
      p.exact = strategy_value(game, *c.strategy);
      p.provers = leaky_provers(embed(*c.strategy, m), m);
    } else {
      throw bad_behavior();
    }
    p.protocol = std::make_unique<GameProtocol>(std::move(game));
  } else if (c.protocol == "consistency") {
    auto lc = load_label_cover_file(c.input);
    if (m.total_bits() != 0) throw InvalidInput("honest consistency provers do not leak; use a zero-bit model");
    auto best = csp_value_exact(lc.to_csp(), g.assignment_budget()).witness.values;
    std::vector<std::size_t> left(best.begin(), best.begin() + std::ptrdiff_t(lc.left_count()));
    std::vector<std::size_t> right(best.begin() + std::ptrdiff_t(lc.left_count()), best.end());
    for (auto& l : left) l = std::min(l, lc.left_alphabet() - 1);
    for (auto& r : right) r = std::min(r, lc.right_alphabet() - 1);
    auto game = consistency_game(lc);
    auto s = consistency_strategy(lc, left, right);
    p.exact = strategy_value(game, s);
    p.provers = strategy_provers(s);
    p.protocol = std::make_unique<GameProtocol>(std::move(game));
  } else {
    auto inst = load_csp_file(c.input);
    if (m.kind != LeakageKind::OneWayAB) throw InvalidInput("the constraint protocol uses one-way-ab leakage");
    if (c.behavior == "honest") {
      auto w = csp_value_exact(inst, g.assignment_budget()).witness;
      p.exact = algorithm_one_acceptance(inst, honest_profile(inst, m.bits_ab, w));
      p.provers = honest_csp_provers(inst, w);
    } else if (c.behavior == "optimal-cheat") {
      auto r = optimal_cheat(inst, m.bits_ab, g.solver());
      p.exact = r.value;
      p.provers = cheat_provers(inst, r.profile);
    } else {
      throw bad_behavior();
    }
    p.protocol = std::make_unique<ConstraintProtocol>(std::move(inst));
  }
  return p;
}

inline CommandOutput cmd_run(const Globals& g, const std::string& config_path) {
  Json j;
  {
    auto text = text::read_file(config_path);
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
  }
  auto c = ExperimentConfig::parse(j, std::filesystem::path(config_path).parent_path());
  const auto seed = c.seed.value_or(g.seed);
  auto p = prepare(g, c);
  auto rec = estimate_acceptance(*p.protocol, p.provers, c.model, c.sessions, seed, c.workers, c.echo);
  CommandOutput o{"run",
                  {"command", "instance", "protocol", "behavior", "model", "bits_ab", "bits_ba", "sessions",
                   "accepted", "overflows", "estimate", "half_width", "exact", "exact_float", "within_4hw",
                   "master_seed"}};
  Json row{{"command", "run"}, {"instance", p.protocol->id()}, {"protocol", c.protocol}, {"behavior", c.behavior}};
  put_model(row, c.model);
  row["sessions"] = rec.sessions;
  row["accepted"] = rec.accepted;
  row["overflows"] = rec.overflows;
  row["estimate"] = rec.estimate;
  row["half_width"] = rec.half_width;
  put_value(row, "exact", p.exact);
  row["within_4hw"] = std::abs(rec.estimate - p.exact.to_double()) <= 4 * rec.half_width + 1e-12;
  row["master_seed"] = seed;
  o.rows.push_back(row);
  o.extra["record"] = to_json(rec);
  Json ts = Json::array();
  for (std::size_t i = 0; i < c.transcripts; ++i)
    ts.push_back(to_json(run_session(*p.protocol, p.provers, c.model, derive_seed(seed, i))));
  o.extra["transcripts"] = ts;
  return o;
}

inline const char* module_of(const std::string& cmd) {
  if (cmd == "value") return "game-core";
  if (cmd == "leaky-value") return "leakage-solver";
  if (cmd == "repeat") return "repetition";
  if (cmd == "csp-val" || cmd == "cheat" || cmd == "gen") return "csp-mip";
  if (cmd == "run") return "harness";
  return "cli-params";
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Exact solvers and simulations for two-prover games with bounded leakage", "leakmip"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t budget = 0;
  auto* budget_opt = app.add_option("--budget", budget, "Cap on enumerated strategies or assignments");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--workers", g.workers, "Solver threads")->check(CLI::Range(1u, 256u));
  app.add_option("--out", g.out_dir, "Also write <command>.csv and <command>.json here");
  app.add_option("--format", g.format, "Stdout format")->check(CLI::IsMember({"csv", "json"}));

  std::string input;
  std::string kind = "one-way-ab";
  unsigned bits = 1, bits_ab = 0, bits_ba = 0;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", kind, "one-way-ab | one-way-ba | simultaneous");
    sub->add_option("--bits", bits, "Leak bits for one-way models");
    sub->add_option("--bits-ab", bits_ab, "P1 -> P2 bits for the simultaneous model");
    sub->add_option("--bits-ba", bits_ba, "P2 -> P1 bits for the simultaneous model");
  };

  auto* value = app.add_subcommand("value", "Classical value of a game");
  value->add_option("game", input, "Game file")->required();

  auto* leaky = app.add_subcommand("leaky-value", "Exact value under a leakage model");
  leaky->add_option("game", input, "Game file")->required();
  add_model(leaky);

  std::size_t copies = 2;
  double c_exp = 1.0, c_rate = 1.0 / 16.0;
  auto* repeat = app.add_subcommand("repeat", "Value of the N-fold parallel repetition");
  repeat->add_option("game", input, "Game file")->required();
  repeat->add_option("-n,--copies", copies, "Number of copies");
  repeat->add_option("--c-exp", c_exp, "Bound exponent constant");
  repeat->add_option("--c-rate", c_rate, "Bound rate constant");
  add_model(repeat);

  bool label_cover = false;
  std::string method = "exact";
  std::size_t restarts = 64;
  auto* cspval = app.add_subcommand("csp-val", "Value of a CSP or label cover");
  cspval->add_option("instance", input, "CSP file")->required();
  cspval->add_flag("--labelcover", label_cover, "Input is a label cover file");
  cspval->add_option("--method", method, "exact | local");
  cspval->add_option("--restarts", restarts, "Local search restarts");

  unsigned leak_bits = 1;
  auto* cheat = app.add_subcommand("cheat", "Optimal cheating against the one-way verifier");
  cheat->add_option("instance", input, "CSP file")->required();
  cheat->add_flag("--labelcover", label_cover, "Input is a label cover file");
  cheat->add_option("-l,--leak-bits", leak_bits, "Leaked bits");

  auto* run = app.add_subcommand("run", "Monte Carlo experiment from a JSON config");
  run->add_option("config", input, "Config file")->required();

  ParamInput pin;
  auto* params = app.add_subcommand("params", "Repetition parameters for leakage tolerance");
  params->add_option("-l,--leak-bits", pin.leak_bits, "Leak bits");
  params->add_option("--question-bits", pin.question_bits, "Base question bits");
  params->add_option("--answer-bits", pin.answer_bits, "Base answer bits");
  params->add_option("--epsilon", pin.epsilon, "Base soundness gap");
  params->add_option("-k", pin.k, "Repetition multiplier");
  params->add_option("--c-exp", pin.c_exp, "Bound exponent constant");
  params->add_option("--c-rate", pin.c_rate, "Bound rate constant");

  GenOptions gen_opt;
  std::string target = "1";
  auto* gen = app.add_subcommand("gen", "Generate a random fixture");
  gen->add_option("kind", gen_opt.kind, "csp | labelcover | game")->required();
  gen->add_option("--n", gen_opt.csp.num_vars, "CSP variables");
  gen->add_option("--sigma", gen_opt.csp.alphabet, "CSP alphabet");
  gen->add_option("--k", gen_opt.csp.arity, "CSP arity");
  gen->add_option("--m", gen_opt.csp.num_constraints, "CSP constraints");
  gen->add_option("--min-tuples", gen_opt.csp.min_tuples, "Smallest allowed set");
  gen->add_option("--max-tuples", gen_opt.csp.max_tuples, "Largest allowed set");
  gen->add_option("--target", gen_opt.target, "Accept the first CSP with value <= target (p/q)");
  gen->add_option("--attempts", gen_opt.attempts, "Attempt cap");
  gen->add_option("--left", gen_opt.cover.left, "Label cover left vertices");
  gen->add_option("--right", gen_opt.cover.right, "Label cover right vertices");
  gen->add_option("--sigma-l", gen_opt.cover.left_alphabet, "Left alphabet");
  gen->add_option("--sigma-r", gen_opt.cover.right_alphabet, "Right alphabet");
  gen->add_option("--edges", gen_opt.cover.num_edges, "Label cover edges");
  gen->add_option("--min-size", gen_opt.game.min_size, "Smallest game dimension");
  gen->add_option("--max-size", gen_opt.game.max_size, "Largest game dimension");
  gen->add_option("--max-weight", gen_opt.game.max_weight, "Largest question weight");
  gen->add_option("--density", gen_opt.game.density, "Predicate density");
  gen->add_option("--name", gen_opt.name, "Game name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "leakmip: " << e.what() << "\n";
    return kExitInvalid;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  if (budget_opt->count() > 0) g.budget = budget;
  try {
    CommandOutput o;
    if (cmd == "value") o = cmd_value(g, input);
    else if (cmd == "leaky-value") o = cmd_leaky_value(g, input, make_model(kind, bits, bits_ab, bits_ba));
    else if (cmd == "repeat") {
      const bool leaky_flags = repeat->count("--bits") + repeat->count("--bits-ab") + repeat->count("--bits-ba") > 0;
      auto m = leaky_flags ? make_model(kind, bits, bits_ab, bits_ba) : LeakageModel::none();
      o = cmd_repeat(g, input, copies, m, c_exp, c_rate);
    }
    else if (cmd == "csp-val") o = cmd_csp_val(g, input, label_cover, method, restarts);
    else if (cmd == "cheat") o = cmd_cheat(g, input, label_cover, leak_bits);
    else if (cmd == "run") o = cmd_run(g, input);
    else if (cmd == "params") o = cmd_params(pin);
    else o = cmd_gen(g, gen_opt);

    const auto csv = render_csv(o);
    const auto json = render_json(o);
    if (!g.out_dir.empty()) {
      auto files = o.files;
      files.emplace_back(o.command + ".csv", csv);
      files.emplace_back(o.command + ".json", json);
      write_artifacts(g.out_dir, files);
    }
    if (o.stdout_text && g.out_dir.empty())
      out << *o.stdout_text;
    else
      out << (g.format == "json" ? json : csv);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "leakmip: error [" << module_of(cmd) << "]: " << e.what() << "\n";
    return kExitBudget;
  } catch (const GeneratorExhausted& e) {
    err << "leakmip: error [" << module_of(cmd) << "]: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const InvalidInput& e) {
    err << "leakmip: error [" << module_of(cmd) << "]: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "leakmip: error [" << module_of(cmd) << "]: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace leakmip
