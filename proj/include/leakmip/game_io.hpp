#pragma once

// Line-oriented game files:
//
//   game <name> <xSize> <ySize> <aSize> <bSize>
//   dist
//   <xSize*ySize weights, row-major over (x, y)>
//   pred
//   <one line per (x, y): aSize*bSize bits row-major over (a, b)>
//
// Integer weights are normalized by their sum. Weights written as p/q are
// taken literally and must sum to exactly 1.

#include <sstream>
#include <string>
#include <vector>

#include "leakmip/game.hpp"
#include "leakmip/text_io.hpp"

namespace leakmip {

inline Game load_game(const std::string& source) {
  using text::parse_u64;
  const auto lines = text::tokenize(source);
  if (lines.empty()) throw InvalidInput("empty game file");
  const auto& head = lines.front();
  if (head.tokens[0] != "game" || head.tokens.size() != 6)
    throw InvalidInput("expected header 'game <name> <xSize> <ySize> <aSize> <bSize>'", head.number);
  const std::string name = head.tokens[1];
  const std::size_t xs = parse_u64(head.tokens[2], head.number, "xSize");
  const std::size_t ys = parse_u64(head.tokens[3], head.number, "ySize");
  const std::size_t as = parse_u64(head.tokens[4], head.number, "aSize");
  const std::size_t bs = parse_u64(head.tokens[5], head.number, "bSize");
  if (xs == 0 || ys == 0 || as == 0 || bs == 0) throw InvalidInput("alphabet sizes must be at least 1", head.number);
  if (xs * ys > (1u << 24) || xs * ys * as * bs > (1u << 28)) throw InvalidInput("game too large", head.number);

  std::size_t i = 1;
  if (i >= lines.size() || lines[i].tokens != std::vector<std::string>{"dist"})
    throw InvalidInput("expected 'dist' section", i < lines.size() ? lines[i].number : head.number);
  const std::size_t dist_line = lines[i].number;
  ++i;
  std::vector<std::string> weight_tokens;
  std::vector<std::size_t> weight_lines;
  while (i < lines.size() && lines[i].tokens[0] != "pred") {
    for (const auto& t : lines[i].tokens) {
      weight_tokens.push_back(t);
      weight_lines.push_back(lines[i].number);
    }
    ++i;
  }
  if (weight_tokens.size() != xs * ys)
    throw ShapeMismatch("dist section has " + std::to_string(weight_tokens.size()) + " weights, expected " +
                            std::to_string(xs * ys),
                        dist_line);

  std::vector<std::uint64_t> weights(xs * ys);
  bool fractional = false;
  for (const auto& t : weight_tokens) fractional |= t.find('/') != std::string::npos;
  if (!fractional) {
    for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = parse_u64(weight_tokens[k], weight_lines[k], "weight");
  } else {
    std::vector<Rational> probs;
    Rational sum = 0;
    BigInt lcd = 1;
    for (std::size_t k = 0; k < weight_tokens.size(); ++k) {
      Rational r;
      try {
        r = parse_rational(weight_tokens[k]);
      } catch (const InvalidInput& e) {
        throw InvalidInput(e.what(), weight_lines[k]);
      }
      if (r < 0) throw InvalidInput("negative weight", weight_lines[k]);
      sum += r;
      lcd = boost::multiprecision::lcm(lcd, BigInt(boost::multiprecision::denominator(r)));
      probs.push_back(r);
    }
    if (sum == 0) throw InvalidInput("zero total weight", dist_line);
    if (sum != 1) throw InvalidInput("fractional weights must sum to 1", dist_line);
    if (lcd > BigInt(kSaturated)) throw InvalidInput("weight denominators too large", dist_line);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      BigInt scaled = boost::multiprecision::numerator(probs[k]) * (lcd / boost::multiprecision::denominator(probs[k]));
      weights[k] = scaled.convert_to<std::uint64_t>();
    }
  }
  std::uint64_t total = 0;
  for (auto w : weights) {
    if (total > kSaturated - w) throw InvalidInput("total weight overflows 64 bits", dist_line);
    total += w;
  }
  if (total == 0) throw InvalidInput("zero total weight", dist_line);

  if (i >= lines.size()) throw InvalidInput("expected 'pred' section", lines.back().number);
  if (lines[i].tokens.size() != 1) throw InvalidInput("'pred' takes no arguments", lines[i].number);
  const std::size_t pred_line = lines[i].number;
  ++i;
  std::vector<std::uint8_t> pred;
  pred.reserve(xs * ys * as * bs);
  std::size_t rows = 0;
  for (; i < lines.size(); ++i, ++rows) {
    std::string bits;
    for (const auto& t : lines[i].tokens) bits += t;
    if (rows >= xs * ys) throw ShapeMismatch("too many predicate rows", lines[i].number);
    if (bits.size() != as * bs)
      throw ShapeMismatch("predicate row has " + std::to_string(bits.size()) + " bits, expected " +
                              std::to_string(as * bs),
                          lines[i].number);
    for (char c : bits) {
      if (c != '0' && c != '1') throw InvalidInput("predicate entries must be 0 or 1", lines[i].number);
      pred.push_back(c == '1');
    }
  }
  if (rows != xs * ys)
    throw ShapeMismatch("pred section has " + std::to_string(rows) + " rows, expected " + std::to_string(xs * ys),
                        pred_line);
  try {
    return Game(name, xs, ys, as, bs, std::move(weights), std::move(pred));
  } catch (const ShapeMismatch& e) {
    throw ShapeMismatch(e.what(), head.number);
  } catch (const InvalidInput& e) {
    throw InvalidInput(e.what(), head.number);
  }
}

inline Game load_game_file(const std::string& path) { return load_game(text::read_file(path)); }

inline std::string save_game(const Game& g) {
  std::ostringstream out;
  out << "game " << g.name() << ' ' << g.x_size() << ' ' << g.y_size() << ' ' << g.a_size() << ' ' << g.b_size()
      << "\ndist\n";
  for (std::size_t x = 0; x < g.x_size(); ++x) {
    for (std::size_t y = 0; y < g.y_size(); ++y) out << (y ? " " : "") << g.weight(x, y);
    out << '\n';
  }
  out << "pred\n";
  for (std::size_t x = 0; x < g.x_size(); ++x)
    for (std::size_t y = 0; y < g.y_size(); ++y) {
      for (std::size_t a = 0; a < g.a_size(); ++a)
        for (std::size_t b = 0; b < g.b_size(); ++b) out << (g.accepts(x, y, a, b) ? '1' : '0');
      out << '\n';
    }
  return out.str();
}

}  // namespace leakmip
