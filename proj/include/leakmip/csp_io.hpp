#pragma once

// CSP files:
//
//   csp <n> <sigma> <k>
//   con <v1> ... <vk> : <t1> <t2> ...
//
// where each t is a length-k base-sigma string (digits 0-9 then a-z).
//
// Label cover files:
//
//   labelcover <|L|> <|R|> <|Sigma_L|> <|Sigma_R|>
//   proj
//   e <u> <v> : <phi(0)> <phi(1)> ...

#include <sstream>
#include <string>

#include "leakmip/csp.hpp"
#include "leakmip/text_io.hpp"

namespace leakmip {

inline constexpr std::size_t kMaxFileAlphabet = 36;

inline char tuple_digit(std::size_t d) { return d < 10 ? char('0' + d) : char('a' + (d - 10)); }

inline std::size_t tuple_digit_value(char ch, std::size_t line) {
  if (ch >= '0' && ch <= '9') return std::size_t(ch - '0');
  if (ch >= 'a' && ch <= 'z') return std::size_t(ch - 'a' + 10);
  throw InvalidInput(std::string("bad tuple digit '") + ch + "'", line);
}

inline CspInstance load_csp(const std::string& source) {
  using text::parse_u64;
  const auto lines = text::tokenize(source);
  if (lines.empty()) throw InvalidInput("empty csp file");
  const auto& head = lines.front();
  if (head.tokens[0] != "csp" || head.tokens.size() != 4)
    throw InvalidInput("expected header 'csp <n> <sigma> <k>'", head.number);
  const std::size_t n = parse_u64(head.tokens[1], head.number, "variable count");
  const std::size_t sigma = parse_u64(head.tokens[2], head.number, "alphabet size");
  const std::size_t k = parse_u64(head.tokens[3], head.number, "arity");
  if (sigma == 0 || sigma > kMaxFileAlphabet) throw InvalidInput("alphabet size must be in 1..36", head.number);
  if (k == 0 || k > 16) throw InvalidInput("arity must be in 1..16", head.number);

  std::vector<Constraint> cons;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens[0] != "con") throw InvalidInput("expected 'con' line", l.number);
    if (l.tokens.size() < k + 2 || l.tokens[k + 1] != ":")
      throw ShapeMismatch("constraint needs " + std::to_string(k) + " variables followed by ':'", l.number);
    Constraint c;
    for (std::size_t j = 1; j <= k; ++j) {
      auto v = parse_u64(l.tokens[j], l.number, "variable");
      if (v >= n) throw InvalidInput("variable " + std::to_string(v) + " out of range", l.number);
      c.scope.push_back(v);
    }
    for (std::size_t j = k + 2; j < l.tokens.size(); ++j) {
      const auto& t = l.tokens[j];
      if (t.size() != k) throw ShapeMismatch("tuple '" + t + "' must have " + std::to_string(k) + " digits", l.number);
      std::uint64_t code = 0;
      for (char ch : t) {
        auto d = tuple_digit_value(ch, l.number);
        if (d >= sigma) throw InvalidInput("tuple digit outside the alphabet in '" + t + "'", l.number);
        code = code * sigma + d;
      }
      c.allowed.push_back(code);
    }
    cons.push_back(std::move(c));
  }
  if (cons.empty()) throw InvalidInput("csp needs at least one constraint", head.number);
  try {
    return CspInstance(n, sigma, k, std::move(cons));
  } catch (const ShapeMismatch& e) {
    throw ShapeMismatch(e.what(), head.number);
  } catch (const InvalidInput& e) {
    throw InvalidInput(e.what(), head.number);
  }
}

inline CspInstance load_csp_file(const std::string& path) { return load_csp(text::read_file(path)); }

inline std::string save_csp(const CspInstance& c) {
  if (c.alphabet_size() > kMaxFileAlphabet) throw InvalidInput("alphabet too large for the text format");
  std::ostringstream out;
  out << "csp " << c.num_vars() << ' ' << c.alphabet_size() << ' ' << c.arity() << '\n';
  for (const auto& con : c.constraints()) {
    out << "con";
    for (auto v : con.scope) out << ' ' << v;
    out << " :";
    for (auto code : con.allowed) {
      out << ' ';
      for (auto d : c.decode(code)) out << tuple_digit(d);
    }
    out << '\n';
  }
  return out.str();
}

inline LabelCover load_label_cover(const std::string& source) {
  using text::parse_u64;
  const auto lines = text::tokenize(source);
  if (lines.empty()) throw InvalidInput("empty label cover file");
  const auto& head = lines.front();
  if (head.tokens[0] != "labelcover" || head.tokens.size() != 5)
    throw InvalidInput("expected header 'labelcover <L> <R> <sigmaL> <sigmaR>'", head.number);
  const std::size_t nl = parse_u64(head.tokens[1], head.number, "left vertex count");
  const std::size_t nr = parse_u64(head.tokens[2], head.number, "right vertex count");
  const std::size_t sl = parse_u64(head.tokens[3], head.number, "left alphabet");
  const std::size_t sr = parse_u64(head.tokens[4], head.number, "right alphabet");
  if (sl == 0 || sl > 4096) throw InvalidInput("left alphabet must be in 1..4096", head.number);
  std::vector<LabelCoverEdge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() == 1 && l.tokens[0] == "proj") continue;
    if (l.tokens[0] != "e") throw InvalidInput("expected 'e <u> <v> : ...' line", l.number);
    if (l.tokens.size() != 4 + sl || l.tokens[3] != ":")
      throw ShapeMismatch("edge line needs 'e <u> <v> :' and " + std::to_string(sl) + " projection values", l.number);
    LabelCoverEdge e;
    e.left = parse_u64(l.tokens[1], l.number, "left vertex");
    e.right = parse_u64(l.tokens[2], l.number, "right vertex");
    if (e.left >= nl || e.right >= nr) throw InvalidInput("edge references unknown vertex", l.number);
    for (std::size_t j = 4; j < l.tokens.size(); ++j) {
      auto p = parse_u64(l.tokens[j], l.number, "projection value");
      if (p >= sr) throw InvalidInput("projection value outside the right alphabet", l.number);
      e.projection.push_back(p);
    }
    edges.push_back(std::move(e));
  }
  if (edges.empty()) throw InvalidInput("label cover has no edges", head.number);
  try {
    return LabelCover(nl, nr, sl, sr, std::move(edges));
  } catch (const InvalidInput& e) {
    throw InvalidInput(e.what(), head.number);
  }
}

inline LabelCover load_label_cover_file(const std::string& path) { return load_label_cover(text::read_file(path)); }

inline std::string save_label_cover(const LabelCover& lc) {
  std::ostringstream out;
  out << "labelcover " << lc.left_count() << ' ' << lc.right_count() << ' ' << lc.left_alphabet() << ' '
      << lc.right_alphabet() << "\nproj\n";
  for (const auto& e : lc.edges()) {
    out << "e " << e.left << ' ' << e.right << " :";
    for (auto p : e.projection) out << ' ' << p;
    out << '\n';
  }
  return out.str();
}

}  // namespace leakmip
