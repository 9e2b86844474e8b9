#pragma once

// Line tokenizer shared by the game and CSP readers.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "leakmip/error.hpp"

namespace leakmip::text {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

/// Splits into whitespace tokens, dropping `#` comments and blank lines.
inline std::vector<Line> tokenize(const std::string& source) {
  std::vector<Line> lines;
  std::istringstream in(source);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line line{number, {}};
    for (std::string tok; ls >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

inline std::uint64_t parse_u64(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidInput(std::string("expected non-negative integer for ") + what + ", got '" + tok + "'", line);
  try {
    return std::stoull(tok);
  } catch (const std::out_of_range&) {
    throw InvalidInput(std::string(what) + " out of range: '" + tok + "'", line);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace leakmip::text
