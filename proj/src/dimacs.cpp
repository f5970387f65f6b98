#include "cliquelab/dimacs.hpp"

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliquelab {

namespace {

[[noreturn]] void fail(std::int64_t line, const std::string& what) {
  throw std::invalid_argument("dimacs: line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t parse_int(std::string_view tok, std::int64_t line, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Graph parse_dimacs(std::string_view text) {
  bool have_p = false;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::vector<Edge> edges;
  std::int64_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    if (pos == text.size() && line_no > 0) break;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto tok = split_tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "c") continue;
    if (tok[0] == "p") {
      if (have_p) fail(line_no, "second p line");
      if (tok.size() != 4 || tok[1] != "edge") fail(line_no, "expected 'p edge <n> <m>'");
      n = parse_int(tok[2], line_no, "vertex count");
      m = parse_int(tok[3], line_no, "edge count");
      if (n <= 0) fail(line_no, "vertex count must be positive");
      if (m < 0) fail(line_no, "edge count must be nonnegative");
      have_p = true;
      continue;
    }
    if (tok[0] == "e") {
      if (!have_p) fail(line_no, "edge line before the p line");
      if (tok.size() != 3) fail(line_no, "expected 'e <u> <v>'");
      const std::int64_t u = parse_int(tok[1], line_no, "endpoint");
      const std::int64_t v = parse_int(tok[2], line_no, "endpoint");
      if (u < 1 || u > n || v < 1 || v > n) fail(line_no, "endpoint out of range");
      if (u == v) fail(line_no, "self loop");
      edges.push_back(Edge{static_cast<std::int32_t>(u - 1), static_cast<std::int32_t>(v - 1)});
      continue;
    }
    fail(line_no, "unknown line type '" + std::string(tok[0]) + "'");
  }

  if (!have_p) throw std::invalid_argument("dimacs: missing p line");
  if (static_cast<std::int64_t>(edges.size()) != m) {
    throw std::invalid_argument("dimacs: p line declares " + std::to_string(m) +
                                " edges, found " + std::to_string(edges.size()));
  }
  // build_graph rejects duplicates (in either orientation) and validates n.
  return build_graph(static_cast<std::int32_t>(n), std::move(edges));
}

std::string emit_dimacs(const Graph& graph, std::span<const std::string> comments) {
  std::string out;
  for (const auto& comment : comments) {
    out += "c";
    if (!comment.empty()) {
      out += ' ';
      out += comment;
    }
    out += '\n';
  }
  out += "p edge " + std::to_string(graph.vertex_count()) + ' ' +
         std::to_string(graph.edge_count()) + '\n';
  for (const auto& e : graph.edges()) {
    out += "e " + std::to_string(e.u + 1) + ' ' + std::to_string(e.v + 1) + '\n';
  }
  return out;
}

}  // namespace cliquelab
