#pragma once

#include <span>
#include <string>
#include <string_view>

#include "cliquelab/graph.hpp"

namespace cliquelab {

// DIMACS col text: "c ..." comment lines, exactly one "p edge <n> <m>" line,
// then one "e <u> <v>" line per edge with 1-based endpoints. Parsing is
// strict: unknown line types, a missing or repeated p line, out-of-range
// endpoints, self loops, duplicate edges, and an edge count that disagrees
// with the p line all raise errors naming the offending line.
Graph parse_dimacs(std::string_view text);

// Canonical form: the given comments first, then the p line, then edges
// sorted ascending, LF line endings. parse_dimacs(emit_dimacs(g)) == g.
std::string emit_dimacs(const Graph& graph, std::span<const std::string> comments = {});

}  // namespace cliquelab
