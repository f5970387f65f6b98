#pragma once

#include <cstdint>

#include "cliquelab/graph.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

// Uniform sample from the m-edge graphs on n labelled vertices, by Floyd's
// distinct-subset algorithm over pair indices. Pure function of (n, m, seed).
Graph sample_gnm(std::int32_t n, std::int64_t m, RngSeed seed);

}  // namespace cliquelab
