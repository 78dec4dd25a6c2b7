#pragma once

#include <cstdint>

#include "qosketch/graph.hpp"

namespace qosketch {

/// G(n, p): each pair independently an edge.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Uniform-ish d-regular graph via the pairing model with restarts.
/// Requires n*d even and d < n.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

/// Barabasi-Albert preferential attachment: each new node attaches m edges.
Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace qosketch
