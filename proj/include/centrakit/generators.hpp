#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "centrakit/graph.hpp"

// Named small graphs and random families used by tests, benchmarks and examples.
namespace centrakit::gen {

Graph complete(std::size_t n);
Graph path(std::size_t n);
Graph cycle(std::size_t n);
/// Star with n nodes: centre 0, leaves 1..n-1.
Graph star(std::size_t n);
/// Two K_k cliques (nodes 0..k-1 and k..2k-1) joined by the edge (k-1, k).
Graph barbell(std::size_t k);
/// `count` cliques of size k, clique c joined to clique c+1 (mod count) by one edge.
Graph clique_ring(std::size_t count, std::size_t k);

/// G(n, p) resampled until connected.
Graph erdos_renyi_connected(std::size_t n, double p, std::mt19937_64 &rng);

/// Uniformly random creation sequence of length n whose last entry is Dominating.
std::vector<Creation> random_creation_sequence(std::size_t n, std::mt19937_64 &rng);

/// Random connected graph on n nodes: random spanning tree plus each other pair with prob p.
Graph random_connected(std::size_t n, double p, std::mt19937_64 &rng);

} // namespace centrakit::gen
