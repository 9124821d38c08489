#include "centrakit/generators.hpp"

#include <stdexcept>

namespace centrakit::gen {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;

Graph complete(std::size_t n) {
    Pairs pairs;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            pairs.emplace_back(i, j);
    return Graph::from_pairs(n, pairs);
}

Graph path(std::size_t n) {
    Pairs pairs;
    for (NodeId i = 0; i + 1 < n; ++i)
        pairs.emplace_back(i, i + 1);
    return Graph::from_pairs(n, pairs);
}

Graph cycle(std::size_t n) {
    if (n < 3)
        throw std::invalid_argument("cycle: need at least three nodes");
    Pairs pairs;
    for (NodeId i = 0; i < n; ++i)
        pairs.emplace_back(i, (i + 1) % n);
    return Graph::from_pairs(n, pairs);
}

Graph star(std::size_t n) {
    Pairs pairs;
    for (NodeId i = 1; i < n; ++i)
        pairs.emplace_back(0, i);
    return Graph::from_pairs(n, pairs);
}

Graph barbell(std::size_t k) { return clique_ring(2, k); }

Graph clique_ring(std::size_t count, std::size_t k) {
    Pairs pairs;
    for (std::size_t c = 0; c < count; ++c)
        for (NodeId i = 0; i < k; ++i)
            for (NodeId j = i + 1; j < k; ++j)
                pairs.emplace_back(c * k + i, c * k + j);
    if (count == 2) {
        pairs.emplace_back(k - 1, k);
    } else if (count > 2) {
        for (std::size_t c = 0; c < count; ++c)
            pairs.emplace_back(c * k + k - 1, ((c + 1) % count) * k);
    }
    return Graph::from_pairs(count * k, pairs);
}

Graph erdos_renyi_connected(std::size_t n, double p, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(p);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Pairs pairs;
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = i + 1; j < n; ++j)
                if (coin(rng))
                    pairs.emplace_back(i, j);
        Graph g = Graph::from_pairs(n, pairs);
        if (g.is_connected())
            return g;
    }
    throw std::runtime_error("erdos_renyi_connected: no connected sample in 10000 draws");
}

std::vector<Creation> random_creation_sequence(std::size_t n, std::mt19937_64 &rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<Creation> seq(n);
    for (auto &c : seq)
        c = coin(rng) ? Creation::Dominating : Creation::Isolated;
    seq.front() = Creation::Isolated;
    seq.back() = Creation::Dominating;
    return seq;
}

Graph random_connected(std::size_t n, double p, std::mt19937_64 &rng) {
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    Pairs pairs;
    for (NodeId i = 1; i < n; ++i) {
        std::uniform_int_distribution<NodeId> parent(0, i - 1);
        const NodeId j = parent(rng);
        adj[i][j] = adj[j][i] = true;
        pairs.emplace_back(j, i);
    }
    std::bernoulli_distribution coin(p);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (!adj[i][j] && coin(rng))
                pairs.emplace_back(i, j);
    return Graph::from_pairs(n, pairs);
}

} // namespace centrakit::gen
