#pragma once

#include <Eigen/Dense>

#include "centrakit/graph.hpp"

// Dense kernels shared by the centrality and topology modules.
namespace centrakit {

/// Eigenvalues in descending order with matching eigenvector columns.
struct SymmetricSpectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

SymmetricSpectrum symmetric_spectrum(const Eigen::MatrixXd &m);

/// e^M for symmetric M via its eigendecomposition. Throws NumericalError when the largest
/// eigenvalue would overflow double range.
Eigen::MatrixXd symmetric_expm(const Eigen::MatrixXd &m);

/// S^(-1/2) W S^(-1/2) with S the diagonal strength matrix.
Eigen::MatrixXd reduced_adjacency(const Graph &g);

/// Matrix used by the walk-counting measures: A when unweighted, the reduced adjacency when
/// weighted.
Eigen::MatrixXd communicability_base(const Graph &g);

/// All-pairs shortest path lengths: hop counts when unweighted, Dijkstra over 1/w when
/// weighted. Unreachable pairs are +inf.
Eigen::MatrixXd shortest_path_lengths(const Graph &g);

/// Stationary distribution of P = S^-1 W, i.e. strength / total strength.
Eigen::VectorXd stationary_distribution(const Graph &g);

/// H(i, j): expected steps for a walk from i to first reach j, from the fundamental matrix
/// Z = (I - P + Pi)^-1. Diagonal is zero.
Eigen::MatrixXd mean_first_passage_times(const Graph &g);

} // namespace centrakit
