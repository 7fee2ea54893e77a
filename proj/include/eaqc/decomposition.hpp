#pragma once

// Splitting an ensemble into irreducible components: maximal groups of states
// whose product vectors cannot be separated into mutually orthogonal subspaces.

#include <cstddef>
#include <string>
#include <vector>

#include "eaqc/ensemble.hpp"

namespace eaqc {

inline constexpr double kDefaultOrthoTol = 1e-10;

struct Component {
    std::size_t y = 0;
    std::vector<std::size_t> members;  // item indices, ascending
    std::vector<std::string> labels;   // labels of `members`
    double weight = 0.0;               // q(y)
    Ensemble sub;                      // members with conditional probabilities p(x|y)
};

struct Decomposition {
    std::vector<Component> components;
    // Items with zero probability. They take no part in the overlap graph and
    // are mapped to y = 0 when a Y register is appended.
    std::vector<std::size_t> zero_weight;
    double tolerance = kDefaultOrthoTol;

    std::size_t count() const { return components.size(); }
    /// y(x) for every item index.
    std::vector<std::size_t> assignment(std::size_t item_count) const;
    std::vector<double> weights() const;
};

/// adjacency[i][j] iff |<psi_i sigma_i|psi_j sigma_j>| > tol, for i != j with
/// both probabilities positive.
using Adjacency = std::vector<std::vector<bool>>;
Adjacency overlap_graph(const Ensemble& e, double tol = kDefaultOrthoTol);

/// Connected components of the overlap graph, ordered by smallest member label.
Decomposition irreducible_components(const Ensemble& e, double tol = kDefaultOrthoTol);

bool is_irreducible(const Ensemble& e, double tol = kDefaultOrthoTol);

/// Side system C -> C (x) Y with sigma'_x = sigma_x (x) |y(x)>. When there is
/// a single component Y is one-dimensional and the ensemble is unchanged.
Ensemble extend_with_y(const Ensemble& e, const Decomposition& d);

}  // namespace eaqc
