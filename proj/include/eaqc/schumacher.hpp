#pragma once

// Finite-blocklength Schumacher compression of a blind source without
// entanglement. The encoder measures {Pi, 1 - Pi}, where Pi projects onto the
// span of the floor(2^{nQ}) most probable eigenvector products of omega_A^{(x)n};
// on failure it substitutes a fixed state inside the code space. The decoder
// is the identity embedding, so the average fidelity is computed exactly by
// enumerating every x^n.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eaqc/ensemble.hpp"

namespace eaqc {

struct CodeSpace {
    std::size_t n = 1;
    double rate = 0.0;
    std::size_t rank = 1;
    std::size_t dim_a = 1;
    Eigen::VectorXd eigenvalues;  // single-copy omega_A, descending
    CMatrix eigenbasis;           // columns match eigenvalues
    // Selected eigenvector products as flat indices (first copy most
    // significant), in order of decreasing weight.
    std::vector<std::size_t> indices;
    std::vector<double> weights;
    std::size_t failure_index = 0;  // the highest-weight product

    std::size_t block_dim() const;
    /// Digits of a flat index, one per copy.
    std::vector<std::size_t> digits(std::size_t flat) const;
    /// The k-th code basis vector in the computational basis of A^n.
    CVector basis_vector(std::size_t k) const;
};

/// Throws UsageError for non-blind sources or negative rates and
/// DimensionLimitError when n log2(dimA) exceeds caps.max_block_log2_dim.
CodeSpace build_code_space(const Ensemble& e, std::size_t n, double rate, const DimensionCaps& caps = {});

/// Average fidelity sum_{x^n} p(x^n) F(psi_{x^n}, xi_{x^n}).
double simulate_fidelity(const Ensemble& e, const CodeSpace& cs, const DimensionCaps& caps = {});

struct CurvePoint {
    std::size_t n = 0;
    double rate = 0.0;
    std::optional<double> fidelity;
    std::string error;  // set when this n hit a cap
};

std::vector<CurvePoint> fidelity_curve(const Ensemble& e, const std::vector<std::size_t>& n_list, double rate,
                                       const DimensionCaps& caps = {});

/// Rows "n,Q,fidelity"; points without a fidelity are skipped.
std::string curve_csv(const std::vector<CurvePoint>& curve);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace eaqc
