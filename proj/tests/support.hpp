#pragma once

// Shared builders for the test suites: fixed-seed random states and the
// ensembles used across modules.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "eaqc/decomposition.hpp"
#include "eaqc/ensemble.hpp"

namespace testing_support {

using eaqc::CMatrix;
using eaqc::CVector;
using eaqc::Ensemble;
using eaqc::EnsembleItem;

inline const std::string kFixtureDir = EAQC_FIXTURE_DIR;

inline std::string fixture(const std::string& name) { return kFixtureDir + "/" + name; }

inline CVector ket(std::size_t dim, std::size_t i) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
}

inline CVector ket0() { return ket(2, 0); }
inline CVector ket1() { return ket(2, 1); }
inline CVector ket_plus() { return (ket0() + ket1()) / std::sqrt(2.0); }

inline CVector random_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
    return v.normalized();
}

inline CMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<CMatrix> qr(m);
    return qr.householderQ() * CMatrix::Identity(m.rows(), m.cols());
}

inline std::vector<double> random_probs(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(n);
    for (auto& v : p) v = u(rng);
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= s;
    return p;
}

/// The three two-qubit states |00>, |10>, |++> with weights 1/2-t, 1/2-t, 2t.
inline Ensemble discussion(double t) {
    Ensemble e;
    e.dimA = 2;
    e.dimC = 2;
    e.items = {{"00", 0.5 - t, ket0(), ket0()}, {"10", 0.5 - t, ket1(), ket0()}, {"++", 2 * t, ket_plus(), ket_plus()}};
    return e;
}

inline Ensemble blind_zero_plus() { return eaqc::make_blind({ket0(), ket_plus()}, {0.5, 0.5}, {"0", "+"}); }

/// Generic ensemble with dims up to 3x3 and up to 6 states.
inline Ensemble random_ensemble(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dim(1, 3), count(1, 6);
    Ensemble e;
    e.dimA = dim(rng);
    e.dimC = dim(rng);
    const std::size_t n = count(rng);
    const auto p = random_probs(n, rng);
    for (std::size_t i = 0; i < n; ++i)
        e.items.push_back({std::to_string(i), p[i], random_vector(e.dimA, rng), random_vector(e.dimC, rng)});
    return e;
}

/// Random blind ensemble drawn until it is irreducible.
inline Ensemble random_blind_irreducible(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dim(2, 3), count(2, 5);
    while (true) {
        const std::size_t d = dim(rng), n = count(rng);
        std::vector<CVector> states;
        for (std::size_t i = 0; i < n; ++i) states.push_back(random_vector(d, rng));
        Ensemble e = eaqc::make_blind(states, random_probs(n, rng));
        if (eaqc::is_irreducible(e)) return e;
    }
}

inline Ensemble random_visible(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dim(2, 3), count(2, 5);
    const std::size_t d = dim(rng), n = count(rng);
    std::vector<CVector> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back(random_vector(d, rng));
    return eaqc::make_visible(states, random_probs(n, rng));
}

struct Planted {
    Ensemble ensemble;
    std::vector<std::vector<std::size_t>> blocks;  // item indices per planted component
};

/// Union of 2-3 sub-ensembles whose product vectors are mutually orthogonal.
/// Orthogonality is placed either on A or on C, inside randomly rotated
/// coordinate blocks so that it is not visible in the computational basis.
inline Planted random_planted(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> nblocks(2, 3), bdim(1, 2), per_block(1, 3), coin(0, 1);
    const std::size_t k = nblocks(rng);
    const bool on_a = coin(rng) == 0;
    std::vector<std::size_t> sizes(k);
    for (auto& s : sizes) s = bdim(rng);
    const std::size_t split_dim = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    const std::size_t other_dim = bdim(rng);
    const CMatrix rot = random_unitary(split_dim, rng);

    Planted out;
    out.ensemble.dimA = on_a ? split_dim : other_dim;
    out.ensemble.dimC = on_a ? other_dim : split_dim;
    std::vector<CVector> split_states, other_states;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < k; ++b) {
        std::vector<std::size_t> members;
        const std::size_t m = per_block(rng);
        for (std::size_t j = 0; j < m; ++j) {
            CVector local = CVector::Zero(static_cast<Eigen::Index>(split_dim));
            local.segment(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(sizes[b])) =
                random_vector(sizes[b], rng);
            members.push_back(split_states.size());
            split_states.push_back(rot * local);
            other_states.push_back(random_vector(other_dim, rng));
        }
        offset += sizes[b];
        out.blocks.push_back(members);
    }
    const auto p = random_probs(split_states.size(), rng);
    for (std::size_t i = 0; i < split_states.size(); ++i) {
        EnsembleItem it{"s" + std::to_string(i), p[i], on_a ? split_states[i] : other_states[i],
                        on_a ? other_states[i] : split_states[i]};
        out.ensemble.items.push_back(std::move(it));
    }
    return out;
}

/// Planted partition as sorted sets of labels, for order-free comparison.
inline std::vector<std::vector<std::string>> label_partition(const Ensemble& e,
                                                             const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<std::vector<std::string>> out;
    for (const auto& b : blocks) {
        std::vector<std::string> labels;
        for (std::size_t i : b) labels.push_back(e.items[i].label);
        std::sort(labels.begin(), labels.end());
        out.push_back(labels);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::vector<std::string>> label_partition(const eaqc::Decomposition& d) {
    std::vector<std::vector<std::string>> out;
    for (const auto& c : d.components) {
        auto labels = c.labels;
        std::sort(labels.begin(), labels.end());
        out.push_back(labels);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace testing_support
