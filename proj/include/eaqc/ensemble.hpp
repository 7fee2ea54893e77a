#pragma once

// A source of product pure states {p(x), psi_x (x) sigma_x} where psi_x lives on
// the source system A and sigma_x on the encoder's side-information system C.
// The label register X stays classical: it is a list of probabilities and is
// only turned into a quantum register when a SourceState is requested.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eaqc/qstate.hpp"

namespace eaqc {

inline constexpr double kProbTol = 1e-9;

struct EnsembleItem {
    std::string label;
    double prob = 0.0;
    CVector psi;    // on A
    CVector sigma;  // on C
};

struct Ensemble {
    std::size_t dimA = 1;
    std::size_t dimC = 1;  // 1: trivial side information
    std::vector<EnsembleItem> items;

    std::size_t size() const { return items.size(); }
    std::vector<double> probs() const;
    /// Indices of items with strictly positive probability.
    std::vector<std::size_t> support() const;
};

enum class ViolationKind { Empty, Dimension, Norm, NegativeProbability, ProbabilitySum, DuplicateLabel };

struct Violation {
    ViolationKind kind;
    std::optional<std::size_t> index;
    std::string message;
};

std::vector<Violation> validate(const Ensemble& e);
/// Throws ValidationError listing every violation.
void require_valid(const Ensemble& e);
/// Rescales the probabilities to sum to one (the optional renormalize path).
Ensemble renormalized(Ensemble e);

/// |psi_x> (x) |sigma_x>.
CVector product_vector(const EnsembleItem& item);

/// omega^{XAC} with layout [X, A, C]; X is block-diagonal by construction.
struct SourceState {
    DensityMatrix state;
    bool x_classical = true;
};

SourceState source_state(const Ensemble& e, const DimensionCaps& caps = {});

enum class Keep { A, C, AC };

/// Reduced state of the source on A, C or AC, built directly from the items.
DensityMatrix reduced(const Ensemble& e, Keep keep);

/// n-fold power: items indexed by x^n (labels joined with ','), probabilities
/// multiplied, states tensored in order.
Ensemble tensor_power(const Ensemble& e, std::size_t n, const DimensionCaps& caps = {});

Ensemble make_blind(const std::vector<CVector>& states, const std::vector<double>& probs,
                    std::vector<std::string> labels = {});
/// sigma_x = |x> on a side system of dimension |X|.
Ensemble make_visible(const std::vector<CVector>& states, const std::vector<double>& probs,
                      std::vector<std::string> labels = {});

/// Applies a unitary on A (x) C to every item. Each image must again be a
/// product vector; an entangled image throws UsageError.
Ensemble apply_unitary_ac(const Ensemble& e, const CMatrix& unitary);

/// Generalised CNOT |a>|c> -> |a>|c + a mod dimC> with A as control.
CMatrix controlled_shift(std::size_t dimA, std::size_t dimC);

}  // namespace eaqc
