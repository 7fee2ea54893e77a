#pragma once

// Dense linear algebra on small labelled multipartite quantum systems:
// pure states, density matrices, partial traces, spectra, entropy and fidelity.
// All entropies are in bits.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eaqc {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kStateTol = 1e-9;

struct DimensionCaps {
    std::size_t max_vector_entries = std::size_t{1} << 16;
    std::size_t max_matrix_side = std::size_t{1} << 13;
    // Number of x^n sequences enumerated by the finite-blocklength simulator.
    std::size_t max_sequences = 200000;
    // log2 of the blocklength Hilbert space dimension dimA^n in the simulator.
    double max_block_log2_dim = 14.0;
};

struct Subsystem {
    std::string label;
    std::size_t dim = 1;

    bool operator==(const Subsystem&) const = default;
};

/// Ordered list of labelled tensor factors. Labels are unique and every
/// dimension is at least one; the empty layout describes a scalar (dim 1).
class SubsystemLayout {
public:
    SubsystemLayout() = default;
    explicit SubsystemLayout(std::vector<Subsystem> parts);
    SubsystemLayout(std::string label, std::size_t dim);

    const std::vector<Subsystem>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    std::size_t total_dim() const { return total_dim_; }
    std::optional<std::size_t> index_of(std::string_view label) const;
    std::vector<std::string> labels() const;

    /// Layout of the tensor product; throws LabelError on a repeated label.
    SubsystemLayout concat(const SubsystemLayout& other) const;

    bool operator==(const SubsystemLayout& other) const { return parts_ == other.parts_; }

private:
    std::vector<Subsystem> parts_;
    std::size_t total_dim_ = 1;
};

class PureState {
public:
    /// Validates dimension and unit norm (within kStateTol).
    PureState(SubsystemLayout layout, CVector amplitudes);

    const SubsystemLayout& layout() const { return layout_; }
    const CVector& amplitudes() const { return amps_; }
    std::size_t dim() const { return layout_.total_dim(); }

private:
    SubsystemLayout layout_;
    CVector amps_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity (all within kStateTol).
    DensityMatrix(SubsystemLayout layout, CMatrix entries);
    /// Rank-one projector onto a pure state.
    explicit DensityMatrix(const PureState& psi);

    /// Skips validation. For results of operations that preserve the state
    /// invariants by construction (partial traces, mixtures of states).
    static DensityMatrix trusted(SubsystemLayout layout, CMatrix entries);

    const SubsystemLayout& layout() const { return layout_; }
    const CMatrix& matrix() const { return m_; }
    std::size_t dim() const { return layout_.total_dim(); }

private:
    struct Unchecked {};
    DensityMatrix(Unchecked, SubsystemLayout layout, CMatrix entries);

    SubsystemLayout layout_;
    CMatrix m_;
};

struct EigenSystem {
    Eigen::VectorXd values;  // descending
    CMatrix vectors;         // orthonormal columns matching values
};

// Construction helpers.
PureState basis_state(std::string label, std::size_t dim, std::size_t index);
PureState make_pure(std::string label, CVector amplitudes);
DensityMatrix maximally_mixed(SubsystemLayout layout);

PureState tensor(const PureState& a, const PureState& b, const DimensionCaps& caps = {});
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, const DimensionCaps& caps = {});

/// Reduced state on `keep` (kept in the original layout order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep);
/// Reduced state of a pure state without materialising the full projector.
DensityMatrix partial_trace(const PureState& psi, std::span<const std::string> keep);
DensityMatrix partial_trace(const PureState& psi, std::initializer_list<std::string> keep);

/// Raw Hermitian eigendecomposition, eigenvalues sorted descending, no clamping.
EigenSystem hermitian_eigen(const CMatrix& m);

/// Spectrum of a state. Eigenvalues in [-kStateTol, 0) are set to zero and
/// values above one are set to one; anything more negative throws NotAStateError.
EigenSystem eig_hermitian(const DensityMatrix& rho);

/// -sum p log2 p over the positive entries.
double shannon_entropy(std::span<const double> probs);
double shannon_entropy(const Eigen::VectorXd& probs);

double von_neumann_entropy(const DensityMatrix& rho);

/// Root fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
double fidelity(const PureState& psi, const DensityMatrix& sigma);
double fidelity(const PureState& psi, const PureState& phi);

bool is_isometry(const CMatrix& v, double tol = 1e-8);

/// V|psi>, resp. V rho V^dagger, with the output described by `out_layout`.
/// Throws ContractError when V is not an isometry or the shapes disagree.
PureState apply_isometry(const CMatrix& v, const PureState& input, SubsystemLayout out_layout);
DensityMatrix apply_isometry(const CMatrix& v, const DensityMatrix& input, SubsystemLayout out_layout);

/// Unitary exp(i H) for Hermitian H.
CMatrix unitary_from_generator(const CMatrix& hermitian);

}  // namespace eaqc
