#include "eaqc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "eaqc/error.hpp"

namespace eaqc {

namespace {

void check_vector_cap(std::size_t dim, const DimensionCaps& caps) {
    if (dim > caps.max_vector_entries) {
        std::ostringstream os;
        os << "vector dimension " << dim << " exceeds cap " << caps.max_vector_entries;
        throw DimensionLimitError(os.str());
    }
}

void check_matrix_cap(std::size_t dim, const DimensionCaps& caps) {
    if (dim > caps.max_matrix_side) {
        std::ostringstream os;
        os << "matrix side " << dim << " exceeds cap " << caps.max_matrix_side;
        throw DimensionLimitError(os.str());
    }
}

// full_index(k, t): position in the full space of kept multi-index k and
// traced multi-index t.
struct SplitIndex {
    SubsystemLayout kept;
    std::size_t traced_dim = 1;
    std::vector<std::size_t> table;  // row-major kept_dim x traced_dim

    std::size_t at(std::size_t k, std::size_t t) const { return table[k * traced_dim + t]; }
};

SplitIndex split_layout(const SubsystemLayout& layout, std::span<const std::string> keep) {
    if (keep.empty()) throw ContractError("partial_trace: keep set is empty");
    std::vector<bool> is_kept(layout.size(), false);
    for (const auto& label : keep) {
        auto idx = layout.index_of(label);
        if (!idx) throw LabelError("partial_trace: unknown label '" + label + "'");
        is_kept[*idx] = true;
    }

    std::vector<Subsystem> kept_parts;
    std::size_t traced_dim = 1;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        if (is_kept[i]) kept_parts.push_back(layout.parts()[i]);
        else traced_dim *= layout.parts()[i].dim;
    }

    SplitIndex s{SubsystemLayout(std::move(kept_parts)), traced_dim, {}};
    const std::size_t total = layout.total_dim();
    s.table.assign(total, 0);

    // Walk every full index once, splitting its digits into kept and traced parts.
    std::vector<std::size_t> digits(layout.size(), 0);
    for (std::size_t full = 0; full < total; ++full) {
        std::size_t k = 0, t = 0;
        for (std::size_t i = 0; i < layout.size(); ++i) {
            const std::size_t d = layout.parts()[i].dim;
            if (is_kept[i]) k = k * d + digits[i];
            else t = t * d + digits[i];
        }
        s.table[k * traced_dim + t] = full;
        for (std::size_t i = layout.size(); i-- > 0;) {
            if (++digits[i] < layout.parts()[i].dim) break;
            digits[i] = 0;
        }
    }
    return s;
}

double max_abs(const CMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Square root of a positive semidefinite matrix from its clamped spectrum.
CMatrix psd_sqrt(const EigenSystem& es) {
    Eigen::VectorXd roots = es.values.cwiseMax(0.0).cwiseSqrt();
    return es.vectors * roots.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

// Top eigenvector when the state is pure to working precision.
std::optional<CVector> pure_vector(const DensityMatrix& rho) {
    EigenSystem es = hermitian_eigen(rho.matrix());
    if (es.values.size() > 0 && es.values(0) >= 1.0 - 1e-12) return CVector(es.vectors.col(0));
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// SubsystemLayout

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> parts) : parts_(std::move(parts)) {
    std::set<std::string> seen;
    for (const auto& p : parts_) {
        if (p.dim < 1) throw ContractError("subsystem '" + p.label + "' has dimension 0");
        if (!seen.insert(p.label).second) throw LabelError("duplicate subsystem label '" + p.label + "'");
        total_dim_ *= p.dim;
    }
}

SubsystemLayout::SubsystemLayout(std::string label, std::size_t dim)
    : SubsystemLayout(std::vector<Subsystem>{{std::move(label), dim}}) {}

std::optional<std::size_t> SubsystemLayout::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < parts_.size(); ++i)
        if (parts_[i].label == label) return i;
    return std::nullopt;
}

std::vector<std::string> SubsystemLayout::labels() const {
    std::vector<std::string> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(p.label);
    return out;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
    std::vector<Subsystem> parts = parts_;
    parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
    return SubsystemLayout(std::move(parts));
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(SubsystemLayout layout, CVector amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != layout_.total_dim())
        throw ContractError("pure state: amplitude count does not match layout dimension");
    const double n = amps_.norm();
    if (std::abs(n - 1.0) > kStateTol) {
        std::ostringstream os;
        os << "pure state: norm " << n << " differs from 1";
        throw NotAStateError(os.str());
    }
}

DensityMatrix::DensityMatrix(Unchecked, SubsystemLayout layout, CMatrix entries)
    : layout_(std::move(layout)), m_(std::move(entries)) {}

DensityMatrix DensityMatrix::trusted(SubsystemLayout layout, CMatrix entries) {
    return DensityMatrix(Unchecked{}, std::move(layout), std::move(entries));
}

DensityMatrix::DensityMatrix(SubsystemLayout layout, CMatrix entries)
    : layout_(std::move(layout)), m_(std::move(entries)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (m_.rows() != d || m_.cols() != d)
        throw ContractError("density matrix: shape does not match layout dimension");
    if (max_abs(m_ - m_.adjoint()) > kStateTol) throw NotAStateError("density matrix: not Hermitian");
    if (std::abs(m_.trace() - cplx(1.0)) > kStateTol) throw NotAStateError("density matrix: trace differs from 1");
    EigenSystem es = hermitian_eigen(m_);
    if (d > 0 && es.values(d - 1) < -kStateTol) throw NotAStateError("density matrix: negative eigenvalue");
}

DensityMatrix::DensityMatrix(const PureState& psi)
    : layout_(psi.layout()), m_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

PureState basis_state(std::string label, std::size_t dim, std::size_t index) {
    if (index >= dim) throw ContractError("basis_state: index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(SubsystemLayout(std::move(label), dim), std::move(v));
}

PureState make_pure(std::string label, CVector amplitudes) {
    const auto d = static_cast<std::size_t>(amplitudes.size());
    return PureState(SubsystemLayout(std::move(label), d), std::move(amplitudes));
}

DensityMatrix maximally_mixed(SubsystemLayout layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    CMatrix m = CMatrix::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix::trusted(std::move(layout), std::move(m));
}

// ---------------------------------------------------------------------------
// Tensor products and partial traces

PureState tensor(const PureState& a, const PureState& b, const DimensionCaps& caps) {
    SubsystemLayout layout = a.layout().concat(b.layout());
    check_vector_cap(layout.total_dim(), caps);
    CVector out(static_cast<Eigen::Index>(layout.total_dim()));
    const auto db = b.amplitudes().size();
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
        out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
    return PureState(std::move(layout), std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b, const DimensionCaps& caps) {
    SubsystemLayout layout = a.layout().concat(b.layout());
    check_matrix_cap(layout.total_dim(), caps);
    const auto da = a.matrix().rows(), db = b.matrix().rows();
    CMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return DensityMatrix::trusted(std::move(layout), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
    const SplitIndex s = split_layout(rho.layout(), keep);
    const auto kd = static_cast<Eigen::Index>(s.kept.total_dim());
    CMatrix out = CMatrix::Zero(kd, kd);
    for (Eigen::Index i = 0; i < kd; ++i)
        for (Eigen::Index j = 0; j < kd; ++j) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < s.traced_dim; ++t)
                acc += rho.matrix()(static_cast<Eigen::Index>(s.at(i, t)), static_cast<Eigen::Index>(s.at(j, t)));
            out(i, j) = acc;
        }
    return DensityMatrix::trusted(s.kept, std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep) {
    std::vector<std::string> k(keep);
    return partial_trace(rho, std::span<const std::string>(k));
}

DensityMatrix partial_trace(const PureState& psi, std::span<const std::string> keep) {
    const SplitIndex s = split_layout(psi.layout(), keep);
    const auto kd = static_cast<Eigen::Index>(s.kept.total_dim());
    const auto td = static_cast<Eigen::Index>(s.traced_dim);
    CMatrix m(kd, td);
    for (Eigen::Index k = 0; k < kd; ++k)
        for (Eigen::Index t = 0; t < td; ++t) m(k, t) = psi.amplitudes()(static_cast<Eigen::Index>(s.at(k, t)));
    return DensityMatrix::trusted(s.kept, m * m.adjoint());
}

DensityMatrix partial_trace(const PureState& psi, std::initializer_list<std::string> keep) {
    std::vector<std::string> k(keep);
    return partial_trace(psi, std::span<const std::string>(k));
}

// ---------------------------------------------------------------------------
// Spectra, entropy, fidelity

EigenSystem hermitian_eigen(const CMatrix& m) {
    const CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw ConsistencyError("Hermitian eigensolver did not converge");
    const Eigen::Index d = h.rows();
    EigenSystem es{Eigen::VectorXd(d), CMatrix(d, d)};
    for (Eigen::Index i = 0; i < d; ++i) {
        es.values(i) = solver.eigenvalues()(d - 1 - i);
        es.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return es;
}

EigenSystem eig_hermitian(const DensityMatrix& rho) {
    EigenSystem es = hermitian_eigen(rho.matrix());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        double& v = es.values(i);
        if (v < -kStateTol) {
            std::ostringstream os;
            os << "eigenvalue " << v << " below tolerance; not a state";
            throw NotAStateError(os.str());
        }
        v = std::clamp(v, 0.0, 1.0);
    }
    return es;
}

double shannon_entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return std::max(h, 0.0);
}

double shannon_entropy(const Eigen::VectorXd& probs) {
    return shannon_entropy(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size())));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return shannon_entropy(eig_hermitian(rho).values);
}

double fidelity(const PureState& psi, const DensityMatrix& sigma) {
    if (!(psi.layout() == sigma.layout())) throw ContractError("fidelity: layout mismatch");
    const cplx v = psi.amplitudes().dot(sigma.matrix() * psi.amplitudes());
    return std::clamp(std::sqrt(std::max(v.real(), 0.0)), 0.0, 1.0);
}

double fidelity(const PureState& psi, const PureState& phi) {
    if (!(psi.layout() == phi.layout())) throw ContractError("fidelity: layout mismatch");
    return std::clamp(std::abs(psi.amplitudes().dot(phi.amplitudes())), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (!(rho.layout() == sigma.layout())) throw ContractError("fidelity: layout mismatch");

    // A pure argument reduces the trace norm to sqrt(<phi|other|phi>), which
    // avoids square roots of numerically-zero eigenvalues.
    if (auto phi = pure_vector(rho)) {
        const cplx v = phi->dot(sigma.matrix() * *phi);
        return std::clamp(std::sqrt(std::max(v.real(), 0.0)), 0.0, 1.0);
    }
    if (auto phi = pure_vector(sigma)) {
        const cplx v = phi->dot(rho.matrix() * *phi);
        return std::clamp(std::sqrt(std::max(v.real(), 0.0)), 0.0, 1.0);
    }

    const CMatrix prod = psd_sqrt(eig_hermitian(rho)) * psd_sqrt(eig_hermitian(sigma));
    Eigen::JacobiSVD<CMatrix> svd(prod);
    return std::clamp(svd.singularValues().sum(), 0.0, 1.0);
}

bool is_isometry(const CMatrix& v, double tol) {
    if (v.rows() < v.cols()) return false;
    const CMatrix gram = v.adjoint() * v;
    return max_abs(gram - CMatrix::Identity(v.cols(), v.cols())) <= tol;
}

namespace {

void check_isometry_shape(const CMatrix& v, std::size_t in_dim, const SubsystemLayout& out_layout) {
    if (static_cast<std::size_t>(v.cols()) != in_dim)
        throw ContractError("apply_isometry: input dimension does not match isometry columns");
    if (static_cast<std::size_t>(v.rows()) != out_layout.total_dim())
        throw ContractError("apply_isometry: output layout does not match isometry rows");
    if (!is_isometry(v)) throw ContractError("apply_isometry: matrix is not an isometry");
}

}  // namespace

PureState apply_isometry(const CMatrix& v, const PureState& input, SubsystemLayout out_layout) {
    check_isometry_shape(v, input.dim(), out_layout);
    return PureState(std::move(out_layout), v * input.amplitudes());
}

DensityMatrix apply_isometry(const CMatrix& v, const DensityMatrix& input, SubsystemLayout out_layout) {
    check_isometry_shape(v, input.dim(), out_layout);
    return DensityMatrix::trusted(std::move(out_layout), v * input.matrix() * v.adjoint());
}

CMatrix unitary_from_generator(const CMatrix& hermitian) {
    const EigenSystem es = hermitian_eigen(hermitian);
    Eigen::VectorXcd phases(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) phases(i) = std::polar(1.0, es.values(i));
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

}  // namespace eaqc
