#include "eaqc/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "eaqc/error.hpp"

namespace eaqc {

std::vector<double> Ensemble::probs() const {
    std::vector<double> p;
    p.reserve(items.size());
    for (const auto& it : items) p.push_back(it.prob);
    return p;
}

std::vector<std::size_t> Ensemble::support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i].prob > 0.0) s.push_back(i);
    return s;
}

std::vector<Violation> validate(const Ensemble& e) {
    std::vector<Violation> out;
    auto report = [&](ViolationKind kind, std::optional<std::size_t> index, std::string msg) {
        out.push_back({kind, index, std::move(msg)});
    };

    if (e.dimA < 1 || e.dimC < 1) report(ViolationKind::Dimension, std::nullopt, "dimA and dimC must be positive");
    if (e.items.empty()) {
        report(ViolationKind::Empty, std::nullopt, "ensemble has no states");
        return out;
    }

    std::set<std::string> labels;
    double total = 0.0;
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        const auto& it = e.items[i];
        std::ostringstream where;
        where << "state " << i << " ('" << it.label << "')";

        if (!labels.insert(it.label).second)
            report(ViolationKind::DuplicateLabel, i, where.str() + ": duplicate label");
        if (!(it.prob >= 0.0) || !std::isfinite(it.prob))
            report(ViolationKind::NegativeProbability, i, where.str() + ": probability must be non-negative");
        total += it.prob;

        if (static_cast<std::size_t>(it.psi.size()) != e.dimA) {
            report(ViolationKind::Dimension, i, where.str() + ": psi has wrong dimension");
        } else if (std::abs(it.psi.norm() - 1.0) > kStateTol) {
            std::ostringstream os;
            os << where.str() << ": psi norm " << it.psi.norm() << " is not 1";
            report(ViolationKind::Norm, i, os.str());
        }
        if (static_cast<std::size_t>(it.sigma.size()) != e.dimC) {
            report(ViolationKind::Dimension, i, where.str() + ": sigma has wrong dimension");
        } else if (std::abs(it.sigma.norm() - 1.0) > kStateTol) {
            std::ostringstream os;
            os << where.str() << ": sigma norm " << it.sigma.norm() << " is not 1";
            report(ViolationKind::Norm, i, os.str());
        }
    }
    if (std::abs(total - 1.0) > kProbTol) {
        std::ostringstream os;
        os.precision(12);
        os << "probabilities sum to " << total << ", expected 1";
        report(ViolationKind::ProbabilitySum, std::nullopt, os.str());
    }
    return out;
}

void require_valid(const Ensemble& e) {
    const auto v = validate(e);
    if (v.empty()) return;
    std::string msg = "invalid ensemble:";
    for (const auto& x : v) msg += "\n  " + x.message;
    throw ValidationError(msg);
}

Ensemble renormalized(Ensemble e) {
    double total = 0.0;
    for (const auto& it : e.items) total += it.prob;
    if (!(total > 0.0)) throw ValidationError("cannot renormalize: total probability is not positive");
    for (auto& it : e.items) it.prob /= total;
    return e;
}

CVector product_vector(const EnsembleItem& item) {
    const auto da = item.psi.size(), dc = item.sigma.size();
    CVector v(da * dc);
    for (Eigen::Index a = 0; a < da; ++a) v.segment(a * dc, dc) = item.psi(a) * item.sigma;
    return v;
}

SourceState source_state(const Ensemble& e, const DimensionCaps& caps) {
    require_valid(e);
    const std::size_t nx = e.size();
    const std::size_t block = e.dimA * e.dimC;
    const std::size_t total = nx * block;
    if (total > caps.max_matrix_side) {
        std::ostringstream os;
        os << "source state side " << total << " exceeds cap " << caps.max_matrix_side;
        throw DimensionLimitError(os.str());
    }
    const auto b = static_cast<Eigen::Index>(block);
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t x = 0; x < nx; ++x) {
        const CVector v = product_vector(e.items[x]);
        m.block(static_cast<Eigen::Index>(x) * b, static_cast<Eigen::Index>(x) * b, b, b) =
            e.items[x].prob * (v * v.adjoint());
    }
    SubsystemLayout layout({{"X", nx}, {"A", e.dimA}, {"C", e.dimC}});
    return {DensityMatrix::trusted(std::move(layout), std::move(m)), true};
}

DensityMatrix reduced(const Ensemble& e, Keep keep) {
    require_valid(e);
    SubsystemLayout layout;
    std::size_t d = 0;
    switch (keep) {
        case Keep::A: layout = SubsystemLayout("A", e.dimA); d = e.dimA; break;
        case Keep::C: layout = SubsystemLayout("C", e.dimC); d = e.dimC; break;
        case Keep::AC: layout = SubsystemLayout({{"A", e.dimA}, {"C", e.dimC}}); d = e.dimA * e.dimC; break;
    }
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& it : e.items) {
        if (it.prob <= 0.0) continue;
        const CVector v = keep == Keep::A ? it.psi : keep == Keep::C ? it.sigma : product_vector(it);
        m += it.prob * (v * v.adjoint());
    }
    return DensityMatrix::trusted(std::move(layout), std::move(m));
}

namespace {

CVector kron(const CVector& a, const CVector& b) {
    CVector v(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
    return v;
}

std::size_t checked_pow(std::size_t base, std::size_t n, std::size_t cap, const char* what) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (base != 0 && r > cap / base) {
            std::ostringstream os;
            os << what << " " << base << "^" << n << " exceeds cap " << cap;
            throw DimensionLimitError(os.str());
        }
        r *= base;
    }
    return r;
}

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
    if (labels.empty())
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    if (labels.size() != n) throw UsageError("label count does not match state count");
    return labels;
}

}  // namespace

Ensemble tensor_power(const Ensemble& e, std::size_t n, const DimensionCaps& caps) {
    require_valid(e);
    if (n == 0) throw UsageError("tensor_power: n must be positive");
    checked_pow(e.size(), n, caps.max_sequences, "sequence count");
    checked_pow(e.dimA, n, caps.max_vector_entries, "dimension");
    checked_pow(e.dimC, n, caps.max_vector_entries, "dimension");

    Ensemble out = e;
    for (std::size_t k = 1; k < n; ++k) {
        Ensemble next;
        next.dimA = out.dimA * e.dimA;
        next.dimC = out.dimC * e.dimC;
        next.items.reserve(out.size() * e.size());
        for (const auto& prefix : out.items)
            for (const auto& it : e.items)
                next.items.push_back({prefix.label + "," + it.label, prefix.prob * it.prob,
                                      kron(prefix.psi, it.psi), kron(prefix.sigma, it.sigma)});
        out = std::move(next);
    }
    std::set<std::string> seen;
    for (const auto& it : out.items)
        if (!seen.insert(it.label).second)
            throw LabelError("tensor_power: labels containing ',' produced a collision ('" + it.label + "')");
    return out;
}

Ensemble make_blind(const std::vector<CVector>& states, const std::vector<double>& probs,
                    std::vector<std::string> labels) {
    if (states.empty() || states.size() != probs.size()) throw UsageError("make_blind: states and probs must match");
    labels = default_labels(states.size(), std::move(labels));
    Ensemble e;
    e.dimA = static_cast<std::size_t>(states.front().size());
    e.dimC = 1;
    for (std::size_t i = 0; i < states.size(); ++i)
        e.items.push_back({labels[i], probs[i], states[i], CVector::Ones(1)});
    require_valid(e);
    return e;
}

Ensemble make_visible(const std::vector<CVector>& states, const std::vector<double>& probs,
                      std::vector<std::string> labels) {
    if (states.empty() || states.size() != probs.size())
        throw UsageError("make_visible: states and probs must match");
    labels = default_labels(states.size(), std::move(labels));
    Ensemble e;
    e.dimA = static_cast<std::size_t>(states.front().size());
    e.dimC = states.size();
    for (std::size_t i = 0; i < states.size(); ++i) {
        CVector s = CVector::Zero(static_cast<Eigen::Index>(e.dimC));
        s(static_cast<Eigen::Index>(i)) = 1.0;
        e.items.push_back({labels[i], probs[i], states[i], std::move(s)});
    }
    require_valid(e);
    return e;
}

Ensemble apply_unitary_ac(const Ensemble& e, const CMatrix& unitary) {
    require_valid(e);
    const auto d = static_cast<Eigen::Index>(e.dimA * e.dimC);
    if (unitary.rows() != d || unitary.cols() != d)
        throw UsageError("pre-unitary must be square of side dimA*dimC");
    if (!is_isometry(unitary)) throw UsageError("pre-unitary is not unitary");

    Ensemble out = e;
    const auto da = static_cast<Eigen::Index>(e.dimA), dc = static_cast<Eigen::Index>(e.dimC);
    for (auto& it : out.items) {
        const CVector v = unitary * product_vector(it);
        CMatrix m(da, dc);
        for (Eigen::Index a = 0; a < da; ++a)
            for (Eigen::Index c = 0; c < dc; ++c) m(a, c) = v(a * dc + c);
        Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        if (s.size() > 1 && s(1) > 1e-9)
            throw UsageError("pre-unitary entangles A and C for state '" + it.label + "'");
        it.psi = svd.matrixU().col(0) * s(0);
        it.sigma = svd.matrixV().col(0).conjugate();
        it.psi.normalize();
        it.sigma.normalize();
    }
    return out;
}

CMatrix controlled_shift(std::size_t dimA, std::size_t dimC) {
    const auto d = static_cast<Eigen::Index>(dimA * dimC);
    CMatrix u = CMatrix::Zero(d, d);
    for (std::size_t a = 0; a < dimA; ++a)
        for (std::size_t c = 0; c < dimC; ++c)
            u(static_cast<Eigen::Index>(a * dimC + (c + a) % dimC), static_cast<Eigen::Index>(a * dimC + c)) = 1.0;
    return u;
}

}  // namespace eaqc
