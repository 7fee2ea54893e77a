#include "eaqc/schumacher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "eaqc/error.hpp"
#include "eaqc/rates.hpp"

namespace eaqc {

namespace {

// Neumaier's compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

std::size_t ipow(std::size_t base, std::size_t n) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= base;
    return r;
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

std::size_t CodeSpace::block_dim() const { return ipow(dim_a, n); }

std::vector<std::size_t> CodeSpace::digits(std::size_t flat) const {
    std::vector<std::size_t> d(n);
    for (std::size_t i = n; i-- > 0;) {
        d[i] = flat % dim_a;
        flat /= dim_a;
    }
    return d;
}

CVector CodeSpace::basis_vector(std::size_t k) const {
    CVector v = CVector::Ones(1);
    for (std::size_t digit : digits(indices.at(k))) {
        const CVector col = eigenbasis.col(static_cast<Eigen::Index>(digit));
        CVector next(v.size() * col.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * col.size(), col.size()) = v(i) * col;
        v = std::move(next);
    }
    return v;
}

CodeSpace build_code_space(const Ensemble& e, std::size_t n, double rate, const DimensionCaps& caps) {
    require_valid(e);
    if (!is_blind(e)) throw UsageError("the compression simulator only handles blind sources");
    if (n == 0) throw UsageError("blocklength n must be positive");
    if (!(rate >= 0.0)) throw UsageError("rate Q must be non-negative");
    const double log_dim = static_cast<double>(n) * std::log2(static_cast<double>(e.dimA));
    if (log_dim > caps.max_block_log2_dim + 1e-12) {
        std::ostringstream os;
        os << "n=" << n << ": block dimension 2^" << log_dim << " exceeds cap 2^" << caps.max_block_log2_dim
           << "; lower n";
        throw DimensionLimitError(os.str());
    }

    CodeSpace cs;
    cs.n = n;
    cs.rate = rate;
    cs.dim_a = e.dimA;
    const EigenSystem es = eig_hermitian(reduced(e, Keep::A));
    cs.eigenvalues = es.values;
    cs.eigenbasis = es.vectors;

    const std::size_t full = cs.block_dim();
    const double allowed = std::floor(std::exp2(static_cast<double>(n) * rate) + 1e-9);
    cs.rank = allowed >= static_cast<double>(full) ? full : std::max<std::size_t>(1, static_cast<std::size_t>(allowed));

    // Weights depend only on how often each eigenvalue occurs, so equal
    // multisets give bit-identical weights and ties fall back to index order.
    std::vector<double> weight(full);
    std::vector<std::size_t> counts(e.dimA);
    for (std::size_t flat = 0; flat < full; ++flat) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t d : cs.digits(flat)) ++counts[d];
        double w = 1.0;
        for (std::size_t k = 0; k < e.dimA; ++k)
            if (counts[k] > 0) w *= std::pow(cs.eigenvalues(static_cast<Eigen::Index>(k)), static_cast<double>(counts[k]));
        weight[flat] = w;
    }
    std::vector<std::size_t> order(full);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

    cs.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cs.rank));
    for (std::size_t idx : cs.indices) cs.weights.push_back(weight[idx]);
    cs.failure_index = cs.indices.front();
    return cs;
}

double simulate_fidelity(const Ensemble& e, const CodeSpace& cs, const DimensionCaps& caps) {
    require_valid(e);
    if (e.dimA != cs.dim_a) throw UsageError("code space was built for a different source dimension");
    const std::vector<std::size_t> support = e.support();
    const std::size_t k = support.size();
    const std::size_t n = cs.n;

    std::size_t sequences = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (sequences > caps.max_sequences / k) {
            std::ostringstream os;
            os << "n=" << n << ": " << k << "^" << n << " sequences exceed cap " << caps.max_sequences << "; lower n";
            throw DimensionLimitError(os.str());
        }
        sequences *= k;
    }

    // coef[s][d] = <u_d | psi_s> in the single-copy eigenbasis.
    std::vector<CVector> coef;
    for (std::size_t s : support) coef.push_back(cs.eigenbasis.adjoint() * e.items[s].psi);

    const std::size_t rank = cs.rank;
    // A full-rank code space is the whole block space: every state is kept.
    const bool full_space = rank == cs.block_dim();
    std::vector<std::vector<std::size_t>> code_digits(rank);
    for (std::size_t c = 0; c < rank; ++c) code_digits[c] = cs.digits(cs.indices[c]);
    // The failure state is code vector 0.

    // Depth-first walk over x^n; level i holds amplitudes <code_c | psi_{x_1..x_i}>
    // restricted to the first i factors.
    std::vector<std::vector<cplx>> partial(n + 1, std::vector<cplx>(rank, cplx(1.0)));
    std::vector<double> prob(n + 1, 1.0);
    std::vector<std::size_t> choice(n, 0);
    CompensatedSum total;

    std::size_t depth = 0;
    while (true) {
        if (depth == n) {
            double ps = 1.0;
            if (!full_space) {
                ps = 0.0;
                for (std::size_t c = 0; c < rank; ++c) ps += std::norm(partial[n][c]);
                ps = std::min(ps, 1.0);
            }
            const double cf = std::norm(partial[n][0]);
            const double f = std::sqrt(std::max(ps * ps + (1.0 - ps) * cf, 0.0));
            total.add(prob[n] * std::min(f, 1.0));
            // Backtrack to the next unexplored branch.
            while (depth > 0 && ++choice[depth - 1] >= k) choice[--depth] = 0;
            if (depth == 0) break;
            --depth;
        }
        const std::size_t s = choice[depth];
        prob[depth + 1] = prob[depth] * e.items[support[s]].prob;
        for (std::size_t c = 0; c < rank; ++c)
            partial[depth + 1][c] = partial[depth][c] * coef[s](static_cast<Eigen::Index>(code_digits[c][depth]));
        ++depth;
    }
    return std::clamp(total.value(), 0.0, 1.0);
}

std::vector<CurvePoint> fidelity_curve(const Ensemble& e, const std::vector<std::size_t>& n_list, double rate,
                                       const DimensionCaps& caps) {
    std::vector<CurvePoint> out;
    for (std::size_t n : n_list) {
        CurvePoint p;
        p.n = n;
        p.rate = rate;
        try {
            p.fidelity = simulate_fidelity(e, build_code_space(e, n, rate, caps), caps);
        } catch (const DimensionLimitError& err) {
            p.error = err.what();
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "n,Q,fidelity\n";
    char buf[128];
    for (const auto& p : curve) {
        if (!p.fidelity) continue;
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.12f\n", p.n, p.rate, *p.fidelity);
        out += buf;
    }
    return out;
}

double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw UsageError("spearman: need two equal-length series");
    const auto rx = average_ranks(xs), ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace eaqc
