#include "eaqc/iepsilon.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "eaqc/error.hpp"
#include "eaqc/rates.hpp"

namespace eaqc {

namespace {

double entropy_psd(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    double h = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double v = solver.eigenvalues()(i);
        if (v > 0.0) h -= v * std::log2(v);
    }
    return std::max(h, 0.0);
}

// Support items with their product vectors, computed once per search.
struct PreparedSource {
    std::size_t dim_a = 1, dim_c = 1;
    std::vector<double> probs;
    std::vector<CVector> vectors;
};

PreparedSource prepare(const Ensemble& e) {
    PreparedSource s{e.dimA, e.dimC, {}, {}};
    for (std::size_t i : e.support()) {
        s.probs.push_back(e.items[i].prob);
        s.vectors.push_back(product_vector(e.items[i]));
    }
    return s;
}

ObjectiveValue evaluate(const PreparedSource& src, const CMatrix& v, std::size_t env_dim) {
    const auto da = static_cast<Eigen::Index>(src.dim_a);
    const auto cw = static_cast<Eigen::Index>(src.dim_c * env_dim);
    const auto ac = static_cast<Eigen::Index>(src.dim_a * src.dim_c);
    const auto dw = static_cast<Eigen::Index>(env_dim);

    CMatrix mixture = CMatrix::Zero(cw, cw);
    double conditional = 0.0, fid = 0.0;
    for (std::size_t x = 0; x < src.vectors.size(); ++x) {
        const CVector xi = v * src.vectors[x];
        // Rows index A^, columns index C^W.
        const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> by_a(xi.data(), da, cw);
        const CMatrix rho_a = by_a * by_a.adjoint();
        const CMatrix rho_cw = by_a.transpose() * by_a.conjugate();
        mixture += src.probs[x] * rho_cw;
        conditional += src.probs[x] * entropy_psd(rho_a);

        // Rows index A^C^, columns index W.
        const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> by_w(xi.data(), ac, dw);
        const double overlap = (src.vectors[x].adjoint() * by_w).norm();
        fid += src.probs[x] * std::min(overlap, 1.0);
    }
    return {std::max(entropy_psd(mixture) - conditional, 0.0), std::min(fid, 1.0)};
}

bool feasible(const ObjectiveValue& v, double eps) { return v.fidelity >= 1.0 - eps - kFeasibilitySlack; }

double penalized(const ObjectiveValue& v, double eps, double mu) {
    const double shortfall = std::max(0.0, (1.0 - eps) - v.fidelity);
    return v.information - mu * shortfall * shortfall;
}

CMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng, double frobenius) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(normal(rng), normal(rng));
    CMatrix h = 0.5 * (a + a.adjoint());
    const double n = h.norm();
    return n > 0.0 ? CMatrix(h * (frobenius / n)) : h;
}

struct RestartResult {
    RestartSummary summary;
    std::optional<ObjectiveValue> best;
    CMatrix best_isometry;
};

RestartResult run_restart(const PreparedSource& src, double eps, const IsometrySearchConfig& cfg,
                          std::size_t env_dim, std::size_t index, const CMatrix& base, bool random_start) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    const Eigen::Index d_out = base.rows();

    RestartResult r;
    r.summary.index = index;

    CMatrix h = random_start ? random_hermitian(d_out, rng, cfg.restart_scale) : CMatrix::Zero(d_out, d_out);
    auto isometry_of = [&](const CMatrix& gen) { return CMatrix(unitary_from_generator(gen) * base); };
    auto consider = [&](const ObjectiveValue& val, const CMatrix& iso) {
        if (!feasible(val, eps)) return;
        if (!r.best || val.information > r.best->information) {
            r.best = val;
            r.best_isometry = iso;
        }
    };

    CMatrix cur_iso = isometry_of(h);
    ObjectiveValue cur = evaluate(src, cur_iso, env_dim);
    double cur_score = penalized(cur, eps, cfg.penalty);
    consider(cur, cur_iso);

    double step = cfg.initial_step;
    std::size_t fails = 0, it = 0;
    for (; it < cfg.max_iterations && step >= cfg.min_step; ++it) {
        const CMatrix dir = random_hermitian(d_out, rng, 1.0);
        bool moved = false;
        for (double sign : {1.0, -1.0}) {
            const CMatrix cand = h + sign * step * dir;
            const CMatrix iso = isometry_of(cand);
            const ObjectiveValue val = evaluate(src, iso, env_dim);
            consider(val, iso);
            const double score = penalized(val, eps, cfg.penalty);
            if (score > cur_score) {
                h = cand;
                cur = val;
                cur_score = score;
                moved = true;
                break;
            }
        }
        if (moved) {
            ++r.summary.accepted;
            fails = 0;
        } else if (++fails >= cfg.patience) {
            step *= cfg.step_decay;
            fails = 0;
        }
    }
    r.summary.iterations = it;
    r.summary.final_step = step;
    if (r.best) r.summary.best_feasible = r.best->information;
    return r;
}

void check_config(const IsometrySearchConfig& cfg, double eps) {
    if (!(eps >= 0.0)) throw UsageError("epsilon must be non-negative");
    if (cfg.restarts == 0) throw UsageError("at least one restart is required");
    if (!(cfg.step_decay > 0.0 && cfg.step_decay < 1.0)) throw UsageError("step decay must lie in (0, 1)");
}

}  // namespace

std::size_t IsometrySearchConfig::resolved_env_dim(const Ensemble& e) const {
    if (env_dim > 0) return env_dim;
    const std::size_t bound = e.dimA * e.dimA * e.dimC * e.dimC;
    return std::max<std::size_t>(1, std::min(bound, env_cap));
}

CMatrix identity_embedding(std::size_t in_dim, std::size_t env_dim) {
    const auto din = static_cast<Eigen::Index>(in_dim);
    const auto dw = static_cast<Eigen::Index>(env_dim);
    CMatrix v = CMatrix::Zero(din * dw, din);
    for (Eigen::Index i = 0; i < din; ++i) v(i * dw, i) = 1.0;
    return v;
}

ObjectiveValue objective(const Ensemble& e, const CMatrix& isometry, std::size_t env_dim) {
    require_valid(e);
    const auto din = static_cast<Eigen::Index>(e.dimA * e.dimC);
    if (env_dim == 0 || isometry.cols() != din || isometry.rows() != din * static_cast<Eigen::Index>(env_dim))
        throw ContractError("objective: isometry shape does not match AC -> A^C^W");
    if (!is_isometry(isometry)) throw ContractError("objective: matrix is not an isometry");
    return evaluate(prepare(e), isometry, env_dim);
}

IEpsilonEstimate estimate_i_epsilon(const Ensemble& e, double eps, const IsometrySearchConfig& cfg,
                                    const std::vector<CMatrix>& warm_starts) {
    require_valid(e);
    check_config(cfg, eps);
    const std::size_t env_dim = cfg.resolved_env_dim(e);
    const PreparedSource src = prepare(e);
    const CMatrix embed = identity_embedding(e.dimA * e.dimC, env_dim);
    for (const auto& w : warm_starts)
        if (w.rows() != embed.rows() || w.cols() != embed.cols() || !is_isometry(w))
            throw ContractError("warm start has the wrong shape or is not an isometry");

    // Restart 0 starts at the identity, further restarts at random generators,
    // warm starts at their own isometry.
    const std::size_t total = cfg.restarts + warm_starts.size();
    auto job = [&](std::size_t k) {
        const bool warm = k >= cfg.restarts;
        const CMatrix& base = warm ? warm_starts[k - cfg.restarts] : embed;
        return run_restart(src, eps, cfg, env_dim, k, base, !warm && k > 0);
    };
    std::vector<RestartResult> results(total);
    if (cfg.parallel && total > 1) {
        std::vector<std::future<RestartResult>> futures;
        for (std::size_t k = 0; k < total; ++k) futures.push_back(std::async(std::launch::async, job, k));
        for (std::size_t k = 0; k < total; ++k) results[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < total; ++k) results[k] = job(k);
    }

    IEpsilonEstimate est;
    est.epsilon = eps;
    est.env_dim = env_dim;
    bool have = false;
    for (auto& r : results) {
        est.restarts.push_back(r.summary);
        if (r.best && (!have || r.best->information > est.value)) {
            have = true;
            est.value = r.best->information;
            est.fidelity = r.best->fidelity;
            est.isometry = r.best_isometry;
        }
    }
    if (!have) {
        const ObjectiveValue base = evaluate(src, embed, env_dim);
        est.value = base.information;
        est.fidelity = base.fidelity;
        est.isometry = embed;
        est.baseline_fallback = true;
    }
    return est;
}

std::vector<IEpsilonEstimate> estimate_i_epsilon_grid(const Ensemble& e, const std::vector<double>& grid,
                                                      const IsometrySearchConfig& cfg) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw UsageError("epsilon grid must be ascending");
    std::vector<IEpsilonEstimate> out;
    std::vector<CMatrix> warm;
    for (double eps : grid) {
        out.push_back(estimate_i_epsilon(e, eps, cfg, warm));
        warm.push_back(out.back().isometry);
    }
    return out;
}

IZeroBounds i_zero_bounds(const Ensemble& e) {
    // sigma_x is pure, so I(X:C) = S(C).
    return {von_neumann_entropy(reduced(e, Keep::C)), entropy_profile(e).s_cy};
}

LemmaReport check_lemma_properties(const Ensemble& e, const std::vector<double>& grid,
                                   const IsometrySearchConfig& cfg, bool check_subadditivity) {
    LemmaReport rep;
    rep.grid = grid;
    rep.bounds = i_zero_bounds(e);
    rep.estimates = estimate_i_epsilon_grid(e, grid, cfg);

    auto describe = [](double eps, double value, const char* what, double bound) {
        std::ostringstream os;
        os.precision(10);
        os << "eps=" << eps << ": estimate " << value << " " << what << " " << bound;
        return os.str();
    };

    for (std::size_t i = 0; i < rep.estimates.size(); ++i) {
        const auto& est = rep.estimates[i];
        if (est.value < rep.bounds.lower - 1e-9)
            rep.floor_violations.push_back(describe(est.epsilon, est.value, "below identity floor", rep.bounds.lower));
        if (est.value > rep.bounds.upper + kCeilingSlack) {
            if (est.epsilon == 0.0)
                rep.ceiling_violations.push_back(describe(est.epsilon, est.value, "above S(CY) =", rep.bounds.upper));
            else
                rep.above_ceiling_at_positive_eps.push_back(est.epsilon);
        }
        if (i > 0 && est.value < rep.estimates[i - 1].value - kMonotoneSlack)
            rep.monotonicity_violations.push_back(
                describe(est.epsilon, est.value, "drops below previous estimate", rep.estimates[i - 1].value));
    }

    for (std::size_t i = 1; i + 1 < rep.estimates.size(); ++i) {
        const auto& a = rep.estimates[i - 1];
        const auto& b = rep.estimates[i];
        const auto& c = rep.estimates[i + 1];
        if (c.epsilon == a.epsilon) continue;
        const double lambda = (b.epsilon - a.epsilon) / (c.epsilon - a.epsilon);
        const double secant = (1.0 - lambda) * a.value + lambda * c.value;
        if (b.value < secant - kConcavitySlack)
            rep.concavity_notes.push_back(describe(b.epsilon, b.value, "below secant", secant));
    }

    if (check_subadditivity && !grid.empty()) {
        const Ensemble sq = tensor_power(e, 2);
        SubadditivityCheck s;
        s.epsilon = grid.front();
        s.product_estimate = estimate_i_epsilon(sq, s.epsilon, cfg).value;
        s.bound = 2.0 * rep.bounds.upper;
        // The S(CY) ceiling bounds single-copy values only at eps = 0.
        s.holds = s.epsilon != 0.0 || s.product_estimate <= s.bound + kCeilingSlack;
        rep.subadditivity = s;
    }
    return rep;
}

}  // namespace eaqc
