#include "eaqc/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eaqc/error.hpp"

namespace eaqc {

std::vector<std::size_t> Decomposition::assignment(std::size_t item_count) const {
    std::vector<std::size_t> y(item_count, 0);
    for (const auto& c : components)
        for (std::size_t m : c.members) y.at(m) = c.y;
    return y;
}

std::vector<double> Decomposition::weights() const {
    std::vector<double> q;
    for (const auto& c : components) q.push_back(c.weight);
    return q;
}

Adjacency overlap_graph(const Ensemble& e, double tol) {
    require_valid(e);
    if (!(tol > 0.0)) throw UsageError("overlap_graph: tolerance must be positive");
    const std::size_t n = e.size();
    Adjacency adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        if (e.items[i].prob <= 0.0) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (e.items[j].prob <= 0.0) continue;
            const double ov = std::abs(e.items[i].psi.dot(e.items[j].psi)) *
                              std::abs(e.items[i].sigma.dot(e.items[j].sigma));
            if (ov > tol) adj[i][j] = adj[j][i] = true;
        }
    }
    return adj;
}

Decomposition irreducible_components(const Ensemble& e, double tol) {
    const Adjacency adj = overlap_graph(e, tol);
    const std::size_t n = e.size();

    Decomposition d;
    d.tolerance = tol;
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        if (e.items[start].prob <= 0.0) {
            seen[start] = true;
            d.zero_weight.push_back(start);
            continue;
        }
        std::vector<std::size_t> group, stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            group.push_back(i);
            for (std::size_t j = 0; j < n; ++j)
                if (adj[i][j] && !seen[j]) {
                    seen[j] = true;
                    stack.push_back(j);
                }
        }
        std::sort(group.begin(), group.end());
        groups.push_back(std::move(group));
    }

    auto min_label = [&](const std::vector<std::size_t>& g) {
        std::string best = e.items[g.front()].label;
        for (std::size_t i : g) best = std::min(best, e.items[i].label);
        return best;
    };
    std::sort(groups.begin(), groups.end(),
              [&](const auto& a, const auto& b) { return min_label(a) < min_label(b); });

    for (std::size_t y = 0; y < groups.size(); ++y) {
        Component c;
        c.y = y;
        c.members = groups[y];
        c.sub.dimA = e.dimA;
        c.sub.dimC = e.dimC;
        for (std::size_t i : c.members) c.weight += e.items[i].prob;
        for (std::size_t i : c.members) {
            c.labels.push_back(e.items[i].label);
            EnsembleItem it = e.items[i];
            it.prob /= c.weight;
            c.sub.items.push_back(std::move(it));
        }
        d.components.push_back(std::move(c));
    }
    return d;
}

bool is_irreducible(const Ensemble& e, double tol) {
    return irreducible_components(e, tol).count() == 1;
}

Ensemble extend_with_y(const Ensemble& e, const Decomposition& d) {
    require_valid(e);
    const std::size_t ny = std::max<std::size_t>(d.count(), 1);
    const auto y_of = d.assignment(e.size());

    Ensemble out;
    out.dimA = e.dimA;
    out.dimC = e.dimC * ny;
    out.items.reserve(e.size());
    for (std::size_t x = 0; x < e.size(); ++x) {
        EnsembleItem it = e.items[x];
        CVector s = CVector::Zero(static_cast<Eigen::Index>(out.dimC));
        const auto y = static_cast<Eigen::Index>(y_of[x]);
        for (Eigen::Index c = 0; c < it.sigma.size(); ++c) s(c * static_cast<Eigen::Index>(ny) + y) = it.sigma(c);
        it.sigma = std::move(s);
        out.items.push_back(std::move(it));
    }
    return out;
}

}  // namespace eaqc
