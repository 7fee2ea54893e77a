#include "eaqc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eaqc/error.hpp"

namespace eaqc {

namespace {

double entropy_of(const Ensemble& e, Keep keep) { return von_neumann_entropy(reduced(e, keep)); }

void check_agreement(double a, double b, const char* what) {
    if (std::abs(a - b) > kRateTol) {
        std::ostringstream os;
        os.precision(15);
        os << what << ": specialised formula " << a << " disagrees with general optimum " << b;
        throw ConsistencyError(os.str());
    }
}

// S(A) >= S(Y) for blind sources; rounding can leave the difference at -1e-16.
double blind_excess(const EntropyProfile& p) {
    const double d = p.s_a - p.s_y;
    return d < 0.0 && d >= -kRateTol ? 0.0 : d;
}

}  // namespace

EntropyProfile entropy_profile(const Ensemble& e, double ortho_tol) {
    require_valid(e);
    const Decomposition d = irreducible_components(e, ortho_tol);
    const Ensemble ext = extend_with_y(e, d);
    const std::vector<double> q = d.weights();

    EntropyProfile p;
    p.components = d.count();
    p.s_a = entropy_of(e, Keep::A);
    p.s_y = shannon_entropy(q);
    p.h_x = shannon_entropy(e.probs());

    double s_cy_block = p.s_y, s_acy_block = p.s_y;
    for (const auto& c : d.components) {
        s_cy_block += c.weight * entropy_of(c.sub, Keep::C);
        s_acy_block += c.weight * entropy_of(c.sub, Keep::AC);
    }
    const double s_cy_direct = entropy_of(ext, Keep::C);
    const double s_acy_direct = entropy_of(ext, Keep::AC);

    p.consistency_gap = std::max(std::abs(s_cy_direct - s_cy_block), std::abs(s_acy_direct - s_acy_block));
    if (p.consistency_gap > kConsistencyAbort) {
        std::ostringstream os;
        os.precision(15);
        os << "entropy routes disagree: S(CY) " << s_cy_direct << " vs " << s_cy_block << ", S(ACY) "
           << s_acy_direct << " vs " << s_acy_block;
        throw ConsistencyError(os.str());
    }

    p.s_cy = s_cy_block;
    p.s_acy = s_acy_block;
    p.s_a_given_cy = p.s_acy - p.s_cy;
    p.i_a_cy = p.s_a - p.s_a_given_cy;
    return p;
}

RatePoint optimal_q(const EntropyProfile& p) {
    RatePoint r;
    r.q = 0.5 * (p.s_a + p.s_a_given_cy);
    r.e = 0.5 * (p.s_a - p.s_a_given_cy);
    r.provenance = "entanglement-assisted optimum: Q = (S(A)+S(A|CY))/2 at E = I(A:CY)/2";
    return r;
}

RatePoint optimal_q(const Ensemble& e, double ortho_tol) { return optimal_q(entropy_profile(e, ortho_tol)); }

bool is_blind(const Ensemble& e, double tol) {
    require_valid(e);
    if (e.dimC == 1) return true;
    const auto s = e.support();
    for (std::size_t i : s)
        if (1.0 - std::abs(e.items[s.front()].sigma.dot(e.items[i].sigma)) > tol) return false;
    return true;
}

bool is_visible(const Ensemble& e, double tol) {
    require_valid(e);
    const auto s = e.support();
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (std::abs(e.items[s[a]].sigma.dot(e.items[s[b]].sigma)) > tol) return false;
    return true;
}

RatePoint blind_rates(const Ensemble& e, double ortho_tol) {
    if (!is_blind(e)) throw UsageError("blind_rates: side-information states are not identical");
    const EntropyProfile p = entropy_profile(e, ortho_tol);
    RatePoint r;
    r.q = p.s_a - 0.5 * p.s_y;
    r.e = 0.5 * p.s_y;
    r.provenance = "blind source: Q = S(A) - S(Y)/2, E = S(Y)/2";
    const RatePoint opt = optimal_q(p);
    check_agreement(*r.q, *opt.q, "blind Q");
    check_agreement(*r.e, *opt.e, "blind E");
    return r;
}

RatePoint visible_rates(const Ensemble& e, double ortho_tol) {
    if (!is_visible(e, ortho_tol)) throw UsageError("visible_rates: side-information states are not orthogonal");
    const EntropyProfile p = entropy_profile(e, ortho_tol);
    RatePoint r;
    r.q = 0.5 * p.s_a;
    r.e = 0.5 * p.s_a;
    r.provenance = "visible source: Q = E = S(A)/2";
    const RatePoint opt = optimal_q(p);
    check_agreement(*r.q, *opt.q, "visible Q");
    check_agreement(*r.e, *opt.e, "visible E");
    return r;
}

RatePoint classical_entanglement_corner(const Ensemble& e, double ortho_tol) {
    if (!is_blind(e)) throw UsageError("classical/entanglement region is only available for blind sources");
    const EntropyProfile p = entropy_profile(e, ortho_tol);
    RatePoint r;
    r.c = 2.0 * p.s_a - p.s_y;
    r.e = blind_excess(p);
    r.provenance = "blind source, cbit/ebit corner: C = 2S(A) - S(Y), E = S(A) - S(Y)";
    return r;
}

RatePoint classical_assisted_point(const EntropyProfile& p) {
    RatePoint r;
    r.q = blind_excess(p);
    r.c = p.s_y;
    r.provenance = "blind source with free classical communication: Q = S(A) - S(Y), C = S(Y)";
    return r;
}

RatePoint resource_convert(const RatePoint& p, Conversion mode, double amount) {
    if (!(amount >= 0.0)) throw UsageError("resource_convert: amount must be non-negative");
    double q = p.q.value_or(0.0), e = p.e.value_or(0.0), c = p.c.value_or(0.0);
    std::string how;
    switch (mode) {
        case Conversion::Teleport:
            q -= amount;
            c += 2.0 * amount;
            e += amount;
            how = "teleported qubits";
            break;
        case Conversion::DenseCode:
            c -= amount;
            q += 0.5 * amount;
            e += 0.5 * amount;
            how = "dense-coded cbits";
            break;
    }
    // Allow rounding noise from callers passing a computed amount.
    constexpr double slack = 1e-12;
    if (q < -slack || c < -slack) {
        std::ostringstream os;
        os << "conversion of " << amount << " " << how << " leaves a negative rate (Q=" << q << ", C=" << c << ")";
        throw InfeasibleConversionError(os.str());
    }
    RatePoint r;
    r.q = std::max(q, 0.0);
    r.e = e;
    r.c = std::max(c, 0.0);
    std::ostringstream os;
    os << p.provenance << "; " << amount << " " << how;
    r.provenance = os.str();
    return r;
}

double clamp_small(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

RateReport build_rate_report(const Ensemble& e, double ortho_tol) {
    RateReport r;
    r.ortho_tol = ortho_tol;
    r.profile = entropy_profile(e, ortho_tol);
    r.decomposition = irreducible_components(e, ortho_tol);
    r.optimal = optimal_q(r.profile);
    r.unassisted.q = r.profile.s_a;
    r.unassisted.e = 0.0;
    r.unassisted.provenance = "no entanglement: Schumacher rate Q = S(A)";
    if (is_blind(e)) {
        r.blind = blind_rates(e, ortho_tol);
        r.classical_entanglement = classical_entanglement_corner(e, ortho_tol);
        r.classical_assisted = classical_assisted_point(r.profile);
    }
    if (is_visible(e, ortho_tol)) r.visible = visible_rates(e, ortho_tol);
    return r;
}

}  // namespace eaqc
