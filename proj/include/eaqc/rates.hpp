#pragma once

// Closed-form optimal rates of a source with side information, evaluated from
// its entropic profile, plus teleportation / dense-coding resource accounting.
//
// Units: Q qubits, E ebits, C cbits, all per source copy.

#include <optional>
#include <string>
#include <vector>

#include "eaqc/decomposition.hpp"
#include "eaqc/ensemble.hpp"

namespace eaqc {

/// Entropies (bits) of the Y-extended source omega^{XACY}.
struct EntropyProfile {
    double s_a = 0.0;
    double s_cy = 0.0;
    double s_acy = 0.0;
    double s_a_given_cy = 0.0;
    double i_a_cy = 0.0;
    double s_y = 0.0;
    double h_x = 0.0;

    std::size_t components = 1;
    // Largest difference between the direct and block-diagonal evaluations of
    // S(CY) and S(ACY).
    double consistency_gap = 0.0;
    bool y_extended = true;
};

struct RatePoint {
    std::optional<double> q;
    std::optional<double> e;
    std::optional<double> c;
    std::string provenance;
};

inline constexpr double kRateTol = 1e-9;
/// Disagreement between the two entropy routes that aborts the computation.
inline constexpr double kConsistencyAbort = 1e-6;

/// Decomposes, appends Y, and evaluates every entropy. S(CY) and S(ACY) are
/// computed both from the full extended state and from the block form
/// H(q) + sum_y q(y) S(. | y); the block values are returned.
EntropyProfile entropy_profile(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);

/// Q = (S(A) + S(A|CY)) / 2 with entanglement E = (S(A) - S(A|CY)) / 2.
RatePoint optimal_q(const EntropyProfile& p);
RatePoint optimal_q(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);

/// All side-information states equal up to phase (or dimC == 1).
bool is_blind(const Ensemble& e, double tol = kRateTol);
/// Side-information states pairwise orthogonal on the support.
bool is_visible(const Ensemble& e, double tol = kDefaultOrthoTol);

/// Blind source: Q = S(A) - S(Y)/2, E = S(Y)/2. Throws UsageError otherwise.
RatePoint blind_rates(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);
/// Visible source: Q = E = S(A)/2. Throws UsageError otherwise.
RatePoint visible_rates(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);

/// Corner of the classical-communication / entanglement region of a blind
/// source: (C, E) = (2S(A) - S(Y), S(A) - S(Y)).
RatePoint classical_entanglement_corner(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);

/// Free-classical-communication point of a blind source: Q = S(A) - S(Y)
/// qubits plus C = S(Y) cbits.
RatePoint classical_assisted_point(const EntropyProfile& p);

enum class Conversion {
    Teleport,   // a qubits -> 2a cbits + a ebits
    DenseCode,  // a cbits -> a/2 qubits + a/2 ebits
};

/// Unset coordinates count as zero. Throws InfeasibleConversionError if Q or C
/// would become negative, UsageError on a negative amount.
RatePoint resource_convert(const RatePoint& p, Conversion mode, double amount);

/// Values with magnitude below 1e-12 reported as zero.
double clamp_small(double v);

struct RateReport {
    EntropyProfile profile;
    Decomposition decomposition;
    RatePoint optimal;
    RatePoint unassisted;  // Q = S(A), E = 0
    std::optional<RatePoint> blind;
    std::optional<RatePoint> visible;
    std::optional<RatePoint> classical_entanglement;
    std::optional<RatePoint> classical_assisted;
    double ortho_tol = kDefaultOrthoTol;
};

RateReport build_rate_report(const Ensemble& e, double ortho_tol = kDefaultOrthoTol);

}  // namespace eaqc
