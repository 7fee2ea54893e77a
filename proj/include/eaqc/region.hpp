#pragma once

// Achievable rate regions as intersections of half-planes:
//   EQ: Q >= q_min and Q + E >= sum_min   (entanglement vs quantum rate)
//   CE: C >= c_min and E >= e_min         (classical vs entanglement rate, blind sources)

#include <cstddef>
#include <string>
#include <vector>

#include "eaqc/rates.hpp"

namespace eaqc {

enum class RegionKind { EQ, CE };

struct RegionSpec {
    RegionKind kind = RegionKind::EQ;
    double q_min = 0.0;    // EQ
    double sum_min = 0.0;  // EQ
    double c_min = 0.0;    // CE
    double e_min = 0.0;    // CE
};

/// Throws ContractError if q_min exceeds sum_min by more than 1e-9.
RegionSpec eq_region(const EntropyProfile& p);
RegionSpec ce_region(const EntropyProfile& p);

/// E is the horizontal coordinate of the EQ plane, C of the CE plane.
struct RegionPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// With strict_nonneg_e the point must also have E >= -tol.
bool eq_contains(const RegionSpec& spec, double e, double q, double tol = 1e-9, bool strict_nonneg_e = true);
bool ce_contains(const RegionSpec& spec, double c, double e, double tol = 1e-9);

/// EQ: points (E, Q) on {Q + E = sum_min, E <= corner} then {Q = q_min, E >= corner},
/// sampled at `samples` values of E across `x_range` (the corner is always
/// inserted when inside the ranges). CE: points (C, E) on the horizontal ray
/// E = e_min from C = x_range.hi down to the corner, then up the vertical ray
/// C = c_min. Ordered by increasing E; points outside the ranges are dropped.
std::vector<RegionPoint> boundary_polyline(const RegionSpec& spec, Range x_range, Range y_range,
                                           std::size_t samples, bool strict_nonneg_e = true);

/// Header "E,Q" or "C,E" and one row per point, 6 decimals.
std::string polyline_csv(const RegionSpec& spec, const std::vector<RegionPoint>& points);

}  // namespace eaqc
