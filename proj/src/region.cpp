#include "eaqc/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eaqc/error.hpp"

namespace eaqc {

namespace {

constexpr double kEdge = 1e-12;

bool within(double v, Range r) { return v >= r.lo - kEdge && v <= r.hi + kEdge; }

std::vector<double> linspace(double lo, double hi, std::size_t samples) {
    std::vector<double> out;
    if (lo > hi) return out;
    if (samples < 2 || hi == lo) return {lo};
    for (std::size_t k = 0; k < samples; ++k)
        out.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1));
    out.back() = hi;
    return out;
}

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < kEdge; }), v.end());
}

void fmt_value(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    if (std::string_view(buf) == "-0.000000") std::snprintf(buf, sizeof buf, "%.6f", 0.0);
    out += buf;
}

}  // namespace

RegionSpec eq_region(const EntropyProfile& p) {
    RegionSpec s;
    s.kind = RegionKind::EQ;
    s.q_min = 0.5 * (p.s_a + p.s_a_given_cy);
    s.sum_min = p.s_a;
    if (s.q_min > s.sum_min + 1e-9) throw ContractError("EQ region: q_min exceeds S(A)");
    return s;
}

RegionSpec ce_region(const EntropyProfile& p) {
    RegionSpec s;
    s.kind = RegionKind::CE;
    s.c_min = 2.0 * p.s_a - p.s_y;
    s.e_min = p.s_a - p.s_y;
    return s;
}

bool eq_contains(const RegionSpec& spec, double e, double q, double tol, bool strict_nonneg_e) {
    if (strict_nonneg_e && e < -tol) return false;
    return q >= spec.q_min - tol && q + e >= spec.sum_min - tol;
}

bool ce_contains(const RegionSpec& spec, double c, double e, double tol) {
    return c >= spec.c_min - tol && e >= spec.e_min - tol;
}

std::vector<RegionPoint> boundary_polyline(const RegionSpec& spec, Range x_range, Range y_range,
                                           std::size_t samples, bool strict_nonneg_e) {
    if (samples < 2) throw UsageError("boundary_polyline: need at least 2 samples");
    std::vector<RegionPoint> pts;

    if (spec.kind == RegionKind::EQ) {
        const double corner = spec.sum_min - spec.q_min;
        const double lo = strict_nonneg_e ? std::max(x_range.lo, 0.0) : x_range.lo;
        std::vector<double> es = linspace(lo, x_range.hi, samples);
        if (es.empty()) return pts;
        if (corner >= lo - kEdge && corner <= x_range.hi + kEdge) es.push_back(corner);
        sort_unique(es);
        for (double e : es) {
            const double q = e <= corner ? spec.sum_min - e : spec.q_min;
            if (within(q, y_range)) pts.push_back({e, q});
        }
        return pts;
    }

    // CE: horizontal ray at E = e_min (C descending to the corner), then the
    // vertical ray at C = c_min (E ascending).
    if (within(spec.e_min, y_range)) {
        std::vector<double> cs = linspace(std::max(spec.c_min, x_range.lo), x_range.hi, samples);
        if (within(spec.c_min, x_range)) cs.push_back(spec.c_min);
        sort_unique(cs);
        for (auto it = cs.rbegin(); it != cs.rend(); ++it)
            if (*it >= spec.c_min - kEdge) pts.push_back({*it, spec.e_min});
    }
    if (within(spec.c_min, x_range)) {
        for (double e : linspace(std::max(spec.e_min, y_range.lo), y_range.hi, samples)) {
            if (!pts.empty() && std::abs(pts.back().x - spec.c_min) < kEdge && std::abs(pts.back().y - e) < kEdge)
                continue;
            if (e >= spec.e_min - kEdge) pts.push_back({spec.c_min, e});
        }
    }
    return pts;
}

std::string polyline_csv(const RegionSpec& spec, const std::vector<RegionPoint>& points) {
    std::string out = spec.kind == RegionKind::EQ ? "E,Q\n" : "C,E\n";
    for (const auto& p : points) {
        fmt_value(out, p.x);
        out += ',';
        fmt_value(out, p.y);
        out += '\n';
    }
    return out;
}

}  // namespace eaqc
