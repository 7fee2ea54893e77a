#include "eaqc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "eaqc/error.hpp"

namespace eaqc {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

cplx parse_amplitude(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw IoError(where + ": amplitude must be [re, im] or a number");
}

CVector parse_vector(const json& j, const std::string& where) {
    if (!j.is_array()) throw IoError(where + ": expected an array of amplitudes");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_amplitude(j[i], where);
    return v;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw IoError(where + ": unknown key '" + it.key() + "'");
    }
}

std::size_t positive_int(const json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw IoError(where + ": '" + key + "' must be a positive integer");
    return v.get<std::size_t>();
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << "JSON parse error at byte " << e.byte << ": " << e.what();
        throw IoError(os.str());
    }
}

ojson amplitudes_json(const CVector& v) {
    ojson a = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back({v(i).real(), v(i).imag()});
    return a;
}

ojson matrix_json(const CMatrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(amplitudes_json(m.row(r).transpose()));
    return rows;
}

ojson rate_point_json(const RatePoint& p) {
    ojson j;
    if (p.q) j["Q"] = clamp_small(*p.q);
    if (p.e) j["E"] = clamp_small(*p.e);
    if (p.c) j["C"] = clamp_small(*p.c);
    j["provenance"] = p.provenance;
    return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

Ensemble parse_ensemble_json(std::string_view text) {
    const json doc = parse_document(text);
    try {
        if (!doc.is_object()) throw IoError("ensemble: top level must be an object");
        reject_unknown(doc, {"dimA", "dimC", "visible", "states"}, "ensemble");
        if (!doc.contains("states") || !doc["states"].is_array()) throw IoError("ensemble: missing 'states' array");
        const json& states = doc["states"];

        Ensemble e;
        e.dimA = positive_int(doc, "dimA", "ensemble");
        const bool visible = doc.value("visible", false);

        std::size_t with_sigma = 0;
        for (const auto& s : states) with_sigma += s.is_object() && s.contains("sigma") ? 1 : 0;
        if (with_sigma != 0 && with_sigma != states.size())
            throw IoError("ensemble: 'sigma' must be given for every state or for none");
        if (visible && with_sigma != 0) throw IoError("ensemble: 'visible' sources must not list 'sigma'");

        if (visible) {
            e.dimC = states.size();
            if (doc.contains("dimC") && positive_int(doc, "dimC", "ensemble") != e.dimC)
                throw IoError("ensemble: visible sources need dimC equal to the number of states");
        } else if (with_sigma == 0) {
            e.dimC = 1;
            if (doc.contains("dimC") && positive_int(doc, "dimC", "ensemble") != 1)
                throw IoError("ensemble: states without 'sigma' describe a blind source (dimC = 1)");
        } else {
            e.dimC = positive_int(doc, "dimC", "ensemble");
        }

        for (std::size_t i = 0; i < states.size(); ++i) {
            const json& s = states[i];
            const std::string where = "states[" + std::to_string(i) + "]";
            if (!s.is_object()) throw IoError(where + ": expected an object");
            reject_unknown(s, {"label", "prob", "psi", "sigma"}, where);
            EnsembleItem it;
            it.label = s.contains("label") ? s.at("label").get<std::string>() : std::to_string(i);
            if (!s.contains("prob") || !s["prob"].is_number()) throw IoError(where + ": 'prob' must be a number");
            it.prob = s["prob"].get<double>();
            if (!s.contains("psi")) throw IoError(where + ": missing 'psi'");
            it.psi = parse_vector(s["psi"], where + ".psi");
            if (visible) {
                it.sigma = CVector::Zero(static_cast<Eigen::Index>(e.dimC));
                it.sigma(static_cast<Eigen::Index>(i)) = 1.0;
            } else if (s.contains("sigma")) {
                it.sigma = parse_vector(s["sigma"], where + ".sigma");
            } else {
                it.sigma = CVector::Ones(1);
            }
            e.items.push_back(std::move(it));
        }
        return e;
    } catch (const json::exception& ex) {
        throw IoError(std::string("ensemble: ") + ex.what());
    }
}

Ensemble load_ensemble(const std::filesystem::path& path) { return parse_ensemble_json(read_text_file(path)); }

std::string ensemble_to_json(const Ensemble& e) {
    ojson j;
    j["dimA"] = e.dimA;
    j["dimC"] = e.dimC;
    j["states"] = ojson::array();
    for (const auto& it : e.items) {
        ojson s;
        s["label"] = it.label;
        s["prob"] = it.prob;
        s["psi"] = amplitudes_json(it.psi);
        s["sigma"] = amplitudes_json(it.sigma);
        j["states"].push_back(std::move(s));
    }
    return dump(j);
}

CMatrix parse_matrix_json(std::string_view text) {
    const json doc = parse_document(text);
    try {
        if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array())
            throw IoError("matrix: expected {\"matrix\": [rows]}");
        reject_unknown(doc, {"matrix"}, "matrix");
        const json& rows = doc["matrix"];
        if (rows.empty()) throw IoError("matrix: no rows");
        const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
        CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const CVector row = parse_vector(rows[r], "matrix row " + std::to_string(r));
            if (static_cast<std::size_t>(row.size()) != cols) throw IoError("matrix: ragged rows");
            m.row(static_cast<Eigen::Index>(r)) = row.transpose();
        }
        return m;
    } catch (const json::exception& ex) {
        throw IoError(std::string("matrix: ") + ex.what());
    }
}

CMatrix load_matrix(const std::filesystem::path& path) { return parse_matrix_json(read_text_file(path)); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

std::string decomposition_json(const Ensemble& e, const Decomposition& d) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "decomposition";
    j["tolerance"] = d.tolerance;
    j["count"] = d.count();
    j["irreducible"] = d.count() == 1;
    j["components"] = ojson::array();
    for (const auto& c : d.components) {
        ojson cj;
        cj["y"] = c.y;
        cj["labels"] = c.labels;
        cj["weight"] = c.weight;
        j["components"].push_back(std::move(cj));
    }
    ojson zero = ojson::array();
    for (std::size_t i : d.zero_weight) zero.push_back(e.items[i].label);
    j["zero_weight_labels"] = std::move(zero);
    return dump(j);
}

std::string rate_report_json(const RateReport& r, std::string_view preprocessing) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "rate_report";
    j["preprocessing"] = std::string(preprocessing);
    j["ortho_tol"] = r.ortho_tol;

    const EntropyProfile& p = r.profile;
    ojson prof;
    prof["S_A"] = clamp_small(p.s_a);
    prof["S_CY"] = clamp_small(p.s_cy);
    prof["S_ACY"] = clamp_small(p.s_acy);
    prof["S_A_given_CY"] = clamp_small(p.s_a_given_cy);
    prof["I_A_CY"] = clamp_small(p.i_a_cy);
    prof["S_Y"] = clamp_small(p.s_y);
    prof["H_X"] = clamp_small(p.h_x);
    prof["consistency_gap"] = p.consistency_gap;
    prof["y_extended"] = p.y_extended;
    j["entropy_profile"] = std::move(prof);

    ojson dec;
    dec["count"] = r.decomposition.count();
    dec["weights"] = r.decomposition.weights();
    ojson labels = ojson::array();
    for (const auto& c : r.decomposition.components) labels.push_back(c.labels);
    dec["labels"] = std::move(labels);
    j["decomposition"] = std::move(dec);

    ojson rates;
    rates["optimal"] = rate_point_json(r.optimal);
    rates["unassisted"] = rate_point_json(r.unassisted);
    if (r.blind) rates["blind"] = rate_point_json(*r.blind);
    if (r.visible) rates["visible"] = rate_point_json(*r.visible);
    if (r.classical_entanglement) rates["classical_entanglement"] = rate_point_json(*r.classical_entanglement);
    if (r.classical_assisted) rates["classical_assisted"] = rate_point_json(*r.classical_assisted);
    j["rates"] = std::move(rates);
    return dump(j);
}

std::string region_json(const RegionSpec& spec, const std::vector<RegionPoint>& points, bool strict_nonneg_e) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "region";
    if (spec.kind == RegionKind::EQ) {
        j["region"] = "EQ";
        j["q_min"] = clamp_small(spec.q_min);
        j["sum_min"] = clamp_small(spec.sum_min);
        j["strict_nonneg_E"] = strict_nonneg_e;
        j["axes"] = {"E", "Q"};
    } else {
        j["region"] = "CE";
        j["c_min"] = clamp_small(spec.c_min);
        j["e_min"] = clamp_small(spec.e_min);
        j["axes"] = {"C", "E"};
    }
    ojson pts = ojson::array();
    for (const auto& p : points) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
    return dump(j);
}

std::string curve_json(const std::vector<CurvePoint>& curve) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "fidelity_curve";
    j["points"] = ojson::array();
    for (const auto& p : curve) {
        ojson pj;
        pj["n"] = p.n;
        pj["Q"] = p.rate;
        if (p.fidelity) pj["fidelity"] = *p.fidelity;
        else pj["error"] = p.error;
        j["points"].push_back(std::move(pj));
    }
    return dump(j);
}

std::string lemma_report_json(const LemmaReport& rep, const IsometrySearchConfig& cfg) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "i_epsilon_report";

    ojson c;
    c["env_dim"] = cfg.env_dim;
    c["env_cap"] = cfg.env_cap;
    c["restarts"] = cfg.restarts;
    c["max_iterations"] = cfg.max_iterations;
    c["penalty"] = cfg.penalty;
    c["seed"] = cfg.seed;
    c["min_step"] = cfg.min_step;
    c["initial_step"] = cfg.initial_step;
    c["step_decay"] = cfg.step_decay;
    c["patience"] = cfg.patience;
    j["config"] = std::move(c);

    j["eps_grid"] = rep.grid;
    j["bounds"] = {{"lower_identity", rep.bounds.lower}, {"upper_S_CY", rep.bounds.upper}};

    j["estimates"] = ojson::array();
    for (const auto& est : rep.estimates) {
        ojson ej;
        ej["epsilon"] = est.epsilon;
        ej["value"] = est.value;
        ej["fidelity"] = est.fidelity;
        ej["env_dim"] = est.env_dim;
        ej["baseline_fallback"] = est.baseline_fallback;
        ojson rs = ojson::array();
        for (const auto& r : est.restarts) {
            ojson rj;
            rj["restart"] = r.index;
            rj["best_feasible"] = r.best_feasible ? ojson(*r.best_feasible) : ojson(nullptr);
            rj["iterations"] = r.iterations;
            rj["accepted"] = r.accepted;
            rs.push_back(std::move(rj));
        }
        ej["restarts"] = std::move(rs);
        ej["isometry"] = matrix_json(est.isometry);
        j["estimates"].push_back(std::move(ej));
    }

    ojson checks;
    checks["monotonicity_violations"] = rep.monotonicity_violations;
    checks["floor_violations"] = rep.floor_violations;
    checks["ceiling_violations"] = rep.ceiling_violations;
    checks["above_ceiling_at_positive_eps"] = rep.above_ceiling_at_positive_eps;
    checks["concavity_notes"] = rep.concavity_notes;
    if (rep.subadditivity) {
        const auto& s = *rep.subadditivity;
        checks["subadditivity"] = {{"epsilon", s.epsilon},
                                   {"product_estimate", s.product_estimate},
                                   {"bound", s.bound},
                                   {"holds", s.holds}};
    }
    checks["ok"] = rep.ok();
    j["checks"] = std::move(checks);
    return dump(j);
}

}  // namespace eaqc
