#pragma once

// File formats. Ensembles are read from JSON:
//
//   { "dimA": 2, "dimC": 2, "visible": false,
//     "states": [ { "label": "0", "prob": 0.5, "psi": [[1,0],[0,0]], "sigma": [[1,0],[0,0]] }, ... ] }
//
// Amplitudes are [re, im] pairs (a bare number is read as a real amplitude).
// Omitting "sigma" everywhere gives a blind source (dimC = 1); "visible": true
// generates sigma_x = |x> on a side system of dimension |X|.
//
// Every JSON document written here carries "schema_version".

#include <filesystem>
#include <string>
#include <string_view>

#include "eaqc/decomposition.hpp"
#include "eaqc/ensemble.hpp"
#include "eaqc/iepsilon.hpp"
#include "eaqc/rates.hpp"
#include "eaqc/region.hpp"
#include "eaqc/schumacher.hpp"

namespace eaqc {

inline constexpr int kSchemaVersion = 1;

/// Throws IoError on malformed JSON (with the byte offset) or a structural
/// problem. Does not check probabilities or norms; see validate().
Ensemble parse_ensemble_json(std::string_view text);
Ensemble load_ensemble(const std::filesystem::path& path);
std::string ensemble_to_json(const Ensemble& e);

/// {"matrix": [[[re,im], ...], ...]} given row by row.
CMatrix parse_matrix_json(std::string_view text);
CMatrix load_matrix(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string decomposition_json(const Ensemble& e, const Decomposition& d);
std::string rate_report_json(const RateReport& r, std::string_view preprocessing = "none");
std::string region_json(const RegionSpec& spec, const std::vector<RegionPoint>& points, bool strict_nonneg_e);
std::string curve_json(const std::vector<CurvePoint>& curve);
std::string lemma_report_json(const LemmaReport& rep, const IsometrySearchConfig& cfg);

}  // namespace eaqc
