#include "eaqc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "eaqc/decomposition.hpp"
#include "eaqc/ensemble.hpp"
#include "eaqc/error.hpp"
#include "eaqc/iepsilon.hpp"
#include "eaqc/io.hpp"
#include "eaqc/rates.hpp"
#include "eaqc/region.hpp"
#include "eaqc/schumacher.hpp"

namespace eaqc {

namespace {

struct CommonOptions {
    std::string input;
    std::string output;
    double ortho_tol = kDefaultOrthoTol;
    bool renormalize = false;
    bool apply_cnot = false;
    std::string pre_unitary;
    DimensionCaps caps;
    std::uint64_t seed = 0;
};

struct RegionOptions {
    std::string kind = "eq";
    std::vector<double> x_range;
    std::vector<double> y_range;
    std::size_t samples = 21;
    bool allow_negative_e = false;
    std::string csv_path;
    std::string spec_path;
    std::string format = "csv";
};

struct SimulateOptions {
    std::vector<std::size_t> n_list{2, 4, 6, 8, 10};
    std::optional<double> rate;
    std::optional<double> rate_offset;
    std::string format = "csv";
};

struct IEpsilonOptions {
    std::vector<double> grid{0.0, 0.05, 0.1, 0.2};
    IsometrySearchConfig cfg;
    bool skip_subadditivity = false;
    bool serial = false;
};

struct Loaded {
    Ensemble ensemble;
    std::string preprocessing = "none";
};

Loaded load_input(const CommonOptions& o) {
    Loaded l;
    l.ensemble = load_ensemble(o.input);
    if (o.renormalize) l.ensemble = renormalized(std::move(l.ensemble));
    require_valid(l.ensemble);

    std::vector<std::string> steps;
    if (!o.pre_unitary.empty()) {
        l.ensemble = apply_unitary_ac(l.ensemble, load_matrix(o.pre_unitary));
        steps.push_back("pre-unitary");
    }
    if (o.apply_cnot) {
        l.ensemble = apply_unitary_ac(l.ensemble, controlled_shift(l.ensemble.dimA, l.ensemble.dimC));
        steps.push_back("cnot");
    }
    if (!steps.empty()) {
        l.preprocessing.clear();
        for (std::size_t i = 0; i < steps.size(); ++i) l.preprocessing += (i ? "+" : "") + steps[i];
    }
    return l;
}

void emit(const CommonOptions& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) out << text;
    else write_file_atomic(o.output, text);
}

int cmd_validate(const CommonOptions& o, std::ostream& out) {
    Ensemble e = load_ensemble(o.input);
    if (o.renormalize) e = renormalized(std::move(e));
    const auto violations = validate(e);
    for (const auto& v : violations) out << v.message << "\n";
    if (!violations.empty()) return 1;
    out << "valid: " << e.size() << " states, dimA=" << e.dimA << ", dimC=" << e.dimC << "\n";
    return 0;
}

int cmd_decompose(const CommonOptions& o, std::ostream& out) {
    const Loaded l = load_input(o);
    emit(o, decomposition_json(l.ensemble, irreducible_components(l.ensemble, o.ortho_tol)), out);
    return 0;
}

int cmd_rates(const CommonOptions& o, std::ostream& out) {
    const Loaded l = load_input(o);
    emit(o, rate_report_json(build_rate_report(l.ensemble, o.ortho_tol), l.preprocessing), out);
    return 0;
}

Range default_range(double extent) { return {0.0, std::max(1.0, std::ceil(2.0 * extent))}; }

Range to_range(const std::vector<double>& v, const char* name) {
    if (v.size() != 2 || !(v[0] <= v[1])) throw UsageError(std::string(name) + " needs lo,hi with lo <= hi");
    return {v[0], v[1]};
}

int cmd_region(const CommonOptions& o, const RegionOptions& r, std::ostream& out) {
    const Loaded l = load_input(o);
    const EntropyProfile p = entropy_profile(l.ensemble, o.ortho_tol);
    const bool strict = !r.allow_negative_e;

    RegionSpec spec;
    if (r.kind == "eq") {
        spec = eq_region(p);
    } else {
        if (!is_blind(l.ensemble)) throw UsageError("the CE region is only defined for blind sources");
        spec = ce_region(p);
    }
    const double extent = spec.kind == RegionKind::EQ ? spec.sum_min : spec.c_min;
    const Range xr = r.x_range.empty() ? default_range(extent) : to_range(r.x_range, "--x-range");
    const Range yr = r.y_range.empty() ? default_range(extent) : to_range(r.y_range, "--y-range");
    if (r.samples < 2) throw UsageError("--samples must be at least 2");

    const auto points = boundary_polyline(spec, xr, yr, r.samples, strict);
    const std::string csv = polyline_csv(spec, points);
    const std::string json = region_json(spec, points, strict);
    if (!r.csv_path.empty()) write_file_atomic(r.csv_path, csv);
    if (!r.spec_path.empty()) write_file_atomic(r.spec_path, json);
    emit(o, r.format == "json" ? json : csv, out);
    return 0;
}

int cmd_simulate(const CommonOptions& o, const SimulateOptions& s, std::ostream& out) {
    const Loaded l = load_input(o);
    if (s.rate.has_value() == s.rate_offset.has_value())
        throw UsageError("give exactly one of --rate and --rate-offset");
    const double rate = s.rate ? *s.rate : entropy_profile(l.ensemble, o.ortho_tol).s_a + *s.rate_offset;
    const auto curve = fidelity_curve(l.ensemble, s.n_list, rate, o.caps);
    for (const auto& p : curve)
        if (!p.fidelity) throw DimensionLimitError(p.error);
    emit(o, s.format == "json" ? curve_json(curve) : curve_csv(curve), out);
    return 0;
}

int cmd_iepsilon(const CommonOptions& o, IEpsilonOptions opt, std::ostream& out) {
    const Loaded l = load_input(o);
    std::vector<double> grid = opt.grid;
    for (double eps : grid)
        if (!(eps >= 0.0 && eps < 1.0)) throw UsageError("--eps values must lie in [0, 1)");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    opt.cfg.seed = o.seed;
    opt.cfg.parallel = !opt.serial;
    const LemmaReport rep = check_lemma_properties(l.ensemble, grid, opt.cfg, !opt.skip_subadditivity);
    emit(o, lemma_report_json(rep, opt.cfg), out);
    return 0;
}

void add_common(CLI::App& sub, CommonOptions& o, bool full) {
    sub.add_option("input", o.input, "Ensemble JSON file")->required();
    sub.add_flag("--renormalize", o.renormalize, "Rescale probabilities to sum to one");
    if (!full) return;
    sub.add_option("-o,--output", o.output, "Write the primary output to this file instead of stdout");
    sub.add_option("--ortho-tol", o.ortho_tol, "Overlap below which two states count as orthogonal")
        ->capture_default_str();
    sub.add_flag("--apply-cnot", o.apply_cnot, "Apply |a,c> -> |a,c+a> to every state before the analysis");
    sub.add_option("--pre-unitary", o.pre_unitary, "JSON unitary on A(x)C applied before the analysis");
    sub.add_option("--max-vector-entries", o.caps.max_vector_entries)
        ->envname("EAQC_MAX_VECTOR_ENTRIES")
        ->capture_default_str();
    sub.add_option("--max-matrix-side", o.caps.max_matrix_side)->envname("EAQC_MAX_MATRIX_SIDE")->capture_default_str();
    sub.add_option("--max-sequences", o.caps.max_sequences)->envname("EAQC_MAX_SEQUENCES")->capture_default_str();
    sub.add_option("--max-block-log2-dim", o.caps.max_block_log2_dim)
        ->envname("EAQC_MAX_BLOCK_LOG2_DIM")
        ->capture_default_str();
    sub.add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compression rates of quantum sources with side information"};
    app.name("eaqc");
    app.require_subcommand(1);

    CommonOptions common;
    RegionOptions region;
    SimulateOptions simulate;
    IEpsilonOptions ieps;

    auto* validate_cmd = app.add_subcommand("validate", "Check an ensemble file");
    add_common(*validate_cmd, common, false);

    auto* decompose_cmd = app.add_subcommand("decompose", "Irreducible components");
    add_common(*decompose_cmd, common, true);

    auto* rates_cmd = app.add_subcommand("rates", "Entropy profile and optimal rates");
    add_common(*rates_cmd, common, true);

    auto* region_cmd = app.add_subcommand("region", "Boundary of the rate region");
    add_common(*region_cmd, common, true);
    region_cmd->add_option("--kind", region.kind)->check(CLI::IsMember({"eq", "ce"}))->capture_default_str();
    region_cmd->add_option("--x-range", region.x_range, "lo,hi of the horizontal axis")->delimiter(',')->expected(2);
    region_cmd->add_option("--y-range", region.y_range, "lo,hi of the vertical axis")->delimiter(',')->expected(2);
    region_cmd->add_option("--samples", region.samples)->capture_default_str();
    region_cmd->add_flag("--allow-negative-e", region.allow_negative_e, "Keep boundary points with E < 0");
    region_cmd->add_option("--csv", region.csv_path, "Also write the polyline CSV here");
    region_cmd->add_option("--spec", region.spec_path, "Also write the JSON region description here");
    region_cmd->add_option("--format", region.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    auto* simulate_cmd = app.add_subcommand("simulate", "Finite-blocklength Schumacher fidelity");
    add_common(*simulate_cmd, common, true);
    simulate_cmd->add_option("--n", simulate.n_list, "Blocklengths")->delimiter(',')->capture_default_str();
    auto* rate_opt = simulate_cmd->add_option("--rate", simulate.rate, "Rate Q in qubits per copy");
    simulate_cmd->add_option("--rate-offset", simulate.rate_offset, "Rate Q = S(A) + offset")->excludes(rate_opt);
    simulate_cmd->add_option("--format", simulate.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    auto* ieps_cmd = app.add_subcommand("iepsilon", "Lower bounds on I_eps over an eps grid");
    add_common(*ieps_cmd, common, true);
    ieps_cmd->add_option("--eps", ieps.grid, "Grid of eps values")->delimiter(',')->capture_default_str();
    ieps_cmd->add_option("--restarts", ieps.cfg.restarts)->capture_default_str();
    ieps_cmd->add_option("--max-iterations", ieps.cfg.max_iterations)->capture_default_str();
    ieps_cmd->add_option("--env-dim", ieps.cfg.env_dim, "0 picks min(|A|^2|C|^2, env-cap)")->capture_default_str();
    ieps_cmd->add_option("--env-cap", ieps.cfg.env_cap)->capture_default_str();
    ieps_cmd->add_option("--penalty", ieps.cfg.penalty)->capture_default_str();
    ieps_cmd->add_flag("--no-subadditivity", ieps.skip_subadditivity, "Skip the two-copy spot check");
    ieps_cmd->add_flag("--serial", ieps.serial, "Run restarts on one thread");

    std::vector<std::string> argv_store{"eaqc"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "eaqc: " << e.what() << "\n";
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(common, out);
        if (decompose_cmd->parsed()) return cmd_decompose(common, out);
        if (rates_cmd->parsed()) return cmd_rates(common, out);
        if (region_cmd->parsed()) return cmd_region(common, region, out);
        if (simulate_cmd->parsed()) return cmd_simulate(common, simulate, out);
        if (ieps_cmd->parsed()) return cmd_iepsilon(common, ieps, out);
    } catch (const IoError& e) {
        err << "eaqc: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "eaqc: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "eaqc: internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace eaqc
