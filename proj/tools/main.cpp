// extremal-annulus: minimizers, certificates, and phase diagrams for
// energy-minimal deformations between annuli and rectangles.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "extann/errors.hpp"
#include "extann/gauge.hpp"
#include "extann/grid.hpp"
#include "extann/grotzsch.hpp"
#include "extann/radial.hpp"
#include "extann/transform.hpp"

using json = nlohmann::json;
using namespace extann;

namespace {

constexpr const char* kSchema = "extremal-annulus/1";

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CliError(std::string(what) + ": expected two comma-separated values, got '" + s + "'");
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CliError(std::string(what) + ": could not parse '" + s + "'");
    }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CliError(std::string(what) + ": could not parse '" + item + "'");
        }
    }
    if (out.empty()) throw CliError(std::string(what) + ": empty list");
    return out;
}

std::pair<std::string, std::optional<double>> split_spec(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {s, std::nullopt};
    try {
        return {s.substr(0, colon), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CliError("could not parse parameter in spec '" + s + "'");
    }
}

DistortionGauge parse_gauge(const std::string& spec) {
    const auto [family, param] = split_spec(spec);
    if (family == "identity") return DistortionGauge::identity();
    if (family == "linear-log") return DistortionGauge::linear_log();
    if (family == "power") {
        if (!param) throw CliError("gauge 'power' needs a parameter, e.g. power:2");
        return DistortionGauge::power(*param);
    }
    if (family == "shifted-power") {
        if (!param) throw CliError("gauge 'shifted-power' needs a parameter, e.g. shifted-power:1.5");
        return DistortionGauge::shifted_power(*param);
    }
    throw CliError("unknown gauge family '" + family + "' (identity | power:p | linear-log | shifted-power:p)");
}

WeightFunction parse_weight(const std::string& spec, double ell) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon == std::string::npos ? spec.size() : colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (family == "nitsche") return WeightFunction::nitsche(ell);
    if (family == "constant")
        return WeightFunction::constant(arg.empty() ? 1.0 : std::stod(arg), ell);
    if (family == "power-well") {
        if (arg.empty()) throw CliError("weight 'power-well' needs a parameter, e.g. power-well:1.5");
        return WeightFunction::power_well(std::stod(arg), ell);
    }
    if (family == "table") {
        if (arg.empty()) throw CliError("weight 'table' needs a file path, e.g. table:weights.csv");
        std::ifstream in(arg);
        if (!in) throw CliError("cannot open weight table '" + arg + "'");
        std::vector<std::pair<double, double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto [x, v] = parse_pair(line, "weight table row");
            rows.emplace_back(x, v);
        }
        return WeightFunction::from_table(rows, ell);
    }
    throw CliError("unknown weight '" + family + "' (nitsche | constant[:c] | power-well:s | table:file)");
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path);
    if (!f) throw CliError("cannot open output file " + path.string());
    return f;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void emit(const std::string& dir, const std::string& name, const json& j) {
    auto f = open_out(dir, name);
    f << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
}

int run_radial(const std::string& dom_s, const std::string& tgt_s, const std::string& out) {
    const auto [r, R] = parse_pair(dom_s, "--dom");
    const auto [rs, Rs] = parse_pair(tgt_s, "--tgt");
    const Annulus dom(r, R), tgt(rs, Rs);
    const Regime regime = classify_regime(dom, tgt);

    json j;
    j["schema"] = kSchema;
    j["dom"] = {dom.r_inner(), dom.r_outer()};
    j["tgt"] = {tgt.r_inner(), tgt.r_outer()};
    j["regime"] = to_string(regime);
    j["nitsche_bound_holds"] = nitsche_bound_holds(dom, tgt);

    RadialProfile p = (regime == Regime::BeyondNitsche) ? beyond_nitsche_profile(dom, tgt)
                                                        : harmonic_radial(dom, tgt);
    if (regime == Regime::BeyondNitsche) {
        j["profile"]["rho"] = p.rho();
        j["profile"]["plateau_value"] = p.plateau_value();
    }
    j["profile"]["a"] = p.coef_a();
    j["profile"]["b"] = p.coef_b();
    j["profile"]["characteristic_c"] = characteristic_constant(p).c;

    const RadialEnergy e = radial_dirichlet_energy(p);
    j["dirichlet_energy"]["closed_form"] = e.closed_form;
    j["dirichlet_energy"]["quadrature"] = e.quadrature;

    emit(out, "radial.json", j);
    return 0;
}

int run_grotzsch(double ell, double L, const std::string& gauge_s, const std::string& weight_s,
                 int emit_degenerate, const std::string& out) {
    if (!(ell > 0.0) || !(L > 0.0)) throw CliError("--ell and --L must be positive");
    GrotzschProblem problem{ell, L, parse_gauge(gauge_s), parse_weight(weight_s, ell)};
    const GrotzschSolution sol = solve_boundary(problem);

    json j;
    j["schema"] = kSchema;
    j["ell"] = ell;
    j["L"] = L;
    j["gauge"] = problem.gauge.name();
    j["weight"] = problem.weight.name();
    j["verdict"] = to_string(sol.verdict);
    j["alpha"] = sol.alpha;
    j["L_achieved"] = sol.L_achieved;
    j["max_ode_residual"] = sol.max_ode_residual;
    if (std::isfinite(sol.L0)) {
        j["L0"] = sol.L0;
        j["cosh_2pi_L0"] = std::cosh(2.0 * M_PI * sol.L0);
        j["exp_2pi_ell"] = std::exp(2.0 * M_PI * ell);
    }

    if (!sol.samples.empty()) {
        auto csv = open_out(out, "profile.csv");
        csv << "# " << kSchema << ", profile, x, u, u_x\n";
        for (const auto& s : sol.samples)
            csv << fmt17(s.x) << ", " << fmt17(s.u) << ", " << fmt17(s.u_x) << "\n";
    }

    if (emit_degenerate > 0) {
        if (sol.verdict != Verdict::NitschePhenomenon)
            throw CliError("--emit-degenerate requires a problem with no minimizer (L > L0)");
        DegenerateFamily fam(problem);
        auto csv = open_out(out, "degenerate.csv");
        csv << "# " << kSchema << ", degenerate, j, energy\n";
        csv << "# unattainable_bound, " << fmt17(fam.unattainable_bound()) << "\n";
        for (int jj = 1; jj <= emit_degenerate; jj *= 2)
            csv << jj << ", " << fmt17(fam.energy(jj)) << "\n";
        j["unattainable_bound"] = fam.unattainable_bound();
    }

    emit(out, "grotzsch.json", j);
    return sol.verdict == Verdict::NitschePhenomenon ? 3 : 0;
}

int run_phase(const std::string& gauge_family, const std::string& params_s,
              const std::string& ratios_s, double ell, const std::string& weight_s,
              const std::string& out) {
    if (!(ell > 0.0)) throw CliError("--ell must be positive");
    const std::vector<double> ratios = parse_list(ratios_s, "--ratios");
    std::vector<double> params;
    if (gauge_family == "identity" || gauge_family == "linear-log")
        params = {0.0};
    else
        params = parse_list(params_s, "--params");
    const WeightFunction weight = parse_weight(weight_s, ell);

    struct Row {
        double p;
        double L0 = std::numeric_limits<double>::infinity();
        std::vector<std::string> cells;
        int inconclusive = 0;
    };

    auto work = [&](double p) {
        Row row;
        row.p = p;
        DistortionGauge gauge = (gauge_family == "identity") ? DistortionGauge::identity()
                                : (gauge_family == "linear-log")
                                    ? DistortionGauge::linear_log()
                                    : parse_gauge(gauge_family + ":" + fmt17(p));
        bool l0_known = true;
        try {
            row.L0 = critical_length({ell, ell, gauge, weight});
        } catch (const InconclusiveConvergence&) {
            l0_known = false;
        }
        for (double ratio : ratios) {
            if (ratio == 1.0) {
                row.cells.push_back("identity");
            } else if (!l0_known) {
                row.cells.push_back("?");
                ++row.inconclusive;
            } else {
                row.cells.push_back(ratio * ell > row.L0 ? "phenomenon" : "exists");
            }
        }
        return row;
    };

    std::vector<std::future<Row>> futs;
    for (double p : params) futs.push_back(std::async(std::launch::async, work, p));

    auto csv = open_out(out, "phase.csv");
    csv << "# " << kSchema << ", phase, gauge=" << gauge_family << ", weight=" << weight.name()
        << ", ell=" << fmt17(ell) << "\n";
    csv << "p, L0_over_ell";
    for (double ratio : ratios) csv << ", L_over_ell=" << fmt17(ratio);
    csv << "\n";
    int inconclusive = 0;
    std::ostringstream body;
    for (auto& f : futs) {
        const Row row = f.get();
        body << fmt17(row.p) << ", "
             << (std::isfinite(row.L0) ? fmt17(row.L0 / ell) : std::string("inf"));
        for (const auto& c : row.cells) body << ", " << c;
        body << "\n";
        inconclusive += row.inconclusive;
    }
    csv << body.str();
    csv << "# inconclusive, " << inconclusive << "\n";
    std::cout << "phase table written (" << params.size() << " rows, " << inconclusive
              << " inconclusive cells)\n";
    return 0;
}

int run_verify(const std::string& dom_s, const std::string& tgt_s, const std::string& grid_s,
               int trials, uint64_t seed, const std::string& map_file, const std::string& out) {
    const auto [r, R] = parse_pair(dom_s, "--dom");
    const auto [rs, Rs] = parse_pair(tgt_s, "--tgt");
    const Annulus dom(r, R), tgt(rs, Rs);
    const auto [gt, gth] = parse_pair(grid_s, "--grid");
    const int n_t = static_cast<int>(gt), n_theta = static_cast<int>(gth);
    if (n_t < 3 || n_theta < 3) throw CliError("--grid: sizes must be at least 3");

    PolarGridMap candidate = [&]() {
        if (!map_file.empty()) {
            std::ifstream in(map_file);
            if (!in) throw CliError("cannot open map file '" + map_file + "'");
            LoadedGridMap loaded = read_grid_csv(in);
            if (!loaded.polar) throw CliError("verify needs a polar grid map");
            return *loaded.polar;
        }
        const Regime regime = classify_regime(dom, tgt);
        RadialProfile p = (regime == Regime::BeyondNitsche) ? beyond_nitsche_profile(dom, tgt)
                                                            : harmonic_radial(dom, tgt);
        return sample_radial(p, tgt, n_t, n_theta);
    }();

    json j;
    j["schema"] = kSchema;
    j["dom"] = {dom.r_inner(), dom.r_outer()};
    j["tgt"] = {tgt.r_inner(), tgt.r_outer()};
    j["trials"] = trials;
    j["seed"] = seed;
    bool all_pass = true;

    const AdmissibilityReport adm = check_admissible(candidate);
    j["admissible"]["pass"] = adm.admissible();
    j["admissible"]["max_boundary_dev"] = adm.max_boundary_dev;
    all_pass = all_pass && adm.admissible();

    EnergyFunctional fn;
    fn.kind = EnergyFunctional::Kind::Dirichlet;
    const CertificateReport cert = minimality_certificate(candidate, fn, trials, seed);
    j["certificate"]["pass"] = cert.pass;
    j["certificate"]["candidate_energy"] = cert.candidate_energy;
    j["certificate"]["budget"] = cert.budget;
    j["certificate"]["min_gap"] = cert.min_gap;
    j["certificate"]["median_gap"] = cert.median_gap;
    j["certificate"]["trials_run"] = cert.trials_run;
    j["certificate"]["trials_rejected"] = cert.trials_rejected;
    j["certificate"]["worst_seed"] = cert.worst_seed;
    all_pass = all_pass && cert.pass;

    // Free-Lagrangian invariants on the candidate and perturbations of it.
    const double logs_tgt = std::log(candidate.bc.ratio());
    const double logs_dom = std::log(candidate.dom.ratio());
    FreeLagrangianSpec f3{FreeLagrangianKind::F3, [](double s) { return 1.0 / s; }};
    FreeLagrangianSpec f4{FreeLagrangianKind::F4, [](double t) { return 1.0 / t; }};
    double worst3 = 0.0, worst4 = 0.0;
    for (int k = 0; k <= 20; ++k) {
        PolarGridMap m = candidate;
        if (k > 0) {
            try {
                m = perturb_map(candidate, 0.01, seed + 1000 + k);
            } catch (const RejectedPerturbation&) {
                continue;
            }
        }
        const double v3 = free_lagrangian(m, f3).value / (2.0 * M_PI);
        const double v4 = free_lagrangian(m, f4).value / (2.0 * M_PI);
        worst3 = std::max(worst3, std::abs(v3 - logs_tgt) / logs_tgt);
        worst4 = std::max(worst4, std::abs(v4 - logs_dom) / logs_dom);
    }
    const bool fl_pass = worst3 <= 1e-4 && worst4 <= 1e-4;
    j["free_lagrangian"]["pass"] = fl_pass;
    j["free_lagrangian"]["f3_worst_rel_dev"] = worst3;
    j["free_lagrangian"]["f4_worst_rel_dev"] = worst4;
    all_pass = all_pass && fl_pass;

    j["pass"] = all_pass;
    emit(out, "verify.json", j);
    return all_pass ? 0 : 5;
}

// Expand "--config FILE" (or --config=FILE) into the key=value pairs the
// file holds, as if they had been passed as --key value on the command line.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        std::string path;
        if (arg == "--config") {
            if (i + 1 >= argc) throw CliError("--config: missing file name");
            path = argv[++i];
        } else if (arg.rfind("--config=", 0) == 0) {
            path = arg.substr(9);
        } else {
            args.push_back(std::move(arg));
            continue;
        }
        std::ifstream in(path);
        if (!in) throw CliError("--config: cannot open '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            const auto e = line.find_last_not_of(" \t\r");
            line = line.substr(b, e - b + 1);
            if (line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw CliError("--config: expected key=value, got '" + line + "'");
            std::string key = line.substr(0, eq);
            std::string val = line.substr(eq + 1);
            while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
            const auto vb = val.find_first_not_of(" \t");
            val = (vb == std::string::npos) ? "" : val.substr(vb);
            if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') &&
                val.back() == val.front())
                val = val.substr(1, val.size() - 2);
            args.push_back("--" + key);
            args.push_back(val);
        }
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremal-annulus: energy-minimal deformations of annuli and rectangles"};
    app.require_subcommand(1);

    std::string dom_s, tgt_s, out = ".";
    std::string gauge_s = "identity", weight_s = "constant:1";
    std::string grid_s = "257,256", map_file, params_s, ratios_s = "1,1.5,2,4";
    double ell = 1.0, L = 1.0;
    int trials = 100, emit_degenerate = 0;
    uint64_t seed = 7;

    auto* radial = app.add_subcommand("radial", "radial minimizer between annuli");
    radial->add_option("--dom", dom_s, "domain annulus r,R")->required();
    radial->add_option("--tgt", tgt_s, "target annulus r,R")->required();
    radial->add_option("--out", out, "output directory");

    auto* grotzsch = app.add_subcommand("grotzsch", "weighted Grotzsch minimizer on a rectangle");
    grotzsch->add_option("--ell", ell, "source rectangle length")->required();
    grotzsch->add_option("--L", L, "target rectangle length")->required();
    grotzsch->add_option("--gauge", gauge_s, "identity | power:p | linear-log | shifted-power:p");
    grotzsch->add_option("--weight", weight_s, "nitsche | constant[:c] | power-well:s | table:file");
    grotzsch->add_option("--emit-degenerate", emit_degenerate,
                         "emit minimizing-sequence energies for j = 1,2,4,...,jmax");
    grotzsch->add_option("--out", out, "output directory");

    auto* phase = app.add_subcommand("phase", "phenomenon phase table over a gauge sweep");
    phase->add_option("--gauge", gauge_s, "gauge family: identity | power | linear-log | shifted-power");
    phase->add_option("--params", params_s, "comma list of gauge parameters");
    phase->add_option("--ratios", ratios_s, "comma list of L/ell ratios");
    phase->add_option("--ell", ell, "source rectangle length");
    phase->add_option("--weight", weight_s, "weight spec");
    phase->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "minimality certificate and invariant suite");
    verify->add_option("--dom", dom_s, "domain annulus r,R")->required();
    verify->add_option("--tgt", tgt_s, "target annulus r,R")->required();
    verify->add_option("--grid", grid_s, "n_t,n_theta");
    verify->add_option("--trials", trials, "perturbation trials");
    verify->add_option("--seed", seed, "base seed");
    verify->add_option("--map", map_file, "candidate grid-map CSV (default: constructed radial map)");
    verify->add_option("--out", out, "output directory");

    // Config files are pre-expanded into ordinary arguments; register the
    // flag on every subcommand so it still shows up in --help.
    std::string config_stub;
    for (auto* sub : {radial, grotzsch, phase, verify})
        sub->add_option("--config", config_stub,
                        "key=value config file; keys match the long flag names");

    std::vector<std::string> args;
    try {
        args = expand_config_args(argc, argv);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end());
    CLI11_PARSE(app, std::move(args));

    try {
        if (radial->parsed()) return run_radial(dom_s, tgt_s, out);
        if (grotzsch->parsed())
            return run_grotzsch(ell, L, gauge_s, weight_s, emit_degenerate, out);
        if (phase->parsed())
            return run_phase(gauge_s, params_s, ratios_s, ell, weight_s, out);
        if (verify->parsed())
            return run_verify(dom_s, tgt_s, grid_s, trials, seed, map_file, out);
    } catch (const InconclusiveConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
