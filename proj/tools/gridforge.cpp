// gridforge: batch CLI over the gridcode library. Every data-producing
// subcommand writes a CSV (also echoed to stdout) plus a sibling manifest
// JSON so runs can be reproduced byte-for-byte.

#include <CLI11.hpp>

#include "gridcode/code_switch.hpp"
#include "gridcode/decoder.hpp"
#include "gridcode/fock.hpp"
#include "gridcode/gauge.hpp"
#include "gridcode/homodyne.hpp"
#include "gridcode/io.hpp"
#include "gridcode/lattice.hpp"
#include "gridcode/search.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace gridcode;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out = ".";
    double tol = 1e-9;
    std::string command_line;
};

std::string join_argv(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

// "LO:HI:STEP" (inclusive ends, within 1e-9) or a single value
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> vals;
    auto colon1 = text.find(':');
    if (colon1 == std::string::npos) {
        vals.push_back(std::stod(text));
        return vals;
    }
    auto colon2 = text.find(':', colon1 + 1);
    if (colon2 == std::string::npos)
        throw validation_error("grid must be LO:HI:STEP or a single value");
    double lo = std::stod(text.substr(0, colon1));
    double hi = std::stod(text.substr(colon1 + 1, colon2 - colon1 - 1));
    double step = std::stod(text.substr(colon2 + 1));
    if (step <= 0) throw validation_error("grid step must be positive");
    for (double v = lo; v <= hi + 1e-9; v += step) vals.push_back(v);
    return vals;
}

void emit(const Globals& g, const std::string& base, const CsvTable& table,
          RunManifest man) {
    std::string csv_path = g.out + "/" + base + ".csv";
    std::string man_path = g.out + "/" + base + ".manifest.json";
    man.command_line = g.command_line;
    man.seed = g.seed;
    man.outputs = {csv_path, man_path};
    std::string csv = table.str();
    write_file(csv_path, csv);
    write_file(man_path, manifest_json(man));
    std::cout << csv;
}

void emit_json(const Globals& g, const std::string& base, const std::string& json,
               RunManifest man) {
    std::string json_path = g.out + "/" + base + ".json";
    std::string man_path = g.out + "/" + base + ".manifest.json";
    man.command_line = g.command_line;
    man.seed = g.seed;
    man.outputs = {json_path, man_path};
    write_file(json_path, json);
    write_file(man_path, manifest_json(man));
    std::cout << json;
    if (json.empty() || json.back() != '\n') std::cout << '\n';
}

void run_catalog(const Globals& g, const std::string& name, double param, bool json) {
    if (json) {
        if (name.empty()) throw validation_error("catalog --json needs --name");
        CodeBundle b = catalog(name, param);
        RunManifest man;
        man.code_name = name;
        man.parameters = "param=" + format_number(param);
        man.target = "generator matrix, frame and gauge of the named code";
        emit_json(g, "catalog-" + name, to_json(b), man);
        return;
    }
    CsvTable t;
    t.header = {"name", "m", "d", "min_stab_len", "min_pauli_len", "packing_ratio"};
    std::vector<std::string> names = name.empty() ? catalog_names()
                                                  : std::vector<std::string>{name};
    for (const auto& n : names) {
        CodeBundle b = catalog(n, param);
        PackingReport rep = packing_report(b.lat);
        t.add_row({n, std::to_string(b.lat.m), std::to_string(b.lat.d),
                   format_number(rep.min_stab_len), format_number(rep.min_pauli_len),
                   format_number(rep.packing_ratio)});
    }
    RunManifest man;
    man.code_name = name.empty() ? "all" : name;
    man.parameters = "param=" + format_number(param);
    man.target = "catalog summary: shortest stabilizer/Pauli lengths and packing ratios";
    emit(g, "catalog", t, man);
}

void run_analyze(const Globals& g, const std::string& code, double param,
                 const std::vector<double>& sigmas) {
    CodeBundle b = catalog(code, param);
    PackingReport rep = packing_report(b.lat);
    CsvTable t;
    t.header = {"quantity", "value"};
    t.add_row({"m", std::to_string(b.lat.m)});
    t.add_row({"d", std::to_string(b.lat.d)});
    t.add_row({"min_stab_len", format_number(rep.min_stab_len)});
    t.add_row({"min_pauli_len", format_number(rep.min_pauli_len)});
    t.add_row({"packing_ratio", format_number(rep.packing_ratio)});
    t.add_row({"max_correctable_radius", format_number(rep.max_correctable_radius)});
    for (double s : sigmas)
        t.add_row({"gaussian_error_estimate(sigma=" + format_number(s) + ")",
                   format_number(gaussian_error_estimate(b.lat, s))});
    Vec rates = hessian_rates(b.lat);
    std::ostringstream rs;
    for (Eigen::Index i = 0; i < rates.size(); ++i) {
        if (i) rs << ';';
        rs << format_number(rates(i));
    }
    t.add_row({"hessian_rates", rs.str()});
    RunManifest man;
    man.code_name = code;
    man.parameters = "param=" + format_number(param);
    man.target = "packing figures, Gaussian error estimate and dissipation rates";
    emit(g, "analyze-" + code, t, man);
}

void run_search(const Globals& g, const std::string& family, long dmax, long dmin,
                bool full_orbit) {
    CsvTable t;
    t.header = {"d", "count", "witness"};
    for (long d = dmin; d <= dmax; ++d) {
        std::vector<SearchSolution> sols = family == "tesseract"
                                               ? search_tesseract(d)
                                               : search_d4(d, full_orbit);
        std::string wit;
        if (!sols.empty()) {
            std::ostringstream w;
            w << sols[0].abc[0] << ':' << sols[0].abc[1] << ':' << sols[0].abc[2];
            wit = w.str();
        }
        t.add_row({std::to_string(d), std::to_string(sols.size()), wit});
    }
    RunManifest man;
    man.code_name = family;
    man.parameters = "dmin=" + std::to_string(dmin) + " dmax=" + std::to_string(dmax);
    man.target = "dimension table of the Diophantine code family search";
    emit(g, "search-" + family, t, man);
}

void run_flowmap(const Globals& g, const std::string& code, const std::string& plane,
                 int res) {
    CodeBundle b = catalog(code);
    int i = 0, j = 1;
    if (std::sscanf(plane.c_str(), "%d,%d", &i, &j) != 2)
        throw validation_error("--plane expects i,j (1-based stabilizer indices)");
    auto cells = error_map_grid(b.lat, b.frame, i - 1, j - 1, res);
    CsvTable t;
    t.header = {"u", "v", "label"};
    for (const auto& c : cells)
        t.add_row({format_number(c.u), format_number(c.v), std::string(1, c.label)});
    RunManifest man;
    man.code_name = code;
    man.parameters = "plane=" + plane + " res=" + std::to_string(res);
    man.target = "fixed-point class of the dissipation flow over an error-plane grid";
    emit(g, "flowmap-" + code, t, man);
}

void run_ancilla_sweep(const Globals& g, const std::string& code, int j1,
                       const std::string& eps_grid, int samples, bool zigzag) {
    CodeBundle b = catalog(code);
    int j = j1 - 1;
    std::vector<Vec> waypoints;
    if (zigzag) {
        // route via s_j +/- s_k, picking the sign whose two legs stay in the
        // identity region of the ideal flow (ties break to the minus sign)
        int k = (j == 0) ? 1 : 0;
        Vec sj = b.lat.S.row(j).transpose();
        Vec sk = b.lat.S.row(k).transpose();
        auto bad_count = [&](const Vec& w) {
            int bad = 0;
            for (int i = 1; i <= 9; ++i) {
                double h = i / 10.0;
                if (classify_error(b.lat, b.frame, Vec(h * w)) != 'I') ++bad;
                if (classify_error(b.lat, b.frame, Vec(w + h * (sj - w))) != 'I') ++bad;
            }
            return bad;
        };
        Vec wm = sj - sk;
        Vec wp = sj + sk;
        waypoints.push_back(bad_count(wp) < bad_count(wm) ? wp : wm);
    }
    CsvTable t;
    t.header = {"epsilon", "p", "stderr"};
    for (double eps : parse_grid(eps_grid)) {
        SmearConfig sm;
        sm.epsilon = eps;
        sm.mc_samples = samples;
        auto r = ancilla_decay_error_prob(b.lat, b.frame, j, sm, waypoints, g.seed,
                                          g.threads);
        t.add_row({format_number(eps), format_number(r.estimate),
                   format_number(r.stderr_)});
    }
    RunManifest man;
    man.code_name = code;
    man.parameters = "j=" + std::to_string(j1) + " eps=" + eps_grid +
                     " samples=" + std::to_string(samples) +
                     (zigzag ? " zigzag" : "");
    man.target = "integrated logical-error probability for an ancilla decay along a "
                 "controlled translation";
    emit(g, "ancilla-sweep-" + code, t, man);
}

void run_homodyne(const Globals& g, const std::string& code, const std::string& db_range,
                  long trials, bool noisy) {
    CodeBundle b = catalog(code);
    CsvTable t;
    t.header = {"db", "p", "stderr"};
    for (double db : parse_grid(db_range)) {
        NoiseModel nm = NoiseModel::from_db(db, noisy);
        auto r = run_trials(b.lat, b.frame, nm, trials, g.seed, g.threads);
        t.add_row({format_number(db), format_number(r.p_logical),
                   format_number(r.stderr_)});
    }
    RunManifest man;
    man.code_name = code;
    man.parameters = "db=" + db_range + " trials=" + std::to_string(trials) +
                     (noisy ? " noisy-ancilla" : "");
    man.target = "logical error probability vs input squeezing under homodyne decoding";
    emit(g, "homodyne-" + code, t, man);
}

void add_check(CsvTable& t, const std::string& name, double value, bool pass) {
    t.add_row({name, format_number(value), pass ? "pass" : "FAIL"});
}

void run_fock_verify(const Globals& g, const std::string& suite) {
    CsvTable t;
    t.header = {"check", "value", "status"};
    Rng rng(g.seed, 0);
    if (suite == "codewords") {
        auto sq = catalog("square");
        double beta = 0.2;
        for (char p : {'I', 'X', 'Z'}) {
            FockState st = build_codeword(sq, p, beta, {50}, false);
            double e = expectation_t(st, sq.lat.S.row(0), beta).real();
            add_check(t, std::string("square_") + p + "_T1", e, e > 0.98);
        }
        auto qn = catalog("qunaught", 1.0);
        FockState v = build_codeword(qn, 'I', beta, {50}, false);
        double mass = 0;
        for (int n = 0; n < 50; n += 4) mass += std::norm(v.amp(n));
        add_check(t, "qunaught_mod4_mass", mass, mass > 0.999);
    } else if (suite == "gates") {
        auto sq = catalog("square");
        double beta = 0.2;
        FockState plus = build_codeword(sq, 'X', beta, {50}, false);
        FockState a = plus, bst = plus;
        apply_kerr(a, 0, kPi / 8);
        apply_kerr(a, 0, kPi / 8);
        apply_rotation(bst, 0, kPi / 2);
        double fid = std::abs(a.amp.dot(bst.amp));
        add_check(t, "double_kerr_vs_quarter_rotation", fid, fid > 0.99);
        FockState env = plus;
        apply_rotation(env, 0, 0.3);
        apply_envelope(env, beta, false);
        FockState env2 = plus;
        apply_envelope(env2, beta, false);
        apply_rotation(env2, 0, 0.3);
        double comm = (env.amp - env2.amp).norm();
        add_check(t, "rotation_envelope_commutator", comm, comm < 1e-8);
    } else if (suite == "sbs") {
        for (const char* name : {"square", "tesseract"}) {
            CodeBundle b = catalog(name);
            std::vector<int> dims(b.lat.m, b.lat.m == 1 ? 50 : 32);
            SbsDriver drv(b, dims, 0.1);
            drv.state = FockState::vacuum(dims, true);
            SbsOptions opt;
            opt.epsilon = 0.1;
            for (int c = 0; c < 50; ++c)
                for (int j = 0; j < 2 * b.lat.m; ++j) drv.round(j, opt, rng);
            double worst = 1;
            for (int j = 0; j < 2 * b.lat.m; ++j)
                worst = std::min(worst, drv.stabilizer_expectation(j));
            add_check(t, std::string(name) + "_min_T_after_50_cycles", worst,
                      worst >= 0.9);
        }
    } else if (suite == "decay") {
        auto tess = catalog("tesseract");
        auto d = decay_error_prob(tess, 0.044, 1, 6, 40, g.seed, {32, 32}, g.threads);
        add_check(t, "tesseract_decay_error", d.p, std::abs(d.p - 0.11) < 0.06);
    } else {
        throw validation_error("unknown suite: " + suite);
    }
    RunManifest man;
    man.code_name = suite;
    man.parameters = "suite=" + suite;
    man.target = "quick quantum verification checks at desk-scale truncation";
    emit(g, "fock-verify-" + suite, t, man);
}

void run_fock_sweep(const Globals& g, const std::string& code, const std::string& eta_grid,
                    double epsilon, int rounds, int trials) {
    CodeBundle b = catalog(code);
    std::vector<int> dims(b.lat.m, b.lat.m == 1 ? 50 : 32);
    CsvTable t;
    t.header = {"eta", "p", "stderr"};
    // flip the Pauli that anticommutes with a half-s1 translation
    Vec s1 = b.lat.S.row(0);
    char probe = 'Z';
    for (char p : {'Z', 'X', 'Y'}) {
        int row = p == 'X' ? 0 : (p == 'Y' ? 1 : 2);
        double w = omega_form(s1, b.frame.L0.row(row));
        if (std::abs(w - std::round(w)) > 0.25) {
            probe = p;
            break;
        }
    }
    for (double eta : parse_grid(eta_grid)) {
        Vec e = eta * s1;
        auto r = quantum_error_prob(b, probe, e, epsilon, rounds, trials, g.seed, dims,
                                    g.threads);
        t.add_row({format_number(eta), format_number(r.p), format_number(r.stderr_)});
    }
    RunManifest man;
    man.code_name = code;
    man.parameters = "eta=" + eta_grid + " epsilon=" + format_number(epsilon) +
                     " rounds=" + std::to_string(rounds) +
                     " trials=" + std::to_string(trials);
    man.target = "quantum logical error probability vs colinear error fraction";
    emit(g, "fock-sweep-" + code, t, man);
}

void run_concat(const Globals& g, const std::string& base,
                const std::vector<std::string>& generators) {
    CodeBundle b = catalog(base);
    QubitStabilizerCode qc = parse_stabilizer_code(generators);
    CodeBundle lifted = concatenate(b, qc);
    // report any catalog code with the same lattice
    std::string equal_to;
    for (const auto& n : catalog_names()) {
        CodeBundle c = catalog(n);
        if (c.lat.m == lifted.lat.m && same_lattice(lifted.lat.S, c.lat.S)) {
            equal_to = n;
            break;
        }
    }
    std::ostringstream gens;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (i) gens << ',';
        gens << generators[i];
    }
    RunManifest man;
    man.code_name = lifted.name;
    man.parameters = "base=" + base + " generators=" + gens.str() +
                     (equal_to.empty() ? "" : " same_lattice_as=" + equal_to);
    man.target = "lifted generator matrix of a qubit code concatenated over a base code";
    emit_json(g, "concat-" + base, to_json(lifted), man);
}

}  // namespace

int main(int argc, char** argv) {
    Globals g;
    g.command_line = join_argv(argc, argv);
    if (const char* env = std::getenv("GRIDFORGE_THREADS")) g.threads = std::atoi(env);
    if (g.threads < 1) g.threads = 1;

    CLI::App app{"gridforge: multimode grid-code tables and figure data"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "RNG seed (default 0)");
    app.add_option("--threads", g.threads, "worker threads (env GRIDFORGE_THREADS)");
    app.add_option("--out", g.out, "output directory (default .)");
    app.add_option("--tol", g.tol, "numerical tolerance");

    std::string name, code = "square", param_family = "tesseract", plane = "1,2";
    std::string eps_grid = "0.01:0.1:0.01", db_range = "9:15:1", eta_grid = "0:1:0.125";
    std::string suite = "codewords", concat_base = "diamond";
    std::vector<std::string> generators;
    double param = 0, epsilon = 0.1;
    long dmax = 20, dmin = 1, trials = 100000;
    int res = 8, j1 = 1, samples = 20000, rounds = 10, fock_trials = 100;
    bool json = false, full_orbit = false, zigzag = false, noisy = false;
    std::vector<double> sigmas;

    auto* c_cat = app.add_subcommand("catalog", "named code catalog");
    c_cat->add_option("--name", name, "code name (omit for the full table)");
    c_cat->add_option("--param", param, "family parameter (eta / m / scale)");
    c_cat->add_flag("--json", json, "emit the full code bundle as JSON");

    auto* c_an = app.add_subcommand("analyze", "packing and rate report");
    c_an->add_option("--code", code, "code name")->required();
    c_an->add_option("--param", param, "family parameter");
    c_an->add_option("--sigma", sigmas, "Gaussian widths to evaluate");

    auto* c_se = app.add_subcommand("search", "Diophantine family search");
    c_se->add_option("--family", param_family, "tesseract or d4")
        ->check(CLI::IsMember({"tesseract", "d4"}));
    c_se->add_option("--dmax", dmax, "largest dimension")->required();
    c_se->add_option("--dmin", dmin, "smallest dimension");
    c_se->add_flag("--full-orbit", full_orbit, "keep sign/permutation duplicates");

    auto* c_fm = app.add_subcommand("flowmap", "flow fixed-point grid");
    c_fm->add_option("--code", code, "code name")->required();
    c_fm->add_option("--plane", plane, "i,j stabilizer plane (1-based)");
    c_fm->add_option("--res", res, "grid resolution per axis");

    auto* c_as = app.add_subcommand("ancilla-sweep", "decay error vs epsilon");
    c_as->add_option("--code", code, "code name")->required();
    c_as->add_option("--j", j1, "stabilizer index (1-based)");
    c_as->add_option("--eps-grid", eps_grid, "LO:HI:STEP or single epsilon");
    c_as->add_option("--samples", samples, "MC samples per point");
    c_as->add_flag("--zigzag", zigzag, "route through s_j - s_1");

    auto* c_ho = app.add_subcommand("homodyne", "homodyne Monte Carlo sweep");
    c_ho->add_option("--code", code, "code name")->required();
    c_ho->add_option("--db-range", db_range, "LO:HI:STEP in dB");
    c_ho->add_option("--trials", trials, "trials per point");
    c_ho->add_flag("--noisy-ancilla", noisy, "noisy ancilla readout model");

    auto* c_fo = app.add_subcommand("fock", "truncated Fock-space checks");
    c_fo->require_subcommand(1);
    auto* c_fv = c_fo->add_subcommand("verify", "canned verification suites");
    c_fv->add_option("--suite", suite, "codewords|gates|sbs|decay")
        ->check(CLI::IsMember({"codewords", "gates", "sbs", "decay"}));
    auto* c_fs = c_fo->add_subcommand("sweep", "quantum error-probability sweep");
    c_fs->add_option("--code", code, "code name")->required();
    c_fs->add_option("--eta-grid", eta_grid, "LO:HI:STEP along s1");
    c_fs->add_option("--epsilon", epsilon, "sBs epsilon");
    c_fs->add_option("--rounds", rounds, "stabilization cycles");
    c_fs->add_option("--trials", fock_trials, "trajectories per point");

    auto* c_cc = app.add_subcommand("concat", "concatenate a qubit code over a base");
    c_cc->add_option("--base", concat_base, "single-mode base code");
    c_cc->add_option("--generators", generators, "Pauli strings, e.g. YY")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (*c_cat) run_catalog(g, name, param, json);
        if (*c_an) run_analyze(g, code, param, sigmas);
        if (*c_se) run_search(g, param_family, dmax, dmin, full_orbit);
        if (*c_fm) run_flowmap(g, code, plane, res);
        if (*c_as) run_ancilla_sweep(g, code, j1, eps_grid, samples, zigzag);
        if (*c_ho) run_homodyne(g, code, db_range, trials, noisy);
        if (*c_fv) run_fock_verify(g, suite);
        if (*c_fs) run_fock_sweep(g, code, eta_grid, epsilon, rounds, fock_trials);
        if (*c_cc) run_concat(g, concat_base, generators);
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
