#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include "dicke2/dynamics.hpp"
#include "dicke2/quantum.hpp"
#include "dicke2/serialize.hpp"
#include "dicke2/stability.hpp"
#include "dicke2/steady_state.hpp"
#include "dicke2/sweep.hpp"

namespace fs = std::filesystem;
using namespace dicke2;

namespace {

constexpr const char* kVersion = "dicke2 0.1.0";

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitResource = 4;

struct CommonOptions {
    double omega_c = 1.0;
    double omega_a = 1.0;
    double kappa = 1.0;
    double lambda = 1.0;
    double n1 = 1.0;
    double n2 = -1.0;        // raw count; takes precedence when set
    double n2_ratio = 0.3;   // n2 = ratio * n1
    std::string out_dir = ".";
    bool reproducible = false;
    int jobs = 1;

    ModelParams params() const {
        ModelParams p;
        p.omega_c = omega_c;
        p.omega_a = omega_a;
        p.kappa = kappa;
        p.lambda = lambda;
        p.n1 = n1;
        p.n2 = n2 >= 0.0 ? n2 : n2_ratio * n1;
        p.validate();
        return p;
    }
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--omega-c", opt.omega_c, "Cavity frequency [kappa units]");
    cmd->add_option("--omega-a", opt.omega_a, "Atomic transition frequency [kappa units]");
    cmd->add_option("--kappa", opt.kappa, "Cavity decay rate (sets the unit scale)");
    cmd->add_option("--lambda", opt.lambda, "Atom-field coupling [kappa units]");
    cmd->add_option("--n1", opt.n1, "First ensemble size N1");
    cmd->add_option("--n2", opt.n2, "Second ensemble size N2 (overrides --n2-ratio)");
    cmd->add_option("--n2-ratio", opt.n2_ratio, "N2/N1 ratio (default 0.3)");
    cmd->add_option("--out-dir", opt.out_dir, "Directory for output files");
    cmd->add_flag("--reproducible", opt.reproducible,
                  "Omit timestamps so outputs are bit-reproducible");
    cmd->add_option("--jobs", opt.jobs, "Worker cap for grid sweeps")->check(CLI::Range(1, 256));
}

fs::path prepare_out_dir(const CommonOptions& opt) {
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    return dir;
}

MetaBlock meta_for(const CommonOptions& opt, const ModelParams& params,
                   const std::string& command) {
    MetaBlock meta;
    meta.tool = kVersion;
    meta.command = command;
    meta.params = &params;
    meta.reproducible = opt.reproducible;
    return meta;
}

json meta_json(const CommonOptions& opt, const ModelParams& params) {
    json j{{"tool", kVersion}, {"params", to_json(params)}};
    if (!opt.reproducible) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["timestamp"] = buf;
    }
    return j;
}

// ---------------------------------------------------------------- thresholds

int cmd_thresholds(const CommonOptions& opt) {
    const ModelParams p = opt.params();
    const CriticalCouplings c = critical_couplings(p);
    json j = meta_json(opt, p);
    j["lambda_c_xfo"] = std::isfinite(c.xfo) ? json(c.xfo) : json(nullptr);
    j["lambda_c_xfi"] = c.xfi;
    std::cout << j.dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------- fixed-points

int cmd_fixed_points(const CommonOptions& opt) {
    const ModelParams p = opt.params();
    const auto fps = all_fixed_points(p);
    json records = json::array();
    int stable_count = 0;
    int existing_count = 0;
    for (const auto& fp : fps) {
        json r = to_json(fp, p);
        if (fp.exists) {
            ++existing_count;
            const StabilityReport report = classify_stability(fp, p);
            r["stability"] = to_json(report);
            stable_count += report.verdict == Verdict::stable ? 1 : 0;
        } else {
            r["stability"] = nullptr;
        }
        records.push_back(std::move(r));
    }
    json j = meta_json(opt, p);
    const CriticalCouplings c = critical_couplings(p);
    j["lambda_c_xfo"] = std::isfinite(c.xfo) ? json(c.xfo) : json(nullptr);
    j["lambda_c_xfi"] = c.xfi;
    j["n_existing"] = existing_count;
    j["n_stable"] = stable_count;
    j["fixed_points"] = std::move(records);

    const fs::path dir = prepare_out_dir(opt);
    write_text_file((dir / "fixed_points.json").string(), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------ stability-scan

int cmd_stability_scan(const CommonOptions& opt, double lambda_min, double lambda_max,
                       int count) {
    const ModelParams p = opt.params();
    if (!(lambda_min < lambda_max) || count < 2)
        throw DomainError("stability-scan: need lambda-min < lambda-max and count >= 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            lambda_min + (lambda_max - lambda_min) * i / (count - 1.0);
    const auto rows = bifurcation_scan(p, grid);
    const fs::path dir = prepare_out_dir(opt);
    write_text_file((dir / "stability_scan.csv").string(),
                    scan_csv(rows, p, meta_for(opt, p, "stability-scan")));
    std::cout << "wrote " << (dir / "stability_scan.csv").string() << " (" << rows.size()
              << " rows)\n";
    return 0;
}

// ------------------------------------------------------------------- evolve

struct EvolveOptions {
    std::string preset;      // fig3, figS3a, figS3c or empty
    std::string init_label;  // start from a labeled fixed point
    double delta_a_re = 1e-3;
    double delta_a_im = 0.0;
    double t_final = 0.0;    // 0: preset/default decides
    int samples = 2000;
    bool parity_flip = false;
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
};

int cmd_evolve(const CommonOptions& opt_in, const EvolveOptions& evo) {
    CommonOptions opt = opt_in;
    double t_final = evo.t_final;
    ModelParams p;
    MeanFieldState initial;
    const complexd delta_a(evo.delta_a_re, evo.delta_a_im);

    if (evo.preset == "fig3") {
        opt.lambda = 2.0;
        opt.n2 = -1.0;
        opt.n2_ratio = 0.3;
        p = opt.params();
        const double r = std::numbers::sqrt2 / 2.0;
        initial.a = delta_a;
        initial.s1 = {r * 0.5 * p.n1, r * 0.5 * p.n1, 0.0};
        initial.s2 = {r * 0.5 * p.n2, 0.0, -r * 0.5 * p.n2};
        if (t_final <= 0.0) t_final = 1200.0;
    } else if (evo.preset == "figS3a" || evo.preset == "figS3c") {
        opt.lambda = 2.0;
        opt.n2 = -1.0;
        opt.n2_ratio = 0.3;
        p = opt.params();
        const auto fps = all_fixed_points(p);
        const PhaseLabel label = evo.preset == "figS3a" ? PhaseLabel::zfo_n_minus
                                                        : PhaseLabel::zfi_n_plus;
        initial = perturbed_fixed_point(find_fixed_point(fps, label), delta_a);
        if (t_final <= 0.0) t_final = 500.0;
    } else if (!evo.preset.empty()) {
        throw DomainError("unknown preset: " + evo.preset +
                          " (expected fig3, figS3a, or figS3c)");
    } else {
        p = opt.params();
        if (evo.init_label.empty())
            throw DomainError("evolve: give --preset or --init <phase label>");
        const auto label = parse_phase_label(evo.init_label);
        if (!label) throw DomainError("evolve: unknown phase label " + evo.init_label);
        const auto fps = all_fixed_points(p);
        initial = perturbed_fixed_point(find_fixed_point(fps, *label), delta_a);
        if (t_final <= 0.0) t_final = 500.0;
    }
    if (evo.parity_flip) initial = parity_transform(initial);

    IntegrationControls controls;
    controls.rel_tol = evo.rel_tol;
    controls.abs_tol = evo.abs_tol;
    const Trajectory traj =
        integrate(initial, p, t_final, static_cast<std::size_t>(evo.samples), controls);
    const auto fps = all_fixed_points(p);
    const AttractorVerdict verdict = classify_attractor(traj, fps, p);

    const fs::path dir = prepare_out_dir(opt);
    const std::string cmd_text = "evolve" + (evo.preset.empty() ? "" : " --preset " + evo.preset);
    write_text_file((dir / "trajectory.csv").string(),
                    trajectory_csv(traj, meta_for(opt, p, cmd_text)));
    json vj = to_json(verdict, p);
    vj["meta"] = meta_json(opt, p);
    vj["max_norm_drift"] = traj.max_norm_drift;
    write_text_file((dir / "verdict.json").string(), vj.dump(2) + "\n");

    if (!evo.preset.empty()) {
        write_text_file((dir / (evo.preset + ".gp")).string(),
                        "set datafile separator ','\n"
                        "set terminal pngcairo size 1200,500\n"
                        "set output '" + evo.preset + ".png'\n"
                        "set multiplot layout 1,2\n"
                        "set xlabel 're a'; set ylabel 'im a'\n"
                        "plot 'trajectory.csv' using 2:3 with lines title 'field'\n"
                        "set xlabel 't'; set ylabel 'S1x'\n"
                        "plot 'trajectory.csv' using 1:4 with lines title 'S1x'\n"
                        "unset multiplot\n");
    }
    std::cout << vj.dump(2) << "\n";
    return 0;
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const CommonOptions& opt, const std::string& mode, double a1_min, double a1_max,
              int a1_count, double l_min, double l_max, int l_count) {
    const ModelParams base = opt.params();
    const fs::path dir = prepare_out_dir(opt);

    if (mode == "line") {
        std::vector<double> grid(static_cast<std::size_t>(l_count));
        for (int i = 0; i < l_count; ++i)
            grid[static_cast<std::size_t>(i)] = l_min + (l_max - l_min) * i / (l_count - 1.0);
        const auto cells = line_cut(base, grid, opt.jobs);
        write_text_file((dir / "line_cut.csv").string(),
                        line_cut_csv(cells, base, meta_for(opt, base, "sweep --mode line")));
        std::cout << "wrote " << (dir / "line_cut.csv").string() << "\n";
        return 0;
    }

    GridSpec grid;
    grid.axis1 = {"n2_over_n1", a1_min, a1_max, a1_count};
    grid.axis2 = {"lambda", l_min, l_max, l_count};
    grid.base = base;
    grid.validate();
    const auto cells = phase_diagram(grid, opt.jobs);

    write_text_file((dir / "phase_diagram.csv").string(),
                    phase_diagram_csv(cells, grid, meta_for(opt, base, "sweep")));

    for (SurfaceQuantity q : {SurfaceQuantity::sx, SurfaceQuantity::sz, SurfaceQuantity::dsx,
                              SurfaceQuantity::e0, SurfaceQuantity::nphot}) {
        for (PhaseLabel label : all_phase_labels) {
            const Eigen::MatrixXd m = surface(cells, grid, q, label);
            std::string name = "surface_" + to_string(q) + "_" + to_string(label) + ".dat";
            for (char& ch : name) {
                if (ch == '+') ch = 'p';
                if (ch == '-') ch = 'm';
            }
            write_text_file((dir / name).string(),
                            gnuplot_matrix(m, grid.axis1.values(), grid.axis2.values()));
        }
    }

    json summary = meta_json(opt, base);
    summary["grid"] = {{"axis1", grid.axis1.name}, {"axis1_count", grid.axis1.count},
                       {"axis2", grid.axis2.name}, {"axis2_count", grid.axis2.count}};
    json boundaries = json::array();
    for (const auto& b : extract_boundaries(cells, grid)) {
        const ModelParams pb = apply_axis(base, grid.axis1.name, b.x1);
        const CriticalCouplings c = critical_couplings(pb);
        boundaries.push_back(
            {{"x1", b.x1},
             {"lambda_4_to_6", std::isnan(b.lambda_4_to_6) ? json(nullptr) : json(b.lambda_4_to_6)},
             {"lambda_6_to_8", std::isnan(b.lambda_6_to_8) ? json(nullptr) : json(b.lambda_6_to_8)},
             {"lambda_c_xfi", c.xfi},
             {"lambda_c_xfo", std::isfinite(c.xfo) ? json(c.xfo) : json(nullptr)}});
    }
    summary["boundaries"] = std::move(boundaries);
    write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");

    write_text_file((dir / "phase_diagram.gp").string(),
                    "set terminal pngcairo size 900,700\n"
                    "set output 'phase_diagram.png'\n"
                    "set xlabel 'N2/N1'; set ylabel 'lambda/kappa'\n"
                    "plot 'surface_dsx_pxFimSR.dat' matrix nonuniform with image "
                    "title 'dSx +xFi'\n");
    std::cout << "wrote " << (dir / "phase_diagram.csv").string() << " and surfaces\n";
    return 0;
}

// ------------------------------------------------------------------ quantum

struct QuantumOptions {
    std::string preset;  // fig4 or empty
    int n1 = 4;
    int n2 = 3;
    int n_max = -1;      // -1: automatic from the mean-field amplitude
    double t_final = 0.0;  // 0: preset/default decides
    double dt = 0.0;       // 0: preset/default decides
    std::string init = "down";  // down | updown | fig3 | xfo | xfi | fock1
    int q_points = 101;
    double lobe_threshold = 0.5;
    int samples = 200;
};

VectorC spin_pair_state(const std::string& init, double j, bool first) {
    const double pi = std::numbers::pi;
    if (init == "down" || init == "fock1") return coherent_spin_state(j, pi, 0.0);
    if (init == "updown") return coherent_spin_state(j, first ? 1e-9 : pi, 0.0);
    if (init == "fig3")
        return first ? coherent_spin_state(j, pi / 2.0, pi / 4.0)
                     : coherent_spin_state(j, 3.0 * pi / 4.0, 0.0);
    if (init == "xfo") return coherent_spin_state(j, pi / 2.0, 0.0);
    if (init == "xfi") return coherent_spin_state(j, pi / 2.0, first ? 0.0 : pi);
    throw DomainError("quantum: unknown --init " + init);
}

int default_cutoff(const ModelParams& p) {
    // ceil(4 max(1, |a_ss|^2)) + 6 with a_ss from the brightest mean-field
    // branch.
    double nbar = 1.0;
    if (p.omega_a > 0.0) {
        for (const auto& fp : all_fixed_points(p))
            if (fp.exists) nbar = std::max(nbar, std::norm(fp.state.a));
    }
    return static_cast<int>(std::ceil(4.0 * nbar)) + 6;
}

int cmd_quantum(const CommonOptions& opt_in, const QuantumOptions& q) {
    CommonOptions opt = opt_in;
    QuantumOptions cfg = q;
    if (cfg.preset == "fig4") {
        cfg.n1 = 4;
        cfg.n2 = 3;
        opt.lambda = 1.01;
        opt.omega_c = opt.omega_a = opt.kappa = 1.0;
        if (cfg.init == "down") cfg.init = "mix4";
        if (cfg.n_max < 0) cfg.n_max = 16;
        if (cfg.t_final <= 0.0) cfg.t_final = 40.0;
        if (cfg.dt <= 0.0) cfg.dt = 0.005;
    } else if (!cfg.preset.empty()) {
        throw DomainError("unknown preset: " + cfg.preset + " (expected fig4)");
    }
    if (cfg.t_final <= 0.0) cfg.t_final = 20.0;
    if (cfg.dt <= 0.0) cfg.dt = 0.0025;
    opt.n1 = cfg.n1;
    opt.n2 = cfg.n2;
    const ModelParams p = opt.params();

    const int n_max = cfg.n_max >= 0 ? cfg.n_max : default_cutoff(p);
    const HilbertSpec spec{n_max, cfg.n1, cfg.n2};
    spec.validate();

    VectorC field;
    if (cfg.init == "fock1") {
        field = VectorC::Zero(n_max + 1);
        field(std::min(1, n_max)) = 1.0;
    } else {
        field = coherent_field_state(n_max, 0.0);
    }
    DenseC rho0;
    if (cfg.init == "mix4") {
        // Equal mixture of the four x-ordered spin configurations.
        rho0 = DenseC::Zero(static_cast<Eigen::Index>(spec.dim()),
                            static_cast<Eigen::Index>(spec.dim()));
        const double pi = std::numbers::pi;
        for (double phi1 : {0.0, pi})
            for (double phi2 : {0.0, pi}) {
                const VectorC psi =
                    product_state(spec, field, coherent_spin_state(0.5 * cfg.n1, pi / 2.0, phi1),
                                  coherent_spin_state(0.5 * cfg.n2, pi / 2.0, phi2));
                rho0 += 0.25 * (psi * psi.adjoint());
            }
    } else {
        const VectorC psi =
            product_state(spec, field, spin_pair_state(cfg.init, 0.5 * cfg.n1, true),
                          spin_pair_state(cfg.init, 0.5 * cfg.n2, false));
        rho0 = psi * psi.adjoint();
    }

    EvolveControls controls;
    controls.n_samples = static_cast<std::size_t>(cfg.samples);
    const EvolveResult res = evolve_master(rho0, p, spec, cfg.t_final, cfg.dt, controls);

    const fs::path dir = prepare_out_dir(opt);
    write_text_file((dir / "observables.csv").string(),
                    observables_csv(res.samples, meta_for(opt, p, "quantum")));

    const DenseC rho_field = partial_trace_field(res.rho_final, spec);
    const QFunctionGrid grid = husimi_q_auto(rho_field, cfg.q_points);
    write_text_file((dir / "q_function.csv").string(),
                    q_function_csv(grid, meta_for(opt, p, "quantum")));
    write_text_file((dir / "q_matrix.dat").string(), gnuplot_matrix(grid));

    const LobeReport lobes = count_q_lobes(grid, cfg.lobe_threshold);
    json lj = meta_json(opt, p);
    lj["hilbert"] = {{"n_max", spec.n_max}, {"N1", spec.N1}, {"N2", spec.N2},
                     {"dimension", spec.dim()}};
    lj["init"] = cfg.init;
    lj["t_final"] = cfg.t_final;
    lj["dt"] = cfg.dt;
    lj["q_integral"] = q_grid_integral(grid);
    lj["q_threshold_fraction"] = cfg.lobe_threshold;
    lj["max_trace_drift"] = res.max_trace_drift;
    lj["max_hermiticity_deviation"] = res.max_herm_dev;
    lj["max_top_level_population"] = res.max_top_population;
    lj["truncation_warning"] = res.truncation_warning;
    lj["lobe_count"] = lobes.count;
    json centroids = json::array();
    for (const auto& lobe : lobes.lobes)
        centroids.push_back({{"re", lobe.centroid.real()},
                             {"im", lobe.centroid.imag()},
                             {"weight", lobe.weight},
                             {"cells", lobe.cells}});
    lj["lobes"] = std::move(centroids);
    write_text_file((dir / "lobes.json").string(), lj.dump(2) + "\n");

    if (!cfg.preset.empty()) {
        write_text_file((dir / (cfg.preset + ".gp")).string(),
                        "set terminal pngcairo size 700,600\n"
                        "set output '" + cfg.preset + ".png'\n"
                        "set xlabel 're alpha'; set ylabel 'im alpha'\n"
                        "plot 'q_matrix.dat' matrix nonuniform with image title 'Husimi Q'\n");
    }
    std::cout << lj.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-ensemble Dicke model toolkit: steady states, stability, semiclassical\n"
                 "dynamics, phase-diagram sweeps, and a small-scale Lindblad solver."};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    // Given before the subcommand: dicke2 --config run.cfg <subcommand> ...
    // Keys are flat "<subcommand>.<flag>=value" lines or [subcommand] sections.
    app.set_config("--config", "", "Flat key=value config file (flags take precedence)");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);

    CommonOptions thresholds_opt;
    auto* thresholds_cmd = app.add_subcommand("thresholds", "Critical couplings for both "
                                                            "superradiant transitions");
    add_common(thresholds_cmd, thresholds_opt);

    CommonOptions fixed_opt;
    auto* fixed_cmd = app.add_subcommand("fixed-points",
                                         "All eight fixed points with stability verdicts");
    add_common(fixed_cmd, fixed_opt);

    CommonOptions scan_opt;
    double scan_min = 0.5, scan_max = 3.0;
    int scan_count = 200;
    auto* scan_cmd = app.add_subcommand("stability-scan",
                                        "Per-lambda classification of all branches");
    add_common(scan_cmd, scan_opt);
    scan_cmd->add_option("--lambda-min", scan_min, "Scan start");
    scan_cmd->add_option("--lambda-max", scan_max, "Scan end");
    scan_cmd->add_option("--count", scan_count, "Grid points");

    CommonOptions evolve_opt;
    EvolveOptions evo;
    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the mean-field dynamics");
    add_common(evolve_cmd, evolve_opt);
    evolve_cmd->add_option("--preset", evo.preset, "fig3 | figS3a | figS3c");
    evolve_cmd->add_option("--init", evo.init_label,
                           "Start from this fixed point (e.g. '-zFo-N') plus --delta-a");
    evolve_cmd->add_option("--delta-a", evo.delta_a_re, "Field seed, real part");
    evolve_cmd->add_option("--delta-a-im", evo.delta_a_im, "Field seed, imaginary part");
    evolve_cmd->add_option("--t-final", evo.t_final, "Integration horizon [1/kappa]");
    evolve_cmd->add_option("--samples", evo.samples, "Trajectory sample count");
    evolve_cmd->add_flag("--parity-flip", evo.parity_flip,
                         "Apply the parity transform to the initial state");
    evolve_cmd->add_option("--rel-tol", evo.rel_tol, "Integrator relative tolerance");
    evolve_cmd->add_option("--abs-tol", evo.abs_tol, "Integrator absolute tolerance");

    CommonOptions sweep_opt;
    std::string sweep_mode = "grid";
    double a1_min = 0.0, a1_max = 1.0;
    int a1_count = 50;
    double sl_min = 0.5, sl_max = 3.0;
    int sl_count = 50;
    auto* sweep_cmd = app.add_subcommand("sweep", "Phase-diagram grid or line cut");
    add_common(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--mode", sweep_mode, "grid | line")
        ->check(CLI::IsMember({"grid", "line"}));
    sweep_cmd->add_option("--ratio-min", a1_min, "N2/N1 axis start");
    sweep_cmd->add_option("--ratio-max", a1_max, "N2/N1 axis end");
    sweep_cmd->add_option("--ratio-count", a1_count, "N2/N1 axis points");
    sweep_cmd->add_option("--lambda-min", sl_min, "Coupling axis start");
    sweep_cmd->add_option("--lambda-max", sl_max, "Coupling axis end");
    sweep_cmd->add_option("--lambda-count", sl_count, "Coupling axis points");

    CommonOptions quantum_opt;
    QuantumOptions qopt;
    auto* quantum_cmd = app.add_subcommand("quantum",
                                           "Lindblad evolution with Husimi-Q readout");
    add_common(quantum_cmd, quantum_opt);
    quantum_cmd->add_option("--preset", qopt.preset, "fig4");
    quantum_cmd->add_option("--qn1", qopt.n1, "Integer ensemble size N1");
    quantum_cmd->add_option("--qn2", qopt.n2, "Integer ensemble size N2");
    quantum_cmd->add_option("--n-max", qopt.n_max, "Photon cutoff (default: automatic)");
    quantum_cmd->add_option("--t-final", qopt.t_final, "Evolution time [1/kappa]");
    quantum_cmd->add_option("--dt", qopt.dt, "RK4 step");
    quantum_cmd->add_option("--init", qopt.init,
                            "down | updown | fig3 | xfo | xfi | mix4 | fock1");
    quantum_cmd->add_option("--q-points", qopt.q_points, "Husimi grid points per axis");
    quantum_cmd->add_option("--lobe-threshold", qopt.lobe_threshold,
                            "Lobe threshold as a fraction of max Q");
    quantum_cmd->add_option("--samples", qopt.samples, "Observable sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (thresholds_cmd->parsed()) return cmd_thresholds(thresholds_opt);
        if (fixed_cmd->parsed()) return cmd_fixed_points(fixed_opt);
        if (scan_cmd->parsed())
            return cmd_stability_scan(scan_opt, scan_min, scan_max, scan_count);
        if (evolve_cmd->parsed()) return cmd_evolve(evolve_opt, evo);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_opt, sweep_mode, a1_min, a1_max, a1_count, sl_min, sl_max,
                             sl_count);
        if (quantum_cmd->parsed()) return cmd_quantum(quantum_opt, qopt);
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
