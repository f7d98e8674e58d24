#include "majda/cli.hpp"

#include "majda/coercivity.hpp"
#include "majda/config.hpp"
#include "majda/diagnostics.hpp"
#include "majda/relative_energy.hpp"
#include "majda/snapshot.hpp"
#include "majda/stability_gap.hpp"

#include <CLI11.hpp>
#include <fftw3.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#ifdef MAJDA_HAVE_OPENMP
#include <omp.h>
#endif

namespace majda {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

/// Usage problems detected after argument parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Options shared by the commands that run the solver.
struct CommonOptions {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::optional<long> snapshot_every;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--output", o.output, "output directory (default: $MAJDA_OUTPUT_DIR or ./majda-output)");
    cmd->add_option("--seed", o.seed, "seed of the random initial data");
    cmd->add_option("--threads", o.threads, "worker threads (default: OpenMP default)")->check(CLI::PositiveNumber);
    cmd->add_option("--snapshot-every", o.snapshot_every, "steps between snapshots (0: first and last only)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("--quiet", o.quiet, "only print errors");
}

void apply_threads(int threads)
{
#ifdef MAJDA_HAVE_OPENMP
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#else
    (void)threads;
#endif
}

RunConfig resolve_config(const CommonOptions& o)
{
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.output.empty()) {
        c.output.directory = o.output;
    }
    if (o.seed) {
        c.ic.seed = *o.seed;
    }
    if (o.snapshot_every) {
        c.output.snapshot_every = *o.snapshot_every;
    }
    if (auto errs = validate_config(c); !errs.empty()) {
        throw ConfigError(std::move(errs));
    }
    return c;
}

fs::path prepare_output(const RunConfig& c)
{
    const auto dir = output_directory(c);
    fs::create_directories(dir);
    std::ofstream echo(dir / "config.ini");
    write_config(echo, c);
    if (!echo) {
        throw std::runtime_error("cannot write '" + (dir / "config.ini").string() + "'");
    }
    return dir;
}

long step_of_snapshot(const fs::path& p)
{
    const std::string name = p.filename().string();
    if (name.rfind("snapshot_", 0) == 0 && name.size() > 13 && p.extension() == ".bin") {
        try {
            return std::stol(name.substr(9, name.size() - 13));
        } catch (const std::exception&) {
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_run(const CommonOptions& o, const std::string& restart)
{
    apply_threads(o.threads);
    auto cfg = resolve_config(o);
    std::optional<Snapshot> snap;
    if (!restart.empty()) {
        snap = read_snapshot(restart);
        if (!(snap->grid == cfg.grid)) {
            throw UsageError("restart snapshot grid does not match the configuration grid");
        }
        if (snap->state.t > cfg.solver.t_final) {
            throw UsageError("restart snapshot lies after solver.t_final");
        }
    }
    auto setup = prepare(cfg);
    LayeredState state;
    if (snap) {
        state = snap->state;
        if (cfg.solver.cutoff == "auto") {
            setup.solver.cutoff = default_cutoff_level(Spectral(cfg.grid), state);
        }
    } else {
        state = build_initial(cfg, setup);
    }
    const auto dir = prepare_output(cfg);
    const auto diag_path = dir / "diagnostics.csv";
    DiagnosticsCsv csv(diag_path);

    Solver solver(cfg.grid, setup.solver);
    if (snap) {
        solver.set_history(snap->history);
    }
    const long offset = snap ? step_of_snapshot(restart) : 0;
    RunObserver obs;
    obs.on_diagnostics = [&](const DiagnosticsRecord& r) { csv.append(r); };
    obs.on_snapshot = [&](const LayeredState& st, const Solver& sv, long step) {
        const auto h = sv.history();
        write_snapshot(dir / snapshot_file_name(offset + step), cfg.grid, st, &h);
    };
    const RunOptions opts{cfg.solver.t_final, static_cast<int>(cfg.output.snapshot_every),
                          static_cast<int>(cfg.output.diagnostics_every)};
    RunSummary summary;
    try {
        summary = run(solver, state, opts, obs);
    } catch (const InvariantViolation& e) {
        csv.flush();
        std::cerr << "error: invariant violated: " << e.what() << "\ndiagnostics: " << diag_path.string() << '\n';
        return kExitRuntime;
    }
    csv.flush();
    if (!o.quiet) {
        std::cout << "steps                " << summary.steps << '\n'
                  << "t                    " << summary.t << '\n'
                  << "max|omega| initial   " << summary.omega0_max << '\n'
                  << "max|omega| over run  " << summary.omega_max << '\n'
                  << "worst energy rise    " << summary.worst_energy_increase << '\n';
        if (cfg.solver.mode == SolverMode::picard) {
            std::cout << "max Picard iters     " << summary.max_picard_iterations << '\n';
        }
        if (setup.solver.cutoff) {
            std::cout << "cut-off level        " << *setup.solver.cutoff << " (" << summary.cutoff_activations
                      << " activations)\n";
        }
        std::cout << "output               " << dir.string() << '\n';
    }
    if (!summary.ok()) {
        for (const auto& v : summary.violations) {
            std::cerr << "error: invariant violated: " << v << '\n';
        }
        std::cerr << "diagnostics: " << diag_path.string() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EosOptions {
    std::string config;
    std::string preset;
    std::optional<double> p_inf;
    std::optional<double> a;
    std::string table;
};

void add_eos_options(CLI::App* cmd, EosOptions& o)
{
    cmd->add_option("--config", o.config, "take the [eos] section from this file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "ideal-monoatomic (or ideal), third-law-compliant, tabulated");
    cmd->add_option("--p-inf", o.p_inf, "limit of P(Z)/Z^(5/3) for third-law-compliant");
    cmd->add_option("--a", o.a, "radiation constant");
    cmd->add_option("--table", o.table, "two-column Z P table for the tabulated preset")->check(CLI::ExistingFile);
}

RunConfig eos_config(const EosOptions& o)
{
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.preset.empty()) {
        try {
            c.eos.preset = thermo::parse_preset(o.preset);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (o.p_inf) {
        c.eos.p_inf = *o.p_inf;
    }
    if (o.a) {
        c.eos.a = *o.a;
    }
    if (!o.table.empty()) {
        c.eos.table = o.table;
    }
    if (auto errs = validate_config(c); !errs.empty()) {
        throw ConfigError(std::move(errs));
    }
    return c;
}

int cmd_validate_eos(const EosOptions& o, double z_max, int samples)
{
    const auto c = eos_config(o);
    const auto setup = prepare(c);
    const auto report = thermo::validate_structural(setup.eos, z_max, samples);
    std::cout << "equation of state    " << thermo::to_string(setup.eos.preset()) << '\n' << report.summary();
    const auto tr = thermo::validate_transport(setup.transport, 1e3, 200);
    std::cout << "transport            " << (tr.all() ? "all bounds hold" : "bounds violated") << '\n';
    if (!tr.beta_above_six) {
        std::cout << "  beta = " << c.eos.beta << " is not above 6\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ProfileOptions {
    EosOptions eos;
    std::optional<double> theta;
    std::optional<double> g;
    std::optional<double> r_bott;
    std::optional<int> nodes;
    std::string output;
    bool quiet = false;
};

int cmd_static_profile(const ProfileOptions& o)
{
    auto c = eos_config(o.eos);
    if (o.theta) {
        c.profile.theta = *o.theta;
    }
    if (o.g) {
        c.profile.g = *o.g;
    }
    if (o.r_bott) {
        c.profile.r_bott = *o.r_bott;
    }
    if (o.nodes) {
        c.profile.n_nodes = *o.nodes;
    }
    if (auto errs = validate_config(c); !errs.empty()) {
        throw ConfigError(std::move(errs));
    }
    const auto eos = prepare(c).eos;
    const std::size_t n = static_cast<std::size_t>(c.profile.n_nodes.value_or(c.grid.n3 + 1));
    StaticProfile profile;
    try {
        profile = solve_static(eos, c.profile.theta, c.profile.g, c.profile.r_bott, n);
    } catch (const StratificationCollapse& e) {
        std::cerr << "error: " << e.what() << " (at x3 = " << e.height() << ")\n";
        return kExitRuntime;
    }
    if (o.output.empty() || o.output == "-") {
        write_profile(std::cout, profile);
    } else {
        std::ofstream out(o.output);
        if (!out) {
            throw std::runtime_error("cannot write '" + o.output + "'");
        }
        write_profile(out, profile);
    }
    if (!o.quiet) {
        const auto res = balance_residual(eos, profile);
        std::cerr << "r(1) = " << profile.r.back() << ", balance residual max " << res.max << ", l2 " << res.l2
                  << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

std::vector<fs::path> snapshot_set(const fs::path& p)
{
    if (fs::is_directory(p)) {
        auto list = list_snapshots(p);
        if (list.empty()) {
            throw UsageError("no snapshot files in '" + p.string() + "'");
        }
        return list;
    }
    if (!fs::exists(p)) {
        throw UsageError("no such snapshot '" + p.string() + "'");
    }
    return {p};
}

int cmd_rel_energy(const CommonOptions& o, const std::vector<std::string>& sets, bool coercivity)
{
    apply_threads(o.threads);
    auto cfg = resolve_config(o);
    std::ofstream file;
    const bool to_file = !o.output.empty() && o.output != "-";
    if (to_file) {
        file.open(o.output);
        if (!file) {
            throw std::runtime_error("cannot write '" + o.output + "'");
        }
    }
    std::ostream& out = to_file ? static_cast<std::ostream&>(file) : std::cout;
    std::ostream& info = to_file ? std::cout : std::cerr;

    if (coercivity) {
        if (!sets.empty()) {
            throw UsageError("--coercivity takes no snapshot arguments");
        }
        const auto setup = prepare(cfg);
        const thermo::ThermoState ref{cfg.profile.r_bott, cfg.profile.theta};
        const auto K = EssentialSet::around(ref.rho, ref.theta, cfg.experiment.k_factor);
        const auto report =
            coercivity_check(setup.eos, K, ref, static_cast<std::size_t>(cfg.experiment.coercivity_samples),
                             cfg.ic.seed, cfg.experiment.epsilon.front());
        write_coercivity_csv(out, report);
        if (!o.quiet) {
            info << report.summary();
        }
        return report.passed() ? kExitOk : kExitRuntime;
    }

    if (sets.size() != 2) {
        throw UsageError("rel-energy expects two snapshot files or directories");
    }
    const auto a = snapshot_set(sets[0]);
    const auto b = snapshot_set(sets[1]);
    if (a.size() != b.size()) {
        throw UsageError("snapshot sets differ in length (" + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + ")");
    }
    out.precision(17);
    out << "t,epsilon,E\n";
    std::optional<RunSetup> setup;
    std::optional<Spectral> sp;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto sa = read_snapshot(a[i]);
        const auto sb = read_snapshot(b[i]);
        if (!(sa.grid == sb.grid)) {
            throw UsageError("snapshots '" + a[i].string() + "' and '" + b[i].string() + "' use different grids");
        }
        if (!setup || !(sp->grid() == sa.grid)) {
            cfg.grid = sa.grid;
            setup = prepare(cfg);
            sp.emplace(sa.grid);
        }
        const auto ua = total_velocity(*sp, sa.state);
        const auto ub = total_velocity(*sp, sb.state);
        const auto ref = ReferenceTriple::from_profile(sa.grid, setup->profile, &ub).bind(setup->eos);
        for (double eps : cfg.experiment.epsilon) {
            auto s = CompressibleState::uniform(sa.grid, 1.0, 1.0, eps);
            s.rho = ref.r_tilde;
            s.theta = ref.theta_tilde;
            s.u[0] = ua.u1;
            s.u[1] = ua.u2;
            out << sa.state.t << ',' << eps << ',' << rel_energy_total(setup->eos, s, ref) << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_stability_gap(const CommonOptions& o)
{
    apply_threads(o.threads);
    const auto cfg = resolve_config(o);
    auto setup = prepare(cfg);
    const auto u1 = build_initial(cfg, setup);
    auto u2 = u1;
    const auto& g = cfg.grid;
    const double amp = cfg.experiment.gap_perturbation;
    if (cfg.experiment.gap_kind == "mean") {
        for (int k = 1; k < g.n3; ++k) {
            u2.u_mean[static_cast<std::size_t>(k)][0] += amp * std::sin(std::numbers::pi * g.x3(k));
        }
    } else {
        const int kmax = std::max(1, std::min(cfg.ic.kmax, std::min(g.n1, g.n2) / 2 - 1));
        const auto noise = random_bandlimited(g, cfg.ic.seed + 1, kmax, amp);
        for (std::size_t i = 0; i < u2.omega.size(); ++i) {
            u2.omega[i] += noise.omega[i];
        }
    }
    const double t_final = cfg.experiment.gap_t_final.value_or(cfg.solver.t_final);
    const auto dir = prepare_output(cfg);
    const auto report = stability_gap(g, setup.solver, u1, u2, t_final);
    std::ofstream csv(dir / "gap.csv");
    write_gap_csv(csv, report);
    const bool ok = report.within_bound && (cfg.experiment.gap_kind != "mean" || report.monotone);
    if (!o.quiet) {
        std::cout << "perturbation         " << cfg.experiment.gap_kind << ", size " << amp << '\n'
                  << "D(0)                 " << report.series.front().D << '\n'
                  << "D(t_final)           " << report.series.back().D << '\n'
                  << "C = 2 sup|grad U1|   " << report.C << '\n'
                  << "observed growth rate " << report.observed_rate << '\n'
                  << "bound                " << (report.within_bound ? "holds" : "VIOLATED") << '\n'
                  << "monotone decay       " << (report.monotone ? "yes" : "no") << '\n'
                  << "output               " << (dir / "gap.csv").string() << '\n';
    }
    return ok ? kExitOk : kExitRuntime;
}

// ---------------------------------------------------------------------------

int cmd_info(const std::string& config)
{
    std::cout << "majda " << kVersion << '\n';
#ifdef MAJDA_HAVE_OPENMP
    std::cout << "threads              " << omp_get_max_threads() << " (OpenMP)\n";
#else
    std::cout << "threads              1 (built without OpenMP)\n";
#endif
    std::cout << "fft                  " << fftw_version << '\n'
              << "snapshot format      " << kSnapshotMagic << " version " << kSnapshotVersion << '\n'
              << "eos presets          ideal-monoatomic, third-law-compliant, tabulated\n"
              << "initial conditions   taylor-green, random-bandlimited, shear-layer\n"
              << "solver modes         imex, picard\n"
              << "output directory     " << default_output_directory().string() << '\n';
    if (!config.empty()) {
        std::cout << '\n';
        write_config(std::cout, load_config(config));
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv)
{
    CLI::App app{"Layered stratified flow solver and relative-energy toolkit", "majda"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOptions run_opts;
    std::string restart;
    auto* run_cmd = app.add_subcommand("run", "integrate the layered vorticity equations");
    add_common(run_cmd, run_opts);
    run_cmd->add_option("--restart", restart, "continue from a snapshot written by an earlier run")
        ->check(CLI::ExistingFile);

    EosOptions eos_opts;
    double z_max = 1e6;
    int samples = 400;
    auto* eos_cmd = app.add_subcommand("validate-eos", "check the structural hypotheses of an equation of state");
    add_eos_options(eos_cmd, eos_opts);
    eos_cmd->add_option("--z-max", z_max, "largest Z sampled")->check(CLI::PositiveNumber);
    eos_cmd->add_option("--samples", samples, "log-spaced sample count")->check(CLI::Range(8, 1000000));

    ProfileOptions prof;
    auto* prof_cmd = app.add_subcommand("static-profile", "solve the hydrostatic balance and print x3 r");
    add_eos_options(prof_cmd, prof.eos);
    prof_cmd->add_option("--theta", prof.theta, "background temperature");
    prof_cmd->add_option("--g", prof.g, "gravity");
    prof_cmd->add_option("--r-bott", prof.r_bott, "density at x3 = 0");
    prof_cmd->add_option("--nodes", prof.nodes, "number of nodes (default n3 + 1)");
    prof_cmd->add_option("--output", prof.output, "output file (default stdout)");
    prof_cmd->add_flag("--quiet", prof.quiet, "do not print the balance residual");

    CommonOptions rel_opts;
    std::vector<std::string> sets;
    bool coercivity = false;
    auto* rel_cmd = app.add_subcommand("rel-energy", "relative energy between two snapshot sets, or coercivity");
    add_common(rel_cmd, rel_opts);
    rel_cmd->add_option("sets", sets, "snapshot files or directories: STATE REFERENCE");
    rel_cmd->add_flag("--coercivity", coercivity, "sample the coercivity constants instead (CSV to --output)");

    CommonOptions gap_opts;
    auto* gap_cmd = app.add_subcommand("stability-gap", "run twin trajectories and compare with the exponential bound");
    add_common(gap_cmd, gap_opts);

    std::string info_config;
    auto* info_cmd = app.add_subcommand("info", "build information and defaults");
    info_cmd->add_option("--config", info_config, "also print this configuration fully resolved")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run_opts, restart);
        }
        if (*eos_cmd) {
            return cmd_validate_eos(eos_opts, z_max, samples);
        }
        if (*prof_cmd) {
            return cmd_static_profile(prof);
        }
        if (*rel_cmd) {
            return cmd_rel_energy(rel_opts, sets, coercivity);
        }
        if (*gap_cmd) {
            return cmd_stability_gap(gap_opts);
        }
        return cmd_info(info_config);
    } catch (const ConfigError& e) {
        for (const auto& msg : e.errors()) {
            std::cerr << "error: " << msg << '\n';
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SnapshotFormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace majda
