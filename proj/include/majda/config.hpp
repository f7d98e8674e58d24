/// @file config.hpp
/// @brief Run configuration: INI-style file, validation, echo and the setup
/// derived from it.
///
/// The file is a sequence of `[section]` headers and `key = value` lines.
/// `#` and `;` start comments, both on their own line and after a value.
/// Every problem found is reported (unknown sections and keys, malformed
/// values, range violations), each prefixed with `file:line:column`.
#pragma once

#include "majda/initial.hpp"
#include "majda/solver.hpp"
#include "majda/static_profile.hpp"
#include "majda/thermo.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace majda {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const noexcept { return errors_; }

private:
    std::vector<std::string> errors_;
};

struct EosSection {
    thermo::Preset preset = thermo::Preset::ideal_monoatomic;
    double p_inf = 1.0;
    double a = 0.0;  ///< radiation constant
    double beta = 7.0;
    std::string table;  ///< required for the tabulated preset
    double mu0 = 0.01;  ///< mu(theta) = mu0 (1 + theta)
    double lambda0 = 0.0;
    double kappa0 = 1.0;
};

struct ProfileSection {
    double g = 1.0;
    double theta = 1.0;
    double r_bott = 1.0;
    std::optional<int> n_nodes;  ///< static-profile output; defaults to n3 + 1
    std::string nu_table;        ///< replaces mu(Theta) / r for the vorticity
};

struct SolverSection {
    SolverMode mode = SolverMode::imex;
    double cfl = 0.5;
    double dt_max = 1e-3;
    double t_final = 1.0;
    bool dealias = true;
    /// "none", "auto" (twice the initial velocity bound) or a positive level.
    std::string cutoff = "none";
    double picard_tol = 1e-10;
    int picard_max_iter = 30;
};

struct OutputSection {
    std::string directory;  ///< empty: $MAJDA_OUTPUT_DIR, else ./majda-output
    long snapshot_every = 0;
    long diagnostics_every = 1;
};

struct ExperimentSection {
    std::vector<double> epsilon{1.0};
    double gap_perturbation = 1e-6;
    std::string gap_kind = "vorticity";  ///< or "mean"
    std::optional<double> gap_t_final;   ///< defaults to solver.t_final
    long coercivity_samples = 2000;
    double k_factor = 2.0;  ///< K = [r/f, r f] x [Theta/f, Theta f]
};

struct RunConfig {
    EosSection eos;
    ProfileSection profile;
    LayeredGrid grid;
    SolverSection solver;
    InitialParams ic;
    OutputSection output;
    ExperimentSection experiment;
};

/// Parses and validates; throws ConfigError listing every problem.
RunConfig parse_config(std::istream& in, const std::string& origin);
RunConfig load_config(const std::filesystem::path& path);

/// Range checks that do not depend on the file (used again after command
/// line overrides).  Messages carry the key path, e.g. "grid.n3: ...".
std::vector<std::string> validate_config(const RunConfig& config);

/// Fully resolved configuration with every key written out.
void write_config(std::ostream& out, const RunConfig& config);

/// $MAJDA_OUTPUT_DIR when set and non-empty, otherwise "majda-output".
std::filesystem::path default_output_directory();
std::filesystem::path output_directory(const RunConfig& config);

/// Everything a run needs, derived from a configuration.
struct RunSetup {
    thermo::EquationOfState eos;
    thermo::TransportCoefficients transport;
    StaticProfile profile;  ///< on the n3 + 1 layer nodes
    SolverConfig solver;
};

RunSetup prepare(const RunConfig& config);

/// Initial state from the ic section, with the cut-off level resolved when
/// the solver section asks for "auto".
LayeredState build_initial(const RunConfig& config, RunSetup& setup);

}  // namespace majda
