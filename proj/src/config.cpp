#include "majda/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace majda {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string join(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::optional<double> to_double(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

template <class Int>
std::optional<Int> to_integer(const std::string& s)
{
    Int v = 0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) {
        return std::nullopt;
    }
    return v;
}

std::optional<bool> to_bool(const std::string& s)
{
    if (s == "true" || s == "yes" || s == "on" || s == "1") {
        return true;
    }
    if (s == "false" || s == "no" || s == "off" || s == "0") {
        return false;
    }
    return std::nullopt;
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

using Setter = std::function<std::string(const std::string&, RunConfig&)>;

template <class Get>
Setter real_key(Get get)
{
    return [get](const std::string& v, RunConfig& c) -> std::string {
        const auto d = to_double(v);
        if (!d) {
            return "expected a number, got '" + v + "'";
        }
        get(c) = *d;
        return {};
    };
}

template <class Int, class Get>
Setter int_key(Get get)
{
    return [get](const std::string& v, RunConfig& c) -> std::string {
        const auto i = to_integer<Int>(v);
        if (!i) {
            return "expected an integer, got '" + v + "'";
        }
        get(c) = *i;
        return {};
    };
}

template <class Get>
Setter string_key(Get get)
{
    return [get](const std::string& v, RunConfig& c) -> std::string {
        get(c) = unquote(v);
        return {};
    };
}

template <class Get>
Setter bool_key(Get get)
{
    return [get](const std::string& v, RunConfig& c) -> std::string {
        const auto b = to_bool(v);
        if (!b) {
            return "expected true or false, got '" + v + "'";
        }
        get(c) = *b;
        return {};
    };
}

template <class Fn>
Setter enum_key(Fn fn)
{
    return [fn](const std::string& v, RunConfig& c) -> std::string {
        try {
            fn(unquote(v), c);
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        return {};
    };
}

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"eos",
         {
             {"preset", enum_key([](const std::string& v, RunConfig& c) { c.eos.preset = thermo::parse_preset(v); })},
             {"p_inf", real_key([](RunConfig& c) -> double& { return c.eos.p_inf; })},
             {"a", real_key([](RunConfig& c) -> double& { return c.eos.a; })},
             {"beta", real_key([](RunConfig& c) -> double& { return c.eos.beta; })},
             {"table", string_key([](RunConfig& c) -> std::string& { return c.eos.table; })},
             {"mu0", real_key([](RunConfig& c) -> double& { return c.eos.mu0; })},
             {"lambda0", real_key([](RunConfig& c) -> double& { return c.eos.lambda0; })},
             {"kappa0", real_key([](RunConfig& c) -> double& { return c.eos.kappa0; })},
         }},
        {"profile",
         {
             {"g", real_key([](RunConfig& c) -> double& { return c.profile.g; })},
             {"theta", real_key([](RunConfig& c) -> double& { return c.profile.theta; })},
             {"r_bott", real_key([](RunConfig& c) -> double& { return c.profile.r_bott; })},
             {"n_nodes", [](const std::string& v, RunConfig& c) -> std::string {
                  const auto i = to_integer<int>(v);
                  if (!i) {
                      return "expected an integer, got '" + v + "'";
                  }
                  c.profile.n_nodes = *i;
                  return {};
              }},
             {"nu_table", string_key([](RunConfig& c) -> std::string& { return c.profile.nu_table; })},
         }},
        {"grid",
         {
             {"n1", int_key<int>([](RunConfig& c) -> int& { return c.grid.n1; })},
             {"n2", int_key<int>([](RunConfig& c) -> int& { return c.grid.n2; })},
             {"n3", int_key<int>([](RunConfig& c) -> int& { return c.grid.n3; })},
         }},
        {"solver",
         {
             {"mode", enum_key([](const std::string& v, RunConfig& c) { c.solver.mode = parse_solver_mode(v); })},
             {"cfl", real_key([](RunConfig& c) -> double& { return c.solver.cfl; })},
             {"dt_max", real_key([](RunConfig& c) -> double& { return c.solver.dt_max; })},
             {"t_final", real_key([](RunConfig& c) -> double& { return c.solver.t_final; })},
             {"dealias", bool_key([](RunConfig& c) -> bool& { return c.solver.dealias; })},
             {"cutoff", string_key([](RunConfig& c) -> std::string& { return c.solver.cutoff; })},
             {"picard_tol", real_key([](RunConfig& c) -> double& { return c.solver.picard_tol; })},
             {"picard_max_iter", int_key<int>([](RunConfig& c) -> int& { return c.solver.picard_max_iter; })},
         }},
        {"ic",
         {
             {"preset", enum_key([](const std::string& v, RunConfig& c) { c.ic.preset = parse_initial_preset(v); })},
             {"seed", int_key<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.ic.seed; })},
             {"kmax", int_key<int>([](RunConfig& c) -> int& { return c.ic.kmax; })},
             {"amplitude", real_key([](RunConfig& c) -> double& { return c.ic.amplitude; })},
         }},
        {"output",
         {
             {"directory", string_key([](RunConfig& c) -> std::string& { return c.output.directory; })},
             {"snapshot_every", int_key<long>([](RunConfig& c) -> long& { return c.output.snapshot_every; })},
             {"diagnostics_every", int_key<long>([](RunConfig& c) -> long& { return c.output.diagnostics_every; })},
         }},
        {"experiment",
         {
             {"epsilon", [](const std::string& v, RunConfig& c) -> std::string {
                  std::vector<double> list;
                  std::stringstream ss(v);
                  std::string item;
                  while (std::getline(ss, item, ',')) {
                      const auto d = to_double(trim(item));
                      if (!d) {
                          return "expected a comma-separated list of numbers, got '" + v + "'";
                      }
                      list.push_back(*d);
                  }
                  c.experiment.epsilon = std::move(list);
                  return {};
              }},
             {"gap_perturbation", real_key([](RunConfig& c) -> double& { return c.experiment.gap_perturbation; })},
             {"gap_kind", string_key([](RunConfig& c) -> std::string& { return c.experiment.gap_kind; })},
             {"gap_t_final", [](const std::string& v, RunConfig& c) -> std::string {
                  const auto d = to_double(v);
                  if (!d) {
                      return "expected a number, got '" + v + "'";
                  }
                  c.experiment.gap_t_final = *d;
                  return {};
              }},
             {"coercivity_samples",
              int_key<long>([](RunConfig& c) -> long& { return c.experiment.coercivity_samples; })},
             {"k_factor", real_key([](RunConfig& c) -> double& { return c.experiment.k_factor; })},
         }},
    };
    return s;
}

struct Location {
    int line = 0;
    int column = 0;
};

std::optional<double> cutoff_level(const std::string& spec)
{
    if (spec == "none" || spec == "auto") {
        return std::nullopt;
    }
    return to_double(spec);
}

void resolve_relative(std::string& p, const fs::path& base)
{
    if (!p.empty() && fs::path(p).is_relative()) {
        p = (base / p).lexically_normal().string();
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid configuration:\n" + join(errors)), errors_(std::move(errors))
{
}

std::vector<std::string> validate_config(const RunConfig& c)
{
    std::vector<std::string> errs;
    auto require = [&](bool ok, const std::string& key, const std::string& what) {
        if (!ok) {
            errs.push_back(key + ": " + what);
        }
    };
    require(c.eos.p_inf > 0.0, "eos.p_inf", "must be positive");
    require(c.eos.a >= 0.0, "eos.a", "must be non-negative");
    require(c.eos.beta > 0.0, "eos.beta", "must be positive");
    require(c.eos.mu0 > 0.0, "eos.mu0", "must be positive");
    require(c.eos.lambda0 >= 0.0, "eos.lambda0", "must be non-negative");
    require(c.eos.kappa0 > 0.0, "eos.kappa0", "must be positive");
    require(c.eos.preset != thermo::Preset::tabulated || !c.eos.table.empty(), "eos.table",
            "required for the tabulated preset");

    require(c.profile.theta > 0.0, "profile.theta", "must be positive");
    require(c.profile.r_bott > 0.0, "profile.r_bott", "must be positive");
    require(std::isfinite(c.profile.g), "profile.g", "must be finite");
    require(!c.profile.n_nodes || *c.profile.n_nodes >= 2, "profile.n_nodes", "must be at least 2");

    auto power_of_two = [](int n) { return n >= 8 && (n & (n - 1)) == 0; };
    require(power_of_two(c.grid.n1), "grid.n1", "must be a power of two, at least 8");
    require(power_of_two(c.grid.n2), "grid.n2", "must be a power of two, at least 8");
    require(c.grid.n3 >= 2, "grid.n3", "must be at least 2 (two walls and an interior layer)");

    require(c.solver.cfl > 0.0 && c.solver.cfl <= 1.0, "solver.cfl", "must lie in (0, 1]");
    require(c.solver.dt_max > 0.0, "solver.dt_max", "must be positive");
    require(c.solver.t_final >= 0.0, "solver.t_final", "must be non-negative");
    if (c.solver.cutoff != "none" && c.solver.cutoff != "auto") {
        const auto L = cutoff_level(c.solver.cutoff);
        require(L && *L > 0.0, "solver.cutoff", "must be none, auto or a positive number, got '" + c.solver.cutoff + "'");
    }
    require(c.solver.picard_tol > 0.0, "solver.picard_tol", "must be positive");
    require(c.solver.picard_max_iter >= 1, "solver.picard_max_iter", "must be at least 1");

    require(c.ic.amplitude >= 0.0, "ic.amplitude", "must be non-negative");
    if (c.ic.preset == InitialPreset::random_bandlimited) {
        require(c.ic.kmax >= 1 && 2 * c.ic.kmax < std::min(c.grid.n1, c.grid.n2), "ic.kmax",
                "must satisfy 1 <= kmax < min(n1, n2) / 2");
    }

    require(c.output.snapshot_every >= 0, "output.snapshot_every", "must be non-negative");
    require(c.output.diagnostics_every >= 1, "output.diagnostics_every", "must be at least 1");

    require(!c.experiment.epsilon.empty() &&
                std::all_of(c.experiment.epsilon.begin(), c.experiment.epsilon.end(), [](double e) { return e > 0.0; }),
            "experiment.epsilon", "must be a non-empty list of positive numbers");
    require(c.experiment.gap_perturbation > 0.0, "experiment.gap_perturbation", "must be positive");
    require(c.experiment.gap_kind == "vorticity" || c.experiment.gap_kind == "mean", "experiment.gap_kind",
            "must be vorticity or mean");
    require(!c.experiment.gap_t_final || *c.experiment.gap_t_final >= 0.0, "experiment.gap_t_final",
            "must be non-negative");
    require(c.experiment.coercivity_samples >= 1, "experiment.coercivity_samples", "must be at least 1");
    require(c.experiment.k_factor > 1.0, "experiment.k_factor", "must exceed 1");
    return errs;
}

RunConfig parse_config(std::istream& in, const std::string& origin)
{
    RunConfig config;
    std::vector<std::string> errs;
    std::map<std::string, Location> seen;
    auto at = [&](int line, int col) { return origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": "; };

    const auto& sch = schema();
    std::string section;
    bool section_known = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) {
            line.erase(comment);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const int col = static_cast<int>(first) + 1;
        const std::string body = trim(line);
        if (body.front() == '[') {
            if (body.back() != ']') {
                errs.push_back(at(line_no, col) + "unterminated section header");
                section_known = false;
                continue;
            }
            section = trim(body.substr(1, body.size() - 2));
            section_known = sch.count(section) > 0;
            if (!section_known) {
                errs.push_back(at(line_no, col) + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errs.push_back(at(line_no, col) + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const auto value_start = line.find_first_not_of(" \t", eq + 1);
        const int value_col = static_cast<int>(value_start == std::string::npos ? eq + 1 : value_start) + 1;
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            errs.push_back(at(line_no, col) + "key '" + key + "' outside of any section");
            continue;
        }
        if (!section_known) {
            continue;  // already reported at the header
        }
        const auto& keys = sch.at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            errs.push_back(at(line_no, col) + "unknown key '" + key + "' in [" + section + "]");
            continue;
        }
        const std::string path = section + "." + key;
        if (const auto prev = seen.find(path); prev != seen.end()) {
            errs.push_back(at(line_no, col) + path + ": duplicate key (first set on line " +
                           std::to_string(prev->second.line) + ")");
            continue;
        }
        seen[path] = {line_no, value_col};
        if (value.empty()) {
            errs.push_back(at(line_no, value_col) + path + ": missing value");
            continue;
        }
        if (const auto msg = it->second(value, config); !msg.empty()) {
            errs.push_back(at(line_no, value_col) + path + ": " + msg);
        }
    }
    if (errs.empty()) {
        for (const auto& msg : validate_config(config)) {
            const auto key = msg.substr(0, msg.find(':'));
            const auto loc = seen.find(key);
            errs.push_back(loc != seen.end() ? at(loc->second.line, loc->second.column) + msg : origin + ": " + msg);
        }
    }
    if (!errs.empty()) {
        throw ConfigError(std::move(errs));
    }
    return config;
}

RunConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read configuration '" + path.string() + "'");
    }
    auto config = parse_config(in, path.string());
    const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    resolve_relative(config.eos.table, base);
    resolve_relative(config.profile.nu_table, base);
    return config;
}

void write_config(std::ostream& out, const RunConfig& c)
{
    const auto old = out.precision(17);
    out << "# resolved configuration\n\n"
        << "[eos]\n"
        << "preset = " << thermo::to_string(c.eos.preset) << '\n'
        << "p_inf = " << c.eos.p_inf << '\n'
        << "a = " << c.eos.a << '\n'
        << "beta = " << c.eos.beta << '\n';
    if (!c.eos.table.empty()) {
        out << "table = " << c.eos.table << '\n';
    }
    out << "mu0 = " << c.eos.mu0 << '\n'
        << "lambda0 = " << c.eos.lambda0 << '\n'
        << "kappa0 = " << c.eos.kappa0 << "\n\n"
        << "[profile]\n"
        << "g = " << c.profile.g << '\n'
        << "theta = " << c.profile.theta << '\n'
        << "r_bott = " << c.profile.r_bott << '\n';
    if (c.profile.n_nodes) {
        out << "n_nodes = " << *c.profile.n_nodes << '\n';
    }
    if (!c.profile.nu_table.empty()) {
        out << "nu_table = " << c.profile.nu_table << '\n';
    }
    out << "\n[grid]\n"
        << "n1 = " << c.grid.n1 << '\n'
        << "n2 = " << c.grid.n2 << '\n'
        << "n3 = " << c.grid.n3 << "\n\n"
        << "[solver]\n"
        << "mode = " << to_string(c.solver.mode) << '\n'
        << "cfl = " << c.solver.cfl << '\n'
        << "dt_max = " << c.solver.dt_max << '\n'
        << "t_final = " << c.solver.t_final << '\n'
        << "dealias = " << (c.solver.dealias ? "true" : "false") << '\n'
        << "cutoff = " << c.solver.cutoff << '\n'
        << "picard_tol = " << c.solver.picard_tol << '\n'
        << "picard_max_iter = " << c.solver.picard_max_iter << "\n\n"
        << "[ic]\n"
        << "preset = " << to_string(c.ic.preset) << '\n'
        << "seed = " << c.ic.seed << '\n'
        << "kmax = " << c.ic.kmax << '\n'
        << "amplitude = " << c.ic.amplitude << "\n\n"
        << "[output]\n"
        << "directory = " << output_directory(c).string() << '\n'
        << "snapshot_every = " << c.output.snapshot_every << '\n'
        << "diagnostics_every = " << c.output.diagnostics_every << "\n\n"
        << "[experiment]\n"
        << "epsilon = ";
    for (std::size_t i = 0; i < c.experiment.epsilon.size(); ++i) {
        out << (i ? ", " : "") << c.experiment.epsilon[i];
    }
    out << '\n' << "gap_perturbation = " << c.experiment.gap_perturbation << '\n'
        << "gap_kind = " << c.experiment.gap_kind << '\n';
    if (c.experiment.gap_t_final) {
        out << "gap_t_final = " << *c.experiment.gap_t_final << '\n';
    }
    out << "coercivity_samples = " << c.experiment.coercivity_samples << '\n'
        << "k_factor = " << c.experiment.k_factor << '\n';
    out.precision(old);
}

fs::path default_output_directory()
{
    const char* env = std::getenv("MAJDA_OUTPUT_DIR");
    if (env != nullptr && *env != '\0') {
        return env;
    }
    return "majda-output";
}

fs::path output_directory(const RunConfig& config)
{
    return config.output.directory.empty() ? default_output_directory() : fs::path(config.output.directory);
}

namespace {

thermo::EquationOfState make_eos(const EosSection& e)
{
    switch (e.preset) {
    case thermo::Preset::ideal_monoatomic:
        return thermo::EquationOfState::ideal_monoatomic(e.a);
    case thermo::Preset::third_law_compliant:
        return thermo::EquationOfState::third_law_compliant(e.p_inf, e.a);
    case thermo::Preset::tabulated:
        return thermo::EquationOfState::from_table_file(e.table, e.a);
    }
    throw std::invalid_argument("unknown equation-of-state preset");
}

}  // namespace

RunSetup prepare(const RunConfig& config)
{
    if (const auto errs = validate_config(config); !errs.empty()) {
        throw ConfigError(errs);
    }
    auto eos = make_eos(config.eos);
    auto transport =
        thermo::TransportCoefficients::linear(config.eos.mu0, config.eos.lambda0, config.eos.kappa0, config.eos.beta);
    auto profile = solve_static(eos, config.profile.theta, config.profile.g, config.profile.r_bott,
                                config.grid.n_layers());

    SolverConfig sc;
    sc.mode = config.solver.mode;
    sc.cfl = config.solver.cfl;
    sc.dt_max = config.solver.dt_max;
    sc.dealias = config.solver.dealias;
    sc.cutoff = cutoff_level(config.solver.cutoff);
    sc.picard_tol = config.solver.picard_tol;
    sc.picard_max_iter = config.solver.picard_max_iter;
    sc.nu = config.profile.nu_table.empty() ? viscosity_profile(profile, transport)
                                            : load_nu_table(config.profile.nu_table, config.grid.n_layers());
    sc.r = profile.r;
    sc.mu = transport.mu(config.profile.theta);
    sc.validate(config.grid);
    return {std::move(eos), std::move(transport), std::move(profile), std::move(sc)};
}

LayeredState build_initial(const RunConfig& config, RunSetup& setup)
{
    auto state = build_initial(config.grid, config.ic);
    if (config.solver.cutoff == "auto") {
        setup.solver.cutoff = default_cutoff_level(Spectral(config.grid), state);
    }
    return state;
}

}  // namespace majda
