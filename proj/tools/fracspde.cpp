// fracspde command-line driver.
//
// Exit codes: 0 success, 1 computational or check failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspde/fracspde.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Manifest {
    std::string command;
    ordered_json config;
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;  // relative to the output directory
};

void write_manifest(const fs::path& out_dir, const Manifest& m, double seconds) {
    ordered_json j;
    j["command"] = m.command;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["artifact_paths"] = m.artifacts;
    j["version"] = fracspde::version;
    j["timestamp"] = fracspde::experiments::utc_timestamp();
    j["duration"] = seconds;
    fracspde::experiments::write_text_file(out_dir / (m.command + "_manifest.json"), j.dump(2) + "\n");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Flat "key = value" file; '#' starts a comment. Keys are flag names
/// without the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

/// Config values fill options that were not given on the command line.
void apply_config_file(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    for (const auto& [key, value] : read_config_file(path)) {
        if (key == "config") throw UsageError("config files cannot include other config files");
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw UsageError("unknown config key: " + key);
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

CLI::Validator hurst_range() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            double v = 0.0;
            try {
                std::size_t pos = 0;
                v = std::stod(s, &pos);
                if (pos != s.size()) return "hurst must be a number, got " + s;
            } catch (const std::exception&) {
                return "hurst must be a number, got " + s;
            }
            if (!(v > 0.5 && v < 1.0)) return "hurst must be in (0.5, 1), got " + s;
            return {};
        },
        "in (0.5, 1)");
}

std::string csv_row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) line += ',';
        line += fracspde::experiments::format_double(values[i]);
    }
    return line;
}

// ---- gen-fbm -------------------------------------------------------------

struct GenFbmArgs {
    double hurst = 0.75;
    std::size_t steps = 0;
    double tau = 0.0;
    std::size_t modes = 1;
    std::uint64_t seed = 0;
    std::string method = "circulant";
    std::string output = "fbm_increments.csv";
};

Manifest run_gen_fbm(const GenFbmArgs& a, const fs::path& out_dir) {
    using namespace fracspde;
    const HurstParameter h(a.hurst);
    const IncrementGrid grid(a.steps, a.tau);
    const auto method = parse_fbm_method(a.method);
    const auto w = generate_cylindrical_fbm(a.modes, grid, h, a.seed, method);
    std::string text;
    for (std::size_t k = 0; k < w.modes(); ++k) text += csv_row(w.row(k)) + "\n";
    fs::create_directories(out_dir);
    experiments::write_text_file(out_dir / a.output, text);
    Manifest m{"gen-fbm", {}, a.seed, {a.output}};
    m.config = {{"hurst", a.hurst}, {"steps", a.steps}, {"tau", a.tau},  {"modes", a.modes},
                {"seed", a.seed},   {"method", a.method}, {"output", a.output}};
    return m;
}

// ---- solve ---------------------------------------------------------------

struct SolveArgs {
    std::string preset = "she-trace";
    std::size_t modes = 64;
    std::size_t steps = 1024;
    double horizon = 1.0;
    double hurst = 0.75;
    std::uint64_t seed = 0;
    std::string method = "circulant";
    bool zero_noise = false;
    bool zero_nonlinearity = false;
    bool trajectory = false;
    std::string config;
};

Manifest run_solve(const SolveArgs& a, const fs::path& out_dir) {
    using namespace fracspde;
    if (!experiments::is_preset(a.preset)) throw UsageError("unknown preset: " + a.preset);
    auto cfg = experiments::she_preset(a.preset, a.modes, a.steps, a.horizon, a.seed, parse_fbm_method(a.method));
    cfg.hurst = HurstParameter(a.hurst);
    if (a.zero_noise) cfg.noise = DiagonalNoiseOperator::zero(a.modes);
    if (a.zero_nonlinearity) cfg.nonlinearity = NemytskiiMap::zero();
    cfg.validate();

    const auto w = generate_cylindrical_fbm(cfg.n_modes, cfg.grid(), cfg.hurst, cfg.base_seed, cfg.fbm_method);
    std::vector<std::string> artifacts;
    fs::create_directories(out_dir);
    SpectralState end;
    if (a.trajectory) {
        const auto traj = solve_path(cfg, w);
        std::string text = "t";
        for (std::size_t n = 1; n <= cfg.n_modes; ++n) text += ",c" + std::to_string(n);
        text += "\n";
        for (const auto& s : traj.states) {
            text += experiments::format_double(s.time) + "," + csv_row(s.coeffs) + "\n";
        }
        experiments::write_text_file(out_dir / "trajectory_spectral.csv", text);
        artifacts.push_back("trajectory_spectral.csv");
        end = traj.states.back();
    } else {
        end = solve_endpoint(cfg, w);
    }

    std::string spectral = "mode,coefficient\n";
    for (std::size_t n = 0; n < end.size(); ++n) {
        spectral += std::to_string(n + 1) + "," + experiments::format_double(end.coeffs[n]) + "\n";
    }
    const auto u = sine_transform(end.coeffs);
    const auto x = collocation_grid(end.size());
    std::string physical = "x,u\n";
    for (std::size_t j = 0; j < u.size(); ++j) {
        physical += experiments::format_double(x[j]) + "," + experiments::format_double(u[j]) + "\n";
    }
    experiments::write_text_file(out_dir / "endpoint_spectral.csv", spectral);
    experiments::write_text_file(out_dir / "endpoint_physical.csv", physical);
    artifacts.insert(artifacts.begin(), {"endpoint_spectral.csv", "endpoint_physical.csv"});

    Manifest m{"solve", {}, a.seed, artifacts};
    m.config = {{"preset", a.preset},
                {"modes", cfg.n_modes},
                {"steps", cfg.m_steps},
                {"horizon", cfg.horizon},
                {"tau", cfg.tau()},
                {"hurst", cfg.hurst.value()},
                {"operator", cfg.op.description()},
                {"noise", a.zero_noise ? std::string("zero") : noise_kind_name(cfg.noise.kind())},
                {"beta", cfg.noise.beta()},
                {"nonlinearity", nemytskii_name(cfg.nonlinearity.kind)},
                {"method", a.method},
                {"seed", a.seed},
                {"trajectory", a.trajectory},
                {"config_digest", config_digest(cfg)}};
    return m;
}

// ---- converge ------------------------------------------------------------

struct ConvergeArgs {
    std::string axis;
    std::string preset = "she-trace";
    bool paper_scale = false;
    std::size_t samples = 0;  // 0: protocol default
    std::uint64_t seed = 0;
    std::string method = "circulant";
    std::string timestamp;
    std::string config;
};

Manifest run_converge(const ConvergeArgs& a, const fs::path& out_dir, std::size_t workers) {
    using namespace fracspde;
    if (!experiments::is_preset(a.preset)) throw UsageError("unknown preset: " + a.preset);
    const std::size_t samples = a.samples != 0 ? a.samples : (a.paper_scale ? 100 : 50);
    const auto problem = experiments::she_preset(a.preset, 1, 1, 1.0, a.seed, parse_fbm_method(a.method));
    const auto study = a.axis == "time" ? experiments::temporal_protocol(problem, a.paper_scale, samples, a.seed)
                                        : experiments::spatial_protocol(problem, a.paper_scale, samples, a.seed);
    std::cout << "axis " << a.axis << ", preset " << a.preset << ", " << samples << " samples, "
              << (a.paper_scale ? "paper" : "desk") << " scale\n";
    std::cout << "theoretical slope " << study.theoretical_slope() << "\n" << std::flush;
    const auto report = experiments::run_study(study, workers);
    for (std::size_t i = 0; i < report.resolutions.size(); ++i) {
        std::cout << "  " << (a.axis == "time" ? "M=" : "N=") << report.resolutions[i] << "  rms "
                  << experiments::format_double(report.rms_errors[i]) << "  se "
                  << experiments::format_double(report.std_errors[i]) << "\n";
    }
    std::cout << "fitted slope " << report.fitted_slope << " +- " << report.slope_confidence_halfwidth
              << " (theoretical " << report.theoretical_slope << ")" << (report.monotone ? "" : " [non-monotone]")
              << "\n";
    const std::string ts = a.timestamp.empty() ? experiments::utc_timestamp() : a.timestamp;
    const auto paths = experiments::write_error_report(report, study, out_dir, ts);
    Manifest m{"converge", {}, a.seed, {}};
    for (const auto& p : paths) m.artifacts.push_back(p.filename().string());
    m.config = {{"axis", a.axis},
                {"preset", a.preset},
                {"paper_scale", a.paper_scale},
                {"samples", samples},
                {"seed", a.seed},
                {"method", a.method},
                {"workers", workers},
                {"ladder", study.ladder},
                {"reference_resolution", study.reference_resolution},
                {"fixed_other", study.fixed_other}};
    return m;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    std::size_t samples = 0;  // 0: suite defaults
    std::uint64_t seed = 0;
};

Manifest run_verify(const VerifyArgs& a, const fs::path& out_dir, std::size_t workers, bool& all_passed) {
    using namespace fracspde;
    std::vector<verify::SuiteResult> results;
    const bool all = a.suite == "all";
    if (all || a.suite == "phi") results.push_back(verify::phi_suite());
    if (all || a.suite == "lambda-phi") results.push_back(verify::lambda_phi_suite());
    if (all || a.suite == "isometry") {
        results.push_back(verify::isometry_suite(a.samples != 0 ? a.samples : 10000, a.seed, workers));
    }
    if (all || a.suite == "regularity") {
        results.push_back(verify::regularity_suite(a.samples != 0 ? a.samples : 50, a.seed, workers));
    }
    ordered_json j = ordered_json::array();
    all_passed = true;
    std::vector<std::string> failures;
    for (const auto& r : results) {
        std::cout << "[" << r.suite << "]\n";
        for (const auto& c : r.checks) {
            std::cout << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
            if (!c.passed) failures.push_back(r.suite + ": " + c.name);
        }
        all_passed = all_passed && r.passed();
        j.push_back(verify::to_json(r));
    }
    if (!failures.empty()) {
        std::cout << failures.size() << " check(s) failed:\n";
        for (const auto& f : failures) std::cout << "  " << f << "\n";
    } else {
        std::cout << "all checks passed\n";
    }
    fs::create_directories(out_dir);
    const std::string name = "verify_" + a.suite + ".json";
    experiments::write_text_file(out_dir / name, j.dump(2) + "\n");
    Manifest m{"verify", {}, a.seed, {name}};
    m.config = {{"suite", a.suite}, {"samples", a.samples}, {"seed", a.seed}, {"workers", workers}};
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional-noise stochastic heat equation: fBm generation, spectral Galerkin solver, "
                 "convergence studies and verification suites."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fracspde::version));

    std::string out_dir = ".";
    std::size_t workers = fracspde::experiments::default_workers();
    const std::vector<std::string> methods{"cholesky", "circulant"};
    const std::vector<std::string> presets{"she-identity", "she-trace"};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out-dir", out_dir, "Directory for all output files");
        sub->add_option("--workers", workers, "Monte Carlo worker threads (default: FRACSPDE_WORKERS or all cores)")
            ->check(CLI::PositiveNumber);
    };

    GenFbmArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-fbm", "Generate cylindrical fBm increments");
    gen_cmd->add_option("--hurst", gen.hurst, "Hurst index")->check(hurst_range());
    gen_cmd->add_option("--steps", gen.steps, "Number of increments")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--tau", gen.tau, "Step size")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--modes", gen.modes, "Number of independent modes")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Base seed");
    gen_cmd->add_option("--method", gen.method, "Sampler")->check(CLI::IsMember(methods));
    gen_cmd->add_option("--output", gen.output, "CSV file name inside --out-dir");
    add_common(gen_cmd);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one path of a preset problem");
    solve_cmd->add_option("--preset", solve.preset, "Problem preset")->check(CLI::IsMember(presets));
    solve_cmd->add_option("--modes", solve.modes, "Spectral modes N")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--steps", solve.steps, "Time steps M")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--horizon", solve.horizon, "Final time T")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--hurst", solve.hurst, "Hurst index")->check(hurst_range());
    solve_cmd->add_option("--seed", solve.seed, "Noise seed");
    solve_cmd->add_option("--method", solve.method, "fBm sampler")->check(CLI::IsMember(methods));
    solve_cmd->add_flag("--zero-noise", solve.zero_noise, "Drop the noise term");
    solve_cmd->add_flag("--zero-nonlinearity", solve.zero_nonlinearity, "Drop the sin(u) drift");
    solve_cmd->add_flag("--trajectory", solve.trajectory, "Also write every intermediate state");
    solve_cmd->add_option("--config", solve.config, "key = value file; command-line flags take precedence");
    add_common(solve_cmd);

    ConvergeArgs conv;
    auto* conv_cmd = app.add_subcommand("converge", "Run a coupled-noise convergence study");
    conv_cmd->add_option("--axis", conv.axis, "space or time (required)")->check(CLI::IsMember({"space", "time"}));
    conv_cmd->add_option("--preset", conv.preset, "Problem preset")->check(CLI::IsMember(presets));
    conv_cmd->add_flag("--paper-scale", conv.paper_scale, "Use the large published protocol");
    conv_cmd->add_option("--samples", conv.samples, "Monte Carlo samples")->check(CLI::Range(2, 1 << 30));
    conv_cmd->add_option("--seed", conv.seed, "Base seed");
    conv_cmd->add_option("--method", conv.method, "fBm sampler")->check(CLI::IsMember(methods));
    conv_cmd->add_option("--timestamp", conv.timestamp, "Fixed report timestamp (default: current UTC time)");
    conv_cmd->add_option("--config", conv.config, "key = value file; command-line flags take precedence");
    add_common(conv_cmd);

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Run verification suites");
    ver_cmd->add_option("--suite", ver.suite, "isometry, phi, lambda-phi, regularity or all")
        ->check(CLI::IsMember({"isometry", "phi", "lambda-phi", "regularity", "all"}));
    ver_cmd->add_option("--samples", ver.samples, "Monte Carlo samples for isometry/regularity")
        ->check(CLI::Range(2, 1 << 30));
    ver_cmd->add_option("--seed", ver.seed, "Base seed");
    add_common(ver_cmd);

    try {
        app.parse(argc, argv);
        if (solve_cmd->parsed()) apply_config_file(solve_cmd, solve.config);
        if (conv_cmd->parsed()) {
            apply_config_file(conv_cmd, conv.config);
            if (conv.axis.empty()) throw UsageError("--axis is required");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        Manifest manifest;
        bool passed = true;
        if (gen_cmd->parsed()) {
            manifest = run_gen_fbm(gen, out_dir);
        } else if (solve_cmd->parsed()) {
            manifest = run_solve(solve, out_dir);
        } else if (conv_cmd->parsed()) {
            manifest = run_converge(conv, out_dir, workers);
        } else {
            manifest = run_verify(ver, out_dir, workers, passed);
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        write_manifest(out_dir, manifest, elapsed.count());
        return passed ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        // invalid_argument / domain_error: a parameter the flags let through
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
}
