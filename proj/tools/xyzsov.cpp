// Command-line driver: verification campaigns, spectrum solves and parameter sweeps.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "xyz/runner.hpp"

using namespace xyz;

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_sites;
    std::optional<double> tol;
    std::optional<std::string> emit;
    bool fail_fast = false;
    bool timing = false;
    std::string output;
    std::string parameter;
    std::string grid;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--seed", f.seed, "RNG seed (overrides rng_seed)");
    app->add_option("--n-sites", f.n_sites, "chain length N (overrides model.n_sites)")->check(CLI::Range(0, kMaxSites));
    app->add_option("--tol", f.tol, "global tolerance override (>= 1e-14)");
    app->add_option("--emit", f.emit, "output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_flag("--fail-fast", f.fail_fast, "stop after the first task with a failing check");
    app->add_flag("--timing", f.timing, "include wall-clock timings in JSON output");
    app->add_option("-o,--output", f.output, "write output to a file instead of stdout");
}

void emit(const RunConfig& cfg, const std::string& override_path, const std::string& text) {
    const std::string path = override_path.empty() ? cfg.output_path : override_path;
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParameterError("output: cannot write '" + path + "'");
    out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int print_summary(const Report& r) {
    for (const auto& w : r.warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& c : r.records())
        if (!c.pass)
            std::fprintf(stderr, "FAIL %s: %s (residual %s, tolerance %s) %s\n", c.id.c_str(), c.relation.c_str(),
                         format_double(c.residual).c_str(), format_double(c.tolerance).c_str(), c.detail.c_str());
    std::fprintf(stderr, "%zu checks, %d failed\n", r.records().size(), r.failures());
    return exit_code(r);
}

RunConfig configure(const Flags& f, std::optional<std::vector<Task>> forced) {
    Overrides o;
    o.n_sites = f.n_sites;
    o.seed = f.seed;
    o.tol = f.tol;
    o.emit = f.emit;
    o.fail_fast = f.fail_fast;
    RunConfig cfg = load_config(f.config, o);
    if (forced) cfg.tasks = *forced;
    return cfg;
}

int run_tasks(const Flags& f, std::optional<std::vector<Task>> forced, bool solutions_table) {
    RunConfig cfg = configure(f, forced);
    RunResult r = run(cfg);
    std::string text;
    if (cfg.format == "json") text = dump(run_json(cfg, r, f.timing));
    else text = solutions_table ? solutions_csv(r.solutions) : r.report.to_csv();
    emit(cfg, f.output, text);
    return print_summary(r.report);
}

int run_sweep(const Flags& f) {
    RunConfig cfg = configure(f, std::nullopt);
    SweepSpec spec = cfg.sweep.value_or(SweepSpec{});
    if (!f.parameter.empty()) spec.parameter = f.parameter;
    if (!f.grid.empty()) {
        nlohmann::json g;
        try {
            g = nlohmann::json::parse(f.grid);
        } catch (const nlohmann::json::exception& ex) {
            throw ParameterError(std::string("--grid: invalid JSON: ") + ex.what());
        }
        if (!g.is_array()) throw ParameterError("--grid must be a JSON list");
        spec.grid.assign(g.begin(), g.end());
    }
    if (!spec.grid.empty() && spec.parameter.empty()) throw ParameterError("sweep: a parameter name is required");
    if (!spec.grid.empty()) {
        // Catch malformed names before running anything.
        ModelParams probe = cfg.model;
        set_param(probe, spec.parameter, spec.grid.front());
    }
    auto pts = sweep(cfg, spec);
    emit(cfg, f.output, cfg.format == "json" ? dump(sweep_json(cfg, spec, pts)) : sweep_csv(pts));
    int code = kExitPass;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        for (const auto& w : p.warnings) std::fprintf(stderr, "warning [point %zu]: %s\n", i, w.c_str());
        if (!p.error.empty()) std::fprintf(stderr, "point %zu: %s\n", i, p.error.c_str());
        if (p.breakdown) code = std::max(code, int(kExitBreakdown));
        else if (!p.ok) code = std::max(code, int(kExitCheckFailure));
    }
    std::fprintf(stderr, "%zu sweep points\n", pts.size());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separation-of-variables verification for the open XYZ chain"};
    app.require_subcommand(1);
    Flags f;
    auto* verify = app.add_subcommand("verify", "run the configured task list (default: every task)");
    auto* spectrum = app.add_subcommand("spectrum", "solve the quadratic system and compare with the dense oracle");
    auto* scalar = app.add_subcommand("scalar", "separate-state pairings and eigenstate Gram matrix");
    auto* sweep_cmd = app.add_subcommand("sweep", "independent runs over a grid of one model parameter");
    auto* ham = app.add_subcommand("hamiltonian", "homogeneous-limit Hamiltonian checks");
    for (auto* s : {verify, spectrum, scalar, sweep_cmd, ham}) add_common(s, f);
    sweep_cmd->add_option("--parameter", f.parameter, "eta, omega, xi.K, minus.zeta|kappa|tau, plus.zeta|kappa|tau");
    sweep_cmd->add_option("--grid", f.grid, "JSON list of values, numbers or [re, im]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*verify) return run_tasks(f, std::nullopt, false);
        if (*spectrum) return run_tasks(f, std::vector<Task>{Task::spectrum}, true);
        if (*scalar) return run_tasks(f, std::vector<Task>{Task::scalar}, false);
        if (*ham) return run_tasks(f, std::vector<Task>{Task::hamiltonian}, false);
        if (*sweep_cmd) return run_sweep(f);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical breakdown: %s\n", e.what());
        return kExitBreakdown;
    }
    return kExitConfig;
}
