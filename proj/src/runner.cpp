#include "xyz/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace xyz {

namespace {

bool needs_frame(Task t) { return t == Task::gauge || t == Task::sov || t == Task::spectrum || t == Task::scalar || t == Task::negative; }

void theta_warnings(const ModelParams& p, Report& rep) {
    const double c = theta_cancellation(HalfPeriodRatio(p.omega));
    if (c > 1e3) {
        std::ostringstream os;
        os.precision(3);
        os << "theta series: |q| = " << std::abs(HalfPeriodRatio(p.omega).nome()) << ", about " << std::log10(c)
           << " digits lost to cancellation; tight tolerances may fail";
        rep.warn(os.str());
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    RunResult out;
    Report& rep = out.report;
    rep.fail_fast = cfg.fail_fast;
    theta_warnings(cfg.model, rep);

    BatteryContext ctx;
    ctx.tol = cfg.tol;
    ctx.beta = cfg.beta;
    ctx.frame = cfg.frame;
    ctx.seed = cfg.seed;

    Model m(cfg.model);
    std::optional<GaugeFrame> frame;
    bool need = false;
    for (Task t : cfg.tasks) need = need || needs_frame(t);
    if (need) {
        frame = resolve_frame(m, ctx);
        rep.note("gauge", {{"alpha", complex_json(frame->alpha)}, {"beta", complex_json(frame->beta)},
                           {"fix_residual", frame->fix_residual}, {"explicit", cfg.frame.has_value()}});
    }

    std::optional<SpectrumOutcome> spec;
    for (Task t : cfg.tasks) {
        if (rep.stop) {
            rep.warn("fail-fast: skipped task " + task_name(t));
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        try {
            switch (t) {
                case Task::identities: identity_battery(cfg.model, ctx, rep); break;
                case Task::gauge: gauge_battery(cfg.model, *frame, ctx, rep); break;
                case Task::gauge_fix: gauge_fix_battery(cfg.model, ctx, rep); break;
                case Task::sov:
                    if (cfg.model.n_sites == 0) rep.warn("sov: nothing to check at N = 0");
                    sov_battery(cfg.model, *frame, ctx, rep);
                    break;
                case Task::spectrum: spec = spectrum_battery(cfg.model, *frame, ctx, rep); break;
                case Task::scalar: {
                    if (!spec) {
                        Report scratch;
                        spec = spectrum_battery(cfg.model, *frame, ctx, scratch);
                    }
                    std::vector<Vec> xs;
                    for (const auto& s : spec->solve.solutions) xs.push_back(s.x);
                    scalar_battery(cfg.model, *frame, xs, ctx, rep);
                    break;
                }
                case Task::hamiltonian:
                    if (cfg.model.n_sites < 2) rep.warn("hamiltonian: requires N >= 2, skipped");
                    hamiltonian_battery(cfg.model, ctx, rep);
                    break;
                case Task::negative: negative_controls(cfg.model, *frame, ctx, rep); break;
            }
        } catch (const DegeneracyError& ex) {
            // A violated genericity hypothesis is a finding about the configuration, not a crash.
            rep.expect(task_name(t) + ".hypotheses", "genericity hypotheses of the construction hold", false, ex.what());
        }
        out.timing[task_name(t)] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (t == Task::spectrum && spec) out.solutions = spec->solve.solutions;
    }
    return out;
}

nlohmann::json run_json(const RunConfig& cfg, const RunResult& r, bool with_timing) {
    nlohmann::json j = r.report.to_json();
    nlohmann::json tasks = nlohmann::json::array();
    for (Task t : cfg.tasks) tasks.push_back(task_name(t));
    j["environment"] = {{"model", params_json(cfg.model)}, {"tasks", tasks}, {"rng_seed", cfg.seed},
                        {"beta", complex_json(cfg.beta)}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                                        std::to_string(EIGEN_MINOR_VERSION)}};
    if (cfg.tol.global()) j["environment"]["global_tolerance"] = *cfg.tol.global();
    j["worst_ratio"] = r.report.worst_ratio();
    if (!r.solutions.empty()) j["solutions"] = solutions_json(r.solutions);
    if (with_timing) j["timing"] = r.timing;
    return j;
}

nlohmann::json solutions_json(const std::vector<SpectrumSolution>& sols) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : sols) {
        nlohmann::json x = nlohmann::json::array();
        for (Eigen::Index k = 0; k < s.x.size(); ++k) x.push_back(complex_json(s.x(k)));
        a.push_back({{"x", x}, {"residual", s.residual}, {"oracle_index", s.oracle_index}, {"oracle_distance", s.oracle_distance}});
    }
    return a;
}

std::string solutions_csv(const std::vector<SpectrumSolution>& sols) {
    std::string out = "solution,n,re_x,im_x,residual\n";
    for (std::size_t i = 0; i < sols.size(); ++i)
        for (Eigen::Index k = 0; k < sols[i].x.size(); ++k)
            out += std::to_string(i) + "," + std::to_string(k + 1) + "," + format_double(sols[i].x(k).real()) + "," +
                   format_double(sols[i].x(k).imag()) + "," + format_double(sols[i].residual) + "\n";
    return out;
}

std::vector<SweepPoint> sweep(const RunConfig& cfg, const SweepSpec& spec) {
    std::vector<SweepPoint> pts;
    for (const auto& v : spec.grid) {
        SweepPoint pt;
        pt.value = v;
        try {
            RunConfig c = cfg;
            set_param(c.model, spec.parameter, v);
            c.model.validate();
            RunResult r = run(c);
            pt.checks = int(r.report.records().size());
            pt.failures = r.report.failures();
            pt.worst_ratio = r.report.worst_ratio();
            pt.warnings = r.report.warnings();
            pt.ok = r.report.all_pass();
            if (std::find(c.tasks.begin(), c.tasks.end(), Task::spectrum) != c.tasks.end()) {
                pt.solutions = int(r.solutions.size());
                pt.expected = 1 << c.model.n_sites;
            }
        } catch (const ParameterError& ex) {
            pt.error = std::string("configuration: ") + ex.what();
        } catch (const std::exception& ex) {
            pt.breakdown = true;
            pt.error = ex.what();
        }
        pts.push_back(std::move(pt));
    }
    return pts;
}

nlohmann::json sweep_json(const RunConfig& cfg, const SweepSpec& spec, const std::vector<SweepPoint>& pts) {
    nlohmann::json a = nlohmann::json::array();
    int passed = 0;
    double worst = 0;
    for (const auto& p : pts) {
        nlohmann::json e = {{"value", p.value}, {"pass", p.ok}, {"checks", p.checks}, {"failures", p.failures},
                            {"worst_ratio", p.worst_ratio}, {"warnings", p.warnings}};
        if (p.expected >= 0) e["spectrum"] = {{"solutions", p.solutions}, {"expected", p.expected}};
        if (!p.error.empty()) e["error"] = p.error;
        a.push_back(e);
        passed += p.ok;
        worst = std::max(worst, p.worst_ratio);
    }
    return {{"parameter", spec.parameter},
            {"base_model", params_json(cfg.model)},
            {"points", a},
            {"summary", {{"points", pts.size()}, {"passed", passed},
                         {"pass_rate", pts.empty() ? 1.0 : double(passed) / double(pts.size())}, {"worst_ratio", worst}}}};
}

std::string sweep_csv(const std::vector<SweepPoint>& pts) {
    std::string out = "point,re_value,im_value,pass,checks,failures,worst_ratio,solutions,expected,warnings\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        cplx v(0.0);
        try {
            v = json_complex(p.value, "grid value");
        } catch (const ParameterError&) {
        }
        out += std::to_string(i) + "," + format_double(v.real()) + "," + format_double(v.imag()) + "," +
               (p.ok ? "true" : "false") + "," + std::to_string(p.checks) + "," + std::to_string(p.failures) + "," +
               format_double(p.worst_ratio) + "," + std::to_string(p.solutions) + "," + std::to_string(p.expected) + "," +
               std::to_string(p.warnings.size()) + "\n";
    }
    return out;
}

int exit_code(const Report& r) { return r.all_pass() ? kExitPass : kExitCheckFailure; }

}  // namespace xyz
