// Acceptance campaign: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "xyz/battery.hpp"

using namespace xyz;

namespace {

struct Outcome {
    int checks = 0;
    int failures = 0;
    int errors = 0;
    double worst = 0;
    std::string first_failure;
};

using Job = std::function<void(Report&)>;

void run_job(const std::string& label, const Job& job, Outcome& out) {
    Report rep(label);
    try {
        job(rep);
    } catch (const std::exception& ex) {
        ++out.errors;
        if (out.first_failure.empty()) out.first_failure = label + ": " + ex.what();
    }
    out.checks += int(rep.records().size());
    out.failures += rep.failures();
    out.worst = std::max(out.worst, rep.worst_ratio());
    if (out.first_failure.empty())
        for (const auto& r : rep.records())
            if (!r.pass) {
                out.first_failure = r.id + " residual " + format_double(r.residual);
                break;
            }
}

BatteryContext context(int n, std::uint64_t seed) {
    BatteryContext ctx;
    ctx.seed = seed;
    ctx.tag = "N" + std::to_string(n) + ".s" + std::to_string(seed);
    return ctx;
}

bool report_line(int id, const std::string& title, const Outcome& o, double seconds, double budget) {
    const bool ok = o.failures == 0 && o.errors == 0 && o.checks > 0 && seconds < budget;
    std::printf("criterion %d: %s  %s  [checks %d, failures %d, errors %d, worst residual/tol %.2e, %.1f s]\n", id,
                ok ? "PASS" : "FAIL", title.c_str(), o.checks, o.failures, o.errors, o.worst, seconds);
    if (!ok && !o.first_failure.empty()) std::printf("    first failure: %s\n", o.first_failure.c_str());
    if (seconds >= budget) std::printf("    runtime budget %.0f s exceeded\n", budget);
    std::fflush(stdout);
    return ok;
}

template <class F>
bool criterion(int id, const std::string& title, double budget, F&& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    body(o);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report_line(id, title, o, s, budget);
}

}  // namespace

int main() {
    bool all = true;

    all &= criterion(1, "structural identities, N = 0..3, 10 samples each", 120, [](Outcome& o) {
        for (int n = 0; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 10; ++s)
                run_job("identity", [&](Report& r) { identity_battery(sample_params(n, s), context(n, s), r); }, o);
    });

    all &= criterion(2, "gauge battery, N = 0..3", 300, [](Outcome& o) {
        for (int n = 0; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 5; ++s)
                run_job("gauge", [&](Report& r) {
                    ModelParams p = sample_params(n, s);
                    BatteryContext ctx = context(n, s);
                    gauge_battery(p, resolve_frame(Model(p), ctx), ctx, r);
                }, o);
    });

    all &= criterion(3, "gauge fixing, 5 boundary draws", 300, [](Outcome& o) {
        for (std::uint64_t s = 1; s <= 5; ++s)
            run_job("gauge-fix", [&](Report& r) { gauge_fix_battery(sample_params(2, s), context(2, s), r); }, o);
    });

    all &= criterion(4, "SOV basis, N = 1..3", 300, [](Outcome& o) {
        for (int n = 1; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 5; ++s)
                run_job("sov", [&](Report& r) {
                    ModelParams p = sample_params(n, s);
                    BatteryContext ctx = context(n, s);
                    sov_battery(p, resolve_frame(Model(p), ctx), ctx, r);
                }, o);
    });

    all &= criterion(5, "spectrum equivalence, N = 1..3, 5 draws", 300, [](Outcome& o) {
        for (int n = 1; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 5; ++s)
                run_job("spectrum", [&](Report& r) {
                    ModelParams p = sample_params(n, s);
                    BatteryContext ctx = context(n, s);
                    spectrum_battery(p, resolve_frame(Model(p), ctx), ctx, r);
                }, o);
    });

    all &= criterion(6, "scalar products, N = 1..3", 300, [](Outcome& o) {
        for (int n = 1; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 5; ++s)
                run_job("scalar", [&](Report& r) {
                    ModelParams p = sample_params(n, s);
                    BatteryContext ctx = context(n, s);
                    GaugeFrame f = resolve_frame(Model(p), ctx);
                    Report side;
                    SpectrumOutcome so = spectrum_battery(p, f, ctx, side);
                    std::vector<Vec> xs;
                    for (const auto& sol : so.solve.solutions) xs.push_back(sol.x);
                    scalar_battery(p, f, xs, ctx, r);
                }, o);
    });

    all &= criterion(7, "homogeneous-limit Hamiltonian, N = 2, 3", 300, [](Outcome& o) {
        for (int n = 2; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 5; ++s)
                run_job("hamiltonian", [&](Report& r) { hamiltonian_battery(sample_params(n, s), context(n, s), r); }, o);
    });

    all &= criterion(8, "negative controls", 300, [](Outcome& o) {
        for (int n = 2; n <= 3; ++n)
            for (std::uint64_t s = 1; s <= 3; ++s)
                run_job("negative", [&](Report& r) {
                    ModelParams p = sample_params(n, s);
                    BatteryContext ctx = context(n, s);
                    negative_controls(p, resolve_frame(Model(p), ctx), ctx, r);
                }, o);
    });

    std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
