#pragma once

#include "xyz/config.hpp"

namespace xyz {

enum ExitCode { kExitPass = 0, kExitCheckFailure = 1, kExitConfig = 2, kExitBreakdown = 3 };

struct RunResult {
    Report report;
    std::vector<SpectrumSolution> solutions;  // filled when the spectrum task ran
    nlohmann::json timing = nlohmann::json::object();
};

// Executes cfg.tasks in dependency order. Hypothesis failures (DegeneracyError inside a task) are
// recorded as failed checks; other numerical breakdowns propagate.
RunResult run(const RunConfig& cfg);

// Full JSON document: environment echo, checks, optional timing.
nlohmann::json run_json(const RunConfig& cfg, const RunResult& r, bool with_timing);

// Solutions table: solution,n,re_x,im_x,residual.
std::string solutions_csv(const std::vector<SpectrumSolution>& sols);
nlohmann::json solutions_json(const std::vector<SpectrumSolution>& sols);

struct SweepPoint {
    nlohmann::json value;
    bool ok = false;       // ran to completion and every check passed
    bool breakdown = false;
    std::string error;
    int checks = 0, failures = 0;
    double worst_ratio = 0;
    int solutions = -1, expected = -1;
    std::vector<std::string> warnings;
};

std::vector<SweepPoint> sweep(const RunConfig& cfg, const SweepSpec& spec);
nlohmann::json sweep_json(const RunConfig& cfg, const SweepSpec& spec, const std::vector<SweepPoint>& pts);
std::string sweep_csv(const std::vector<SweepPoint>& pts);

int exit_code(const Report& r);

}  // namespace xyz
