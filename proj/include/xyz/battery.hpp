#pragma once

#include <optional>
#include <string>

#include "xyz/report.hpp"
#include "xyz/scalar.hpp"

namespace xyz {

struct BatteryContext {
    Tolerances tol;
    cplx beta{0.3, 0.2};                // beta used when the gauge is fixed automatically
    std::optional<GaugeFrame> frame;    // explicit (alpha, beta); skips fixing
    std::uint64_t seed = 0;
    std::string tag;                    // suffix appended to every check id
};

// Explicit frame if given, otherwise Newton gauge fixing in the B family.
GaugeFrame resolve_frame(const Model& m, const BatteryContext& ctx);

void identity_battery(const ModelParams& p, const BatteryContext& ctx, Report& rep);
void gauge_battery(const ModelParams& p, const GaugeFrame& f, const BatteryContext& ctx, Report& rep);
void gauge_fix_battery(const ModelParams& p, const BatteryContext& ctx, Report& rep);
void sov_battery(const ModelParams& p, const GaugeFrame& f, const BatteryContext& ctx, Report& rep);

struct SpectrumOutcome {
    std::vector<Vec> oracle;              // x-vectors from the dense oracle
    SolveReport solve;
    std::vector<double> residuals;        // quadratic residual per oracle-seeded solution
};

SpectrumOutcome spectrum_battery(const ModelParams& p, const GaugeFrame& f, const BatteryContext& ctx, Report& rep);
void scalar_battery(const ModelParams& p, const GaugeFrame& f, const std::vector<Vec>& xs, const BatteryContext& ctx,
                    Report& rep);
void hamiltonian_battery(const ModelParams& p, const BatteryContext& ctx, Report& rep);
void negative_controls(const ModelParams& p, const GaugeFrame& f, const BatteryContext& ctx, Report& rep);

}  // namespace xyz
