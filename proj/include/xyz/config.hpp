#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xyz/battery.hpp"

namespace xyz {

// Tasks in dependency order; a run executes the requested subset in this order.
enum class Task { identities, gauge, gauge_fix, sov, spectrum, scalar, hamiltonian, negative };

const std::vector<Task>& all_tasks();
std::string task_name(Task t);
Task parse_task(const std::string& name);

struct SweepSpec {
    std::string parameter;
    std::vector<nlohmann::json> grid;  // numbers or [re, im]
};

struct RunConfig {
    ModelParams model;
    std::optional<GaugeFrame> frame;  // explicit (alpha, beta); otherwise fixed automatically
    cplx beta{0.3, 0.2};
    std::vector<Task> tasks;
    Tolerances tol;
    std::uint64_t seed = 1;
    std::string output_path;  // empty: stdout
    std::string format = "json";
    bool fail_fast = false;
    std::optional<SweepSpec> sweep;
};

// Command-line values that take precedence over the file.
struct Overrides {
    std::optional<int> n_sites;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<std::string> emit;
    bool fail_fast = false;
};

// Throws ParameterError on any malformed or out-of-range entry.
RunConfig parse_config(const nlohmann::json& j, const Overrides& o);
RunConfig load_config(const std::string& path, const Overrides& o);

cplx json_complex(const nlohmann::json& v, const std::string& what);
nlohmann::json complex_json(cplx z);
nlohmann::json params_json(const ModelParams& p);

// Set a named model field: eta, omega, xi.K, minus.zeta|kappa|tau, plus.zeta|kappa|tau.
void set_param(ModelParams& p, const std::string& name, const nlohmann::json& value);

constexpr int kMaxSites = 10;
constexpr double kMinTolerance = 1e-14;

}  // namespace xyz
