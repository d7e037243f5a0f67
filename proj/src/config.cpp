#include "xyz/config.hpp"

#include <fstream>
#include <set>

namespace xyz {

const std::vector<Task>& all_tasks() {
    static const std::vector<Task> t = {Task::identities, Task::gauge,       Task::gauge_fix, Task::sov,
                                        Task::spectrum,   Task::scalar,      Task::hamiltonian, Task::negative};
    return t;
}

std::string task_name(Task t) {
    switch (t) {
        case Task::identities: return "identities";
        case Task::gauge: return "gauge";
        case Task::gauge_fix: return "gauge-fix";
        case Task::sov: return "sov";
        case Task::spectrum: return "spectrum";
        case Task::scalar: return "scalar";
        case Task::hamiltonian: return "hamiltonian";
        case Task::negative: return "negative";
    }
    return "?";
}

Task parse_task(const std::string& name) {
    for (Task t : all_tasks())
        if (task_name(t) == name) return t;
    throw ParameterError("config: unknown task '" + name + "'");
}

cplx json_complex(const nlohmann::json& v, const std::string& what) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ParameterError("config: " + what + " must be a number or [re, im]");
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json params_json(const ModelParams& p) {
    nlohmann::json xi = nlohmann::json::array();
    for (cplx x : p.xi) xi.push_back(complex_json(x));
    auto side = [](const BoundaryParams& b) {
        return nlohmann::json{{"zeta", complex_json(b.zeta)}, {"kappa", complex_json(b.kappa)}, {"tau", complex_json(b.tau)}};
    };
    return {{"n_sites", p.n_sites}, {"eta", complex_json(p.eta)}, {"omega", complex_json(p.omega)},
            {"xi", xi},           {"minus", side(p.minus)},      {"plus", side(p.plus)}};
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ParameterError("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ParameterError("config: unknown key '" + it.key() + "' in " + where);
}

void check_tol(double t, const std::string& what) {
    if (!(t >= kMinTolerance) || !std::isfinite(t))
        throw ParameterError("config: tolerance " + what + " must be finite and >= 1e-14");
}

BoundaryParams& side_of(ModelParams& p, const std::string& s) {
    if (s == "minus") return p.minus;
    if (s == "plus") return p.plus;
    throw ParameterError("config: unknown boundary side '" + s + "'");
}

}  // namespace

void set_param(ModelParams& p, const std::string& name, const nlohmann::json& value) {
    const cplx v = json_complex(value, name);
    if (name == "eta") {
        p.eta = v;
        return;
    }
    if (name == "omega") {
        p.omega = v;
        return;
    }
    const auto dot = name.find('.');
    if (dot == std::string::npos) throw ParameterError("config: unknown parameter '" + name + "'");
    const std::string head = name.substr(0, dot), field = name.substr(dot + 1);
    if (head == "xi") {
        std::size_t pos = 0;
        int k = -1;
        try {
            k = std::stoi(field, &pos);
        } catch (const std::exception&) {
        }
        if (pos != field.size() || k < 1 || k > p.n_sites)
            throw ParameterError("config: xi index must be in 1.." + std::to_string(p.n_sites));
        p.xi[k - 1] = v;
        return;
    }
    BoundaryParams& b = side_of(p, head);
    if (field == "zeta") b.zeta = v;
    else if (field == "kappa") b.kappa = v;
    else if (field == "tau") b.tau = v;
    else throw ParameterError("config: unknown boundary field '" + field + "'");
}

RunConfig parse_config(const nlohmann::json& j, const Overrides& o) {
    reject_unknown(j, {"model", "gauge", "beta", "tasks", "tolerances", "rng_seed", "output", "sweep"}, "config");
    RunConfig c;

    if (o.seed) c.seed = *o.seed;
    else if (j.contains("rng_seed")) {
        if (!j["rng_seed"].is_number_integer() || j["rng_seed"].get<long long>() < 0)
            throw ParameterError("config: rng_seed must be a non-negative integer");
        c.seed = j["rng_seed"].get<std::uint64_t>();
    }

    const nlohmann::json model = j.value("model", nlohmann::json::object());
    reject_unknown(model, {"n_sites", "eta", "omega", "xi", "minus", "plus"}, "model");
    int n = 2;
    if (model.contains("n_sites")) {
        if (!model["n_sites"].is_number_integer()) throw ParameterError("config: n_sites must be an integer");
        n = model["n_sites"].get<int>();
    }
    if (o.n_sites) n = *o.n_sites;
    if (n < 0 || n > kMaxSites) throw ParameterError("config: n_sites must be in 0..10");

    // Unspecified fields come from the seeded generic sample.
    c.model = sample_params(n, c.seed);
    if (model.contains("eta")) c.model.eta = json_complex(model["eta"], "eta");
    if (model.contains("omega")) c.model.omega = json_complex(model["omega"], "omega");
    if (model.contains("xi")) {
        const auto& xi = model["xi"];
        if (!xi.is_array() || int(xi.size()) != n)
            throw ParameterError("config: xi must list exactly n_sites = " + std::to_string(n) + " values");
        for (int k = 0; k < n; ++k) c.model.xi[k] = json_complex(xi[k], "xi");
    }
    for (const char* s : {"minus", "plus"})
        if (model.contains(s)) {
            reject_unknown(model[s], {"zeta", "kappa", "tau"}, std::string("model.") + s);
            for (const char* f : {"zeta", "kappa", "tau"})
                if (model[s].contains(f)) set_param(c.model, std::string(s) + "." + f, model[s][f]);
        }
    c.model.validate();

    if (j.contains("beta")) c.beta = json_complex(j["beta"], "beta");
    if (j.contains("gauge")) {
        const auto& g = j["gauge"];
        if (g.is_string()) {
            if (g != "auto") throw ParameterError("config: gauge must be \"auto\" or {alpha, beta}");
        } else {
            reject_unknown(g, {"alpha", "beta"}, "gauge");
            if (!g.contains("alpha") || !g.contains("beta")) throw ParameterError("config: gauge needs alpha and beta");
            GaugeFrame f;
            f.alpha = json_complex(g["alpha"], "gauge.alpha");
            f.beta = json_complex(g["beta"], "gauge.beta");
            c.frame = f;
        }
    }

    if (j.contains("tasks")) {
        if (!j["tasks"].is_array()) throw ParameterError("config: tasks must be a list");
        std::set<Task> req;
        for (const auto& t : j["tasks"]) {
            if (!t.is_string()) throw ParameterError("config: task names must be strings");
            req.insert(parse_task(t.get<std::string>()));
        }
        for (Task t : all_tasks())
            if (req.count(t)) c.tasks.push_back(t);
    } else {
        c.tasks = all_tasks();
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) throw ParameterError("config: tolerances must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!it.value().is_number()) throw ParameterError("config: tolerance '" + it.key() + "' must be a number");
            double v = it.value().get<double>();
            check_tol(v, it.key());
            if (it.key() == "global") c.tol.set_global(v);
            else c.tol.set(it.key(), v);
        }
    }
    if (o.tol) {
        check_tol(*o.tol, "--tol");
        c.tol.set_global(*o.tol);
    }

    if (j.contains("output")) {
        const auto& out = j["output"];
        reject_unknown(out, {"path", "format"}, "output");
        if (out.contains("path")) c.output_path = out["path"].get<std::string>();
        if (out.contains("format")) c.format = out["format"].get<std::string>();
    }
    if (o.emit) c.format = *o.emit;
    if (c.format != "json" && c.format != "csv") throw ParameterError("config: format must be json or csv");
    c.fail_fast = o.fail_fast;

    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        reject_unknown(s, {"parameter", "grid"}, "sweep");
        SweepSpec sw;
        sw.parameter = s.value("parameter", std::string());
        if (s.contains("grid")) {
            if (!s["grid"].is_array()) throw ParameterError("config: sweep.grid must be a list");
            for (const auto& v : s["grid"]) sw.grid.push_back(v);
        }
        c.sweep = sw;
    }
    return c;
}

RunConfig load_config(const std::string& path, const Overrides& o) {
    if (path.empty()) return parse_config(nlohmann::json::object(), o);
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw ParameterError(std::string("config: invalid JSON: ") + ex.what());
    }
    try {
        return parse_config(j, o);
    } catch (const nlohmann::json::exception& ex) {
        throw ParameterError(std::string("config: ") + ex.what());
    }
}

}  // namespace xyz
