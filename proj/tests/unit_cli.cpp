#include "helpers.hpp"
#include "xyz/runner.hpp"

using namespace xyz;
using nlohmann::json;

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("tolerance precedence") {
    Tolerances t;
    CHECK(t.get("sov.rank-left", 1e-8) == 1e-8);
    t.set("sov", 1e-6);
    CHECK(t.get("sov.rank-left", 1e-8) == 1e-6);
    CHECK(t.get("spectrum.count", 1e-8) == 1e-8);
    t.set("sov.rank", 1e-5);
    CHECK(t.get("sov.rank-left", 1e-8) == 1e-5);
    t.set_global(1e-3);
    CHECK(t.get("sov.rank-left", 1e-8) == 1e-3);
}

TEST_CASE("report pass rules and CSV layout") {
    Report r;
    r.check("a.x", "rel", 1e-10, 1e-8);
    r.check("a.y", "rel", std::nan(""), 1e-8);
    r.expect("a.z", "flag", true);
    CHECK(r.failures() == 1);
    CHECK_FALSE(r.all_pass());
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("check_id,relation,residual,tolerance,pass", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(exit_code(r) == kExitCheckFailure);
}

TEST_CASE("configuration parsing") {
    json j = json::parse(R"({
        "model": {"n_sites": 2, "eta": [0.21, 0.03], "omega": [0.0, 1.3], "xi": [0.05, [0.1, -0.02]],
                  "minus": {"kappa": 0.4}},
        "gauge": "auto",
        "tasks": ["spectrum", "identities"],
        "tolerances": {"sov": 1e-6},
        "rng_seed": 9,
        "output": {"format": "csv"}
    })");
    RunConfig c = parse_config(j, {});
    CHECK(c.model.n_sites == 2);
    CHECK(c.model.eta == cplx(0.21, 0.03));
    CHECK(c.model.xi[1] == cplx(0.1, -0.02));
    CHECK(c.model.minus.kappa == cplx(0.4, 0.0));
    CHECK(c.seed == 9);
    CHECK(c.format == "csv");
    REQUIRE(c.tasks.size() == 2);
    CHECK(c.tasks[0] == Task::identities);  // dependency order, not file order
    CHECK(c.tol.get("sov.x", 1.0) == 1e-6);

    Overrides o;
    o.n_sites = 3;
    o.seed = 4;
    o.emit = "json";
    json jm = {{"model", {{"n_sites", 1}}}};
    RunConfig c2 = parse_config(jm, o);
    CHECK(c2.model.n_sites == 3);
    CHECK(c2.seed == 4);
    CHECK(c2.format == "json");
}

TEST_CASE("configuration errors") {
    auto bad = [](const char* text) { return parse_config(json::parse(text), {}); };
    CHECK_THROWS_AS(bad(R"({"modle": {}})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"model": {"n_sites": 11}})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"model": {"n_sites": 2, "xi": [0.1]}})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"tolerances": {"global": 1e-15}})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"tasks": ["spectra"]})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"gauge": "manual"})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"output": {"format": "xml"}})"), ParameterError);
    CHECK_THROWS_AS(bad(R"({"model": {"eta": [1, 2, 3]}})"), ParameterError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json", {}), ParameterError);
}

TEST_CASE("named parameters") {
    ModelParams p = sample_params(2, 3);
    set_param(p, "xi.2", json::array({0.2, 0.1}));
    CHECK(p.xi[1] == cplx(0.2, 0.1));
    set_param(p, "plus.tau", 0.5);
    CHECK(p.plus.tau == cplx(0.5, 0.0));
    CHECK_THROWS_AS(set_param(p, "xi.3", 0.1), ParameterError);
    CHECK_THROWS_AS(set_param(p, "plus.theta", 0.1), ParameterError);
    CHECK_THROWS_AS(set_param(p, "mu", 0.1), ParameterError);
}

TEST_CASE("runs are deterministic and flag violated hypotheses") {
    json j = {{"model", {{"n_sites", 2}}}, {"tasks", {"identities", "sov"}}, {"rng_seed", 3}};
    RunConfig c = parse_config(j, {});
    RunResult a = run(c), b = run(c);
    CHECK(a.report.all_pass());
    CHECK(run_json(c, a, false).dump() == run_json(c, b, false).dump());

    c.model.xi[1] = c.model.xi[0] + c.model.eta;
    RunResult bad = run(c);
    bool flagged = false;
    for (const auto& r : bad.report.records()) flagged = flagged || (r.id == "sov.hypotheses" && !r.pass);
    CHECK(flagged);
    CHECK(exit_code(bad.report) == kExitCheckFailure);
}

TEST_CASE("solution and sweep tables") {
    SpectrumSolution s;
    s.x = Vec::Constant(2, cplx(1.0, -2.0));
    s.residual = 1e-12;
    const std::string csv = solutions_csv({s});
    CHECK(csv.rfind("solution,n,re_x,im_x,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    json j = {{"model", {{"n_sites", 1}}}, {"tasks", {"identities"}}};
    RunConfig c = parse_config(j, {});
    SweepSpec spec{"plus.kappa", {json(0.2), json::array({0.3, 0.1})}};
    auto pts = sweep(c, spec);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].ok);
    CHECK(pts[1].ok);
    CHECK(sweep_json(c, spec, pts)["summary"]["passed"] == 2);
}
