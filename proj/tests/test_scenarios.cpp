#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "lsmcf/run_config.hpp"
#include "lsmcf/scenarios.hpp"

using namespace lsmcf;

namespace {

ScenarioSpec small(const std::string& name, int nx = 32) {
    ScenarioSpec s = default_spec(name);
    s.nx = name == "shrinking_sphere" ? 16 : nx;
    return s;
}

}  // namespace

TEST_CASE("registry lists every scenario once with a claim and criteria") {
    const auto& reg = scenario_registry();
    CHECK(reg.size() >= 7);
    std::set<std::string> names;
    for (const auto& s : reg) {
        names.insert(s.name);
        CHECK(is_scenario(s.name));
        CHECK_FALSE(s.claim.empty());
        CHECK_FALSE(s.criteria.empty());
        CHECK(default_spec(s.name).name == s.name);
        const std::string d = describe(s.name);
        CHECK(d.find("scenario: " + s.name) != std::string::npos);
        CHECK(d.find("pass criteria:") != std::string::npos);
    }
    CHECK(names.size() == reg.size());
    for (const char* n : {"shrinking_circle", "pinned", "fattening", "avoidance", "dirichlet_consistency",
                          "invariance", "regularity"})
        CHECK(names.count(n) == 1);
    CHECK_FALSE(is_scenario("no_such"));
    CHECK_THROWS_AS(default_spec("no_such"), Error);
    CHECK_THROWS_AS(describe("no_such"), Error);
}

TEST_CASE("scenario settings validation") {
    ScenarioSpec s = default_spec("pinned");
    CHECK_NOTHROW(s.validate());
    s.nx = 4;
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_spec("pinned");
    s.safety = 1.5;
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_spec("pinned");
    s.t_max = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = default_spec("pinned");
    s.name = "nope";
    CHECK_THROWS_AS(run_scenario(s), Error);
    CHECK(default_spec("pinned").cells() == 256);
    s = default_spec("pinned");
    s.nx = 64;
    s.refine = 2;
    CHECK(s.cells() == 128);
}

TEST_CASE("every scenario runs at a coarse resolution and reports its checked metrics") {
    for (const auto& info : scenario_registry()) {
        CAPTURE(info.name);
        const ScenarioReport r = run_scenario(small(info.name));
        CHECK(r.name == info.name);
        CHECK_FALSE(r.checks.empty());
        for (const auto& c : r.checks) CHECK(r.has_metric(c.metric));
        CHECK((r.status == "pass" || r.status == "fail" || r.status == "hypothesis-failure"));
        CHECK(r.pass == (r.status == "pass"));
    }
}

TEST_CASE("scenario runs are deterministic") {
    const ScenarioReport a = run_scenario(small("pinned"));
    const ScenarioReport b = run_scenario(small("pinned"));
    REQUIRE(a.metrics.size() == b.metrics.size());
    for (std::size_t k = 0; k < a.metrics.size(); ++k) {
        CHECK(a.metrics[k].first == b.metrics[k].first);
        CHECK(a.metrics[k].second == b.metrics[k].second);
    }
}

TEST_CASE("finalize derives status from checks and the hypothesis flag") {
    ScenarioReport r;
    r.metrics = {{"a", 1.0}, {"b", 2.0}};
    r.checks = {{"a", Check::Rel::LessEq, 1.0}, {"b", Check::Rel::GreaterEq, 2.0}};
    r.finalize();
    CHECK(r.pass);
    CHECK(r.status == "pass");
    r.finalize();  // idempotent
    CHECK(r.status == "pass");
    r.checks.push_back({"a", Check::Rel::LessEq, 0.5});
    r.finalize();
    CHECK(r.status == "fail");
    r.hypothesis_holds = false;
    r.finalize();
    CHECK(r.status == "hypothesis-failure");
    CHECK_FALSE(r.pass);
    r.checks.push_back({"missing", Check::Rel::LessEq, 0.5});
    CHECK_THROWS_AS(r.finalize(), Error);
}

TEST_CASE("output directory receives the report and the trajectory") {
    const std::string dir = (std::filesystem::temp_directory_path() / "lsmcf_scenario_out").string();
    std::filesystem::remove_all(dir);
    ScenarioSpec s = small("shrinking_circle");
    s.t_max = 0.1;
    s.out_dir = dir;
    const ScenarioReport r = run_scenario(s);
    CHECK(std::filesystem::exists(dir + "/shrinking_circle/report.csv"));
    CHECK(std::filesystem::exists(dir + "/shrinking_circle/diagnostics.csv"));
    CHECK(std::filesystem::exists(dir + "/shrinking_circle/u_0.csv"));
    std::ifstream is(dir + "/shrinking_circle/report.csv");
    std::string line;
    std::getline(is, line);
    CHECK(line == "key,value");
    std::getline(is, line);
    CHECK(line == "scenario,shrinking_circle");
    std::getline(is, line);
    CHECK(line == "status," + r.status);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run config parsing") {
    std::istringstream ok("# comment\nscenario = pinned\n nx=256 \n\nt_max=0.2\nvtk=true\nout=res  # trailing\n");
    const RunConfig c = parse_config(ok);
    CHECK(c.scenario == std::string("pinned"));
    CHECK(c.nx == 256);
    CHECK(c.t_max == 0.2);
    CHECK(c.vtk == true);
    CHECK(c.out == std::string("res"));
    CHECK_FALSE(c.eta.has_value());
    ScenarioSpec s = default_spec("pinned");
    s.nx = 64;
    c.apply(s);
    CHECK(s.nx == 256);
    CHECK(s.t_max == 0.2);
    CHECK(s.delta == default_spec("pinned").delta);

    std::istringstream empty("");
    const RunConfig e = parse_config(empty);
    CHECK_FALSE(e.nx.has_value());
    CHECK_FALSE(e.scenario.has_value());

    auto line_of = [](const std::string& text) {
        std::istringstream is(text);
        try {
            parse_config(is);
        } catch (const ConfigError& err) {
            return err.line();
        }
        return -1;
    };
    CHECK(line_of("nx=abc\n") == 1);
    CHECK(line_of("nx=64\nnx=128\n") == 2);
    CHECK(line_of("nx=64\n\ncolour=red\n") == 3);
    CHECK(line_of("just words\n") == 1);
    CHECK(line_of("scenario=no_such\n") == 1);
    CHECK(line_of("vtk=maybe\n") == 1);
    CHECK(line_of("t_max=0.1x\n") == 1);

    std::istringstream bad("nx=abc\n");
    try {
        parse_config(bad);
        FAIL("expected an error");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).rfind("line 1: ", 0) == 0);
    }
    CHECK_THROWS_AS(parse_config(std::string("/nonexistent/lsmcf.cfg")), Error);
}
