#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

// Runs the CLI with stdout and stderr captured to a temporary file.
Result cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "lsmcf_cli_test.log";
    const std::string cmd = std::string("\"") + LSMCF_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    r.out = ss.str();
    return r;
}

}  // namespace

TEST_CASE("list prints the registry") {
    const Result r = cli("list");
    CHECK(r.code == 0);
    CHECK(r.out.find("shrinking_circle") != std::string::npos);
    CHECK(r.out.find("regularity") != std::string::npos);
}

TEST_CASE("describe prints the claim and criteria") {
    const Result r = cli("describe pinned");
    CHECK(r.code == 0);
    CHECK(r.out.find("claim:") != std::string::npos);
    CHECK(r.out.find("pass criteria:") != std::string::npos);
    CHECK(cli("describe no_such").code == 2);
}

TEST_CASE("usage errors exit with 2") {
    const Result unknown = cli("run no_such");
    CHECK(unknown.code == 2);
    CHECK(unknown.out.find("shrinking_circle") != std::string::npos);  // registry printed
    CHECK(cli("run shrinking_circle --nx abc").code == 2);
    CHECK(cli("run shrinking_circle --safety 2").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("").code == 2);
    CHECK(cli("run").code == 2);
    CHECK(cli("run shrinking_circle --config /nonexistent/lsmcf.cfg").code == 2);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("config errors exit with 2 and name the line") {
    const fs::path cfg = fs::temp_directory_path() / "lsmcf_cli_bad.cfg";
    {
        std::ofstream os(cfg);
        os << "scenario=pinned\nnx=abc\n";
    }
    const Result r = cli("run --config \"" + cfg.string() + "\"");
    CHECK(r.code == 2);
    CHECK(r.out.find("line 2") != std::string::npos);
    fs::remove(cfg);
}

TEST_CASE("a passing run exits 0 and writes its artifacts") {
    const fs::path out = fs::temp_directory_path() / "lsmcf_cli_run";
    fs::remove_all(out);
    const fs::path cfg = fs::temp_directory_path() / "lsmcf_cli_ok.cfg";
    {
        std::ofstream os(cfg);
        os << "scenario=shrinking_circle\nnx=64\nt_max=0.2\n";
    }
    // Flags override the config file.
    const Result r = cli("run --config \"" + cfg.string() + "\" --nx 128 --out \"" + out.string() + "\"");
    CHECK(r.code == 0);
    CHECK(r.out.find("shrinking_circle: pass") != std::string::npos);
    CHECK(fs::exists(out / "shrinking_circle" / "diagnostics.csv"));
    CHECK(fs::exists(out / "shrinking_circle" / "report.csv"));
    std::ifstream is(out / "shrinking_circle" / "u_0.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header.rfind("2,129,129,", 0) == 0);
    fs::remove_all(out);
    fs::remove(cfg);
}

TEST_CASE("a failing scenario exits 1") {
    // The avoidance claim's hypothesis is violated by construction, so the run fails.
    const fs::path out = fs::temp_directory_path() / "lsmcf_cli_fail";
    const Result r = cli("run avoidance --nx 64 --out \"" + out.string() + "\"");
    CHECK(r.code == 1);
    CHECK(r.out.find("hypothesis-failure") != std::string::npos);
    fs::remove_all(out);
}
