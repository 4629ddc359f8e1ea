#include "doctest.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

#include "epd/cli.hpp"
#include "epd/report.hpp"

using namespace epd;

namespace {

int run(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("epdtool");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string tmp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("cli: critical subcommand reports the closed-form root") {
    const std::string out = tmp_path("critical.json");
    const int code = run({"critical", "--spec", R"({"variant":"monomial","x":[1,1],"y":[1]})",
                          "--guess", "0,1", "--out", out});
    CHECK(code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_text_file(out));
    CHECK(j.at("schema") == 1);
    CHECK(j.at("beta")[0].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(j.at("beta")[1].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j.at("order") == 1);
}

TEST_CASE("cli: evaluate emits the jet and a small residual") {
    const std::string out = tmp_path("evaluate.json");
    const int code = run({"evaluate", "--spec", R"({"variant":"monomial","x":[1],"y":[]})",
                          "--z", "1,1", "--out", out});
    CHECK(code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_text_file(out));
    CHECK(j.at("jet").at("w")[0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(j.at("residual")[0].get<double>()) < 1e-10);
}

TEST_CASE("cli: verify passes a solution and fails an impossible tolerance") {
    const std::string spec = R"({"variant":"monomial","x":[0.5,1],"y":[0.5]})";
    CHECK(run({"verify", "--identity", "epd", "--spec", spec, "--grid", "6",
               "--tol", "1e-9"}) == 0);
    CHECK(run({"verify", "--identity", "epd", "--spec", spec, "--grid", "6",
               "--tol", "1e-30"}) == 1);
    CHECK(run({"verify", "--identity", "closed-form", "--spec", spec, "--grid", "5",
               "--tol", "1e-9"}) == 0);
    CHECK(run({"verify", "--identity", "dual", "--spec", spec, "--grid", "5",
               "--tol", "1e-9"}) == 0);
}

TEST_CASE("cli: configuration errors exit with status 2") {
    CHECK(run({"critical"}) == 2);                       // missing required --spec
    CHECK(run({"critical", "--spec", "{bad json"}) == 2);
    CHECK(run({"verify", "--identity", "nope", "--spec",
               R"({"variant":"monomial","x":[1],"y":[]})"}) == 2);
    CHECK(run({"unknown-subcommand"}) == 2);
    // No off-axis critical point: solver failure surfaces as a config error.
    CHECK(run({"critical", "--spec", R"({"variant":"monomial","x":[1],"y":[]})"}) == 2);
}

TEST_CASE("cli: evolve writes field CSV and a residual report") {
    const std::string out = tmp_path("evolve.csv");
    const std::string rep = tmp_path("evolve.json");
    const int code =
        run({"evolve", "--spec", R"({"variant":"monomial","x":[0,1],"y":[0]})",
             "--flow-a", "monomial-x,1", "--flow-b", "monomial-y,0",
             "--grid", "-0.2,0.05,5,0.6,0.05,5", "--guess", "0,1",
             "--tol", "1e-2", "--out", out, "--report", rep});
    CHECK(code == 0);
    const std::string csv = read_text_file(out);
    CHECK(csv.rfind("param_a,param_b", 0) == 0);
    const nlohmann::json j = nlohmann::json::parse(read_text_file(rep));
    CHECK(j.at("max").get<double>() < 1e-2);
}

TEST_CASE("cli: ham diagnostics pass at the documented tolerance") {
    const std::string out = tmp_path("ham.json");
    const int code = run({"ham", "--n", "32", "--tol", "1e-10", "--out", out});
    CHECK(code == 0);
    const nlohmann::json j = nlohmann::json::parse(read_text_file(out));
    CHECK(j.at("casimir").get<double>() < 1e-12);
    CHECK(j.at("skew").at("J0").get<double>() < 1e-12);
    CHECK(j.at("limit_flow").at("orders").size() == 3);
}

TEST_CASE("cli: identical invocations produce bit-identical artifacts") {
    const std::string out1 = tmp_path("det1.json");
    const std::string out2 = tmp_path("det2.json");
    const std::vector<std::string> base = {
        "evaluate", "--spec", R"({"variant":"monomial","x":[0.3,1],"y":[0.7]})",
        "--z", "0.4,1.3"};
    std::vector<std::string> a = base, b = base;
    a.insert(a.end(), {"--out", out1});
    b.insert(b.end(), {"--out", out2});
    CHECK(run(a) == 0);
    CHECK(run(b) == 0);
    CHECK(read_text_file(out1) == read_text_file(out2));
}

TEST_CASE("cli: help exits cleanly") {
    CHECK(run({"--help"}) == 0);
}

TEST_CASE("thread_cap honors the environment override") {
    setenv("EPD_THREADS", "3", 1);
    CHECK(thread_cap() == 3);
    setenv("EPD_THREADS", "0", 1);
    CHECK(thread_cap() >= 1);  // invalid values fall back to hardware detection
    unsetenv("EPD_THREADS");
    CHECK(thread_cap() >= 1);
}
