#include <json.hpp>
#include <sstream>

#include "doctest.h"
#include "hamtrio/cli.hpp"

using hamtrio::cli::run;

namespace {
struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json report(std::vector<std::string> args, int expected_code = 0) {
    args.insert(args.begin(), {"--format", "json"});
    auto o = call(args);
    CHECK(o.code == expected_code);
    return nlohmann::json::parse(o.out);
}
}  // namespace

TEST_CASE("canonical operators are reported Hamiltonian") {
    auto j = report({"check", "hamiltonian", "R3_3"});
    CHECK(j["schema"] == "hamtrio-report/1");
    CHECK(j["verdict"] == "pass");
    CHECK(j["command"].get<std::string>().find("R3_3") != std::string::npos);
    for (auto key : {"inputs", "checks", "results", "residuals", "timings", "seed"}) CHECK(j.contains(key));
}

TEST_CASE("compatibility and flat pencils on catalog names") {
    CHECK(report({"check", "compatible", "R2", "R3_1"})["verdict"] == "pass");
    auto defs = hamtrio::cli::default_defs_dir() + "/example45.ham";
    CHECK(report({"--defs", defs, "check", "compatible", "P1", "Q1"})["verdict"] == "pass");
}

TEST_CASE("theorem 2 verifies") {
    auto j = report({"verify", "theorem2"});
    CHECK(j["verdict"] == "pass");
    CHECK(j["checks"].size() > 10);
}

TEST_CASE("central invariants of the rational example") {
    auto j = report({"central-invariants", "example45", "--samples", "10", "--seed", "7"});
    CHECK(j["verdict"] == "pass");
    CHECK(j["seed"] == 7);
    auto o = call({"central-invariants", "example45", "--samples", "10", "--seed", "7"});
    CHECK(o.out.find("0.5") != std::string::npos);
    CHECK(o.out.find("-0.5") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from timings") {
    std::vector<std::string> args{"central-invariants", "example46", "--samples", "10", "--seed", "3"};
    auto a = report(args);
    auto b = report(args);
    a.erase("timings");
    b.erase("timings");
    CHECK(a == b);
}

TEST_CASE("flows") {
    auto j = report({"flows", "example45", "--casimir", "C1", "--eps", "1"});
    CHECK(j["verdict"] == "pass");
}

TEST_CASE("ansatz search") {
    auto j = report({"search", "ansatz", "--operator", "R3_2"});
    CHECK(j["verdict"] == "pass");
}

TEST_CASE("exit codes") {
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"check", "hamiltonian", "NoSuchOperator"}).code == 2);
    CHECK(call({"verify", "theorem9"}).code == 2);
    CHECK(call({"central-invariants", "example45", "--domain", "1,2,x,3"}).code == 2);
    CHECK(call({"--defs", "/nonexistent/file.ham", "check", "hamiltonian", "A"}).code == 2);
    // the first operator of the Harry-Dym pair is not the printed identification
    CHECK(call({"verify", "example44"}).code == 1);
    CHECK(call({"verify", "example41"}).code == 0);
}
