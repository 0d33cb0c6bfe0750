#include "dltl/cli.hpp"

#include "helpers.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "dltl");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    int code = dltl::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const char* name) {
    return (std::filesystem::temp_directory_path() / ("dltl_unit_" + std::string(name))).string();
}

}  // namespace

TEST_CASE("cli parse and eval") {
    auto p = run({"parse", "-f", "F[0.6] G[0.9] p"});
    CHECK(p.code == 0);
    auto j = nlohmann::json::parse(p.out);
    CHECK(j.dump().find("9/10") != std::string::npos);

    auto e = run({"eval", "-f", "G[1/2] p", "--word", R"([["p"],["p"],[]])"});
    REQUIRE(e.code == 0);
    auto ej = nlohmann::json::parse(e.out);
    CHECK(ej["lo"]["exact"] == "3/4");
    CHECK(ej["hi"]["exact"] == "3/4");
}

TEST_CASE("cli exit codes") {
    auto bad = run({"parse", "-f", "p U[1] q"});
    CHECK(bad.code == 2);
    auto ej = nlohmann::json::parse(bad.err);
    CHECK(ej["error"] == "parse");

    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"synthesize", "--mdp", "/nonexistent/m.json", "-f", "F[1/2] p"}).code == 2);
    CHECK(run({"compile", "-f", "G[0.9] p & F[0.9] !p", "--budget", "10"}).code == 4);
}

TEST_CASE("cli compile, check and export round trip") {
    auto rm = tmp("f.json");
    auto c = run({"compile", "-f", "F[2/3] p", "-o", rm});
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["states"] == 6);

    auto chk = run({"check", "--rm", rm, "-f", "F[2/3] p", "--trials", "50", "--seed", "1"});
    CHECK(chk.code == 0);

    auto d1 = run({"export-dot", "--rm", rm});
    auto d2 = run({"export-dot", "--rm", rm});
    CHECK(d1.code == 0);
    CHECK(d1.out == d2.out);
    CHECK(d1.out.find("digraph") != std::string::npos);
    std::remove(rm.c_str());
}

TEST_CASE("cli synthesize and simulate are deterministic") {
    auto mdp = testing::data_path("stay_or_leave.json");
    auto pol = tmp("pol.json");
    auto s = run({"synthesize", "--mdp", mdp, "-f", "G[0.99] p & F[0.99] !p", "-o", pol});
    REQUIRE(s.code == 0);
    auto v = std::stod(nlohmann::json::parse(s.out)["value"].get<std::string>());
    CHECK(std::abs(v - 0.49987) < 1e-3);

    auto a = run({"simulate", "--mdp", mdp, "--policy", pol, "--steps", "100", "--seed", "4"});
    auto b = run({"simulate", "--mdp", mdp, "--policy", pol, "--steps", "100", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    std::remove(pol.c_str());

    auto l1 = run({"learn", "--mdp", testing::data_path("two_hazard_a1_safe.json"), "-f", "G[0.9] safe", "--mode", "pac",
                   "--seed", "2"});
    auto l2 = run({"learn", "--mdp", testing::data_path("two_hazard_a1_safe.json"), "-f", "G[0.9] safe", "--mode", "pac",
                   "--seed", "2"});
    CHECK(l1.code == 0);
    CHECK(l1.out == l2.out);
}
