#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

#include "superint/cli.hpp"

using superint::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out, err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "superint");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("volume report matches the catalog") {
    const auto r = call({"volume", "--m", "3", "--n", "1", "--phase", "-(X2) - 1"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["schema"] == 1);
    CHECK(j["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["closed_form"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["M"] == 1);
    CHECK(j["backend"] == "radial");
}

TEST_CASE("paraboloid surface without a box") {
    const auto r = call({"surface", "--m", "3", "--n", "0", "--phase", "x1^2+x2^2 - x3", "--constraint", "x3 - 1", "--axis", "x3"});
    REQUIRE(r.code == 0);
    const double want = std::numbers::pi / 6 * (std::pow(5.0, 1.5) - 1);
    CHECK(std::abs(r.json()["value"].get<double>() - want) <= 1e-7);
    CHECK(r.json()["formula"] == "paraboloid-area");
}

TEST_CASE("catalog queries") {
    auto value = [](std::vector<std::string> a) { return call(std::move(a)).json()["value"].get<double>(); };
    CHECK(value({"catalog", "hyperboloid", "volume", "--m", "3", "--n", "0", "--param", "h=1"}) ==
          doctest::Approx(8 * std::numbers::pi / 3));
    CHECK(value({"catalog", "superball", "volume", "--m", "2", "--n", "2"}) == 0);
    CHECK(value({"catalog", "--param", "shape=paraboloid", "--param", "kind=area", "--m", "2", "--param", "h=1"}) ==
          doctest::Approx(std::sqrt(5.0) + std::asinh(2.0) / 2));
}

TEST_CASE("output formats") {
    const auto csv = call({"catalog", "paraboloid", "area", "--m", "2", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("schema,command,value", 0) == 0);
    const auto pretty = call({"catalog", "paraboloid", "area", "--m", "2", "--pretty"});
    CHECK(pretty.out.find("formula") != std::string::npos);
    CHECK(pretty.out.find('{') == std::string::npos);
}

TEST_CASE("harness commands") {
    const auto cp = call({"cauchy-pompeiu", "--m", "2", "--phase", "x1^2+x2^2-1", "--integrand", "x1 + x2^2", "--param", "y=0.2,0.1"});
    REQUIRE(cp.code == 0);
    CHECK(std::abs(cp.json()["value"].get<double>() - 0.21) <= 1e-3);
    CHECK(cp.json()["interior"] == true);
    const auto st = call({"stokes", "--m", "2", "--n", "1", "--phase", "-X2 - 1", "--integrand", "x1", "--backend", "grid"});
    REQUIRE(st.code == 0);
    CHECK(st.json()["deviation"].get<double>() <= 1e-4);
    const auto pz = call({"pizzetti", "--m", "3", "--n", "1", "--integrand", "x1^2*x2^2 + q1*q2*x3^2 + 3"});
    REQUIRE(pz.code == 0);
    CHECK(pz.json()["closed_form"].get<double>() == doctest::Approx(pz.json()["value"].get<double>()));
    const auto ori = call({"surface", "--oriented", "--m", "2", "--phase", "x1^2+x2^2-1", "--integrand", "x1"});
    REQUIRE(ori.code == 0);
    CHECK(ori.json()["components"]["e1"].get<double>() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("problem files and overrides") {
    const std::string path = "superint_cli_test_problem.txt";
    {
        std::ofstream f(path);
        f << "# paraboloid\ncommand=surface\nm=3\nn=0\nphase=x1^2+x2^2 - x3\nconstraint=x3 - 1\n";
    }
    const auto area = call({"--file", path});
    REQUIRE(area.code == 0);
    CHECK(area.json()["formula"] == "paraboloid-area");
    const auto vol = call({"volume", "--file", path});
    REQUIRE(vol.code == 0);
    CHECK(vol.json()["value"].get<double>() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(call({"spiral"}).code == 3);
    CHECK(call({"volume", "--m", "2", "--phase", "x1^2 + q1"}).code == 3);
    CHECK(call({"volume", "--m", "2", "--phase", "x1^2+x2^2-1", "--backend", "spiral"}).code == 3);
    // not a catalog shape and no box
    CHECK(call({"volume", "--m", "2", "--phase", "x1^2+2*x2^2-1"}).code == 3);
    CHECK(call({"cauchy-pompeiu", "--m", "2", "--phase", "x1^2+x2^2-1", "--param", "y=1,0"}).code == 3);
    // marching tetrahedra reach about 1e-4, short of the default closed-form tolerance
    const std::vector<std::string> coarse{"surface", "--m", "3", "--phase", "x1^2+x2^2+x3^2-1", "--backend", "levelset"};
    CHECK(call(coarse).code == 2);
    auto relaxed = coarse;
    relaxed.insert(relaxed.end(), {"--param", "deviation_tol=1e-3"});
    CHECK(call(relaxed).code == 0);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("the installed binary") {
    const std::string cmd = std::string("\"") + SUPERINT_EXE + "\" verify 10 > /dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    const int bad = std::system((std::string("\"") + SUPERINT_EXE + "\" volume --m 0 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(bad) == 3);
}
