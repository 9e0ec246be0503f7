#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "krylov/cli.hpp"
#include "krylov/io.hpp"

using namespace krylov;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(KRYLOV_FIXTURES) + "/" + name; }

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("krylov_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

const std::vector<std::string> kResonant = {"run",    "--family", "su2-driven", "--j",     "5",       "--omega0", "4",
                                            "--omega", "4",        "--b0",       "2.1",     "--t-end", "3",        "--samples",
                                            "7"};

}  // namespace

TEST_CASE("cli: run writes the csv contract") {
    const Result r = cli(kResonant);
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == "t,C");
    CHECK(rows[1] == "0,0");
    CHECK(rows[7].rfind("3,", 0) == 0);
    const double c = std::stod(rows[7].substr(2));
    CHECK(std::abs(c - 10.0 * std::pow(std::sin(2.1 * 3.0 / 2.0), 2)) < 1e-12);
}

TEST_CASE("cli: output is byte-deterministic across thread counts") {
    auto args = kResonant;
    args.insert(args.end(), {"--method", "both", "--probabilities"});
    const Result a = cli(args);
    auto one = args;
    one.insert(one.begin(), {"--threads", "1"});
    const Result b = cli(one);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out)[0] == "t,C,dev,p0,p1,p2,p3,p4,p5,p6,p7,p8,p9,p10");
}

TEST_CASE("cli: json output") {
    auto args = kResonant;
    args.insert(args.begin(), {"--format", "json"});
    const Result r = cli(args);
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["family"] == "su2-driven");
    CHECK(j["t"].size() == 7);
    CHECK(j["C"][0] == 0.0);
}

TEST_CASE("cli: config file, explicit flags win") {
    const Result fromcfg = cli({"--config", fixture("run_config.json"), "run"});
    CHECK(fromcfg.code == 0);
    CHECK(fromcfg.out == cli(kResonant).out);
    const Result over = cli({"--config", fixture("run_config.json"), "run", "--samples", "4"});
    CHECK(over.code == 0);
    CHECK(lines(over.out).size() == 5);
}

TEST_CASE("cli: usage errors exit 1") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"frobnicate"}).code == 1);
    CHECK(cli({"run", "--family", "su5"}).code == 1);
    CHECK(cli({"run", "--family", "su2-driven", "--j", "5", "--omega0", "4", "--omega", "4"}).code == 1);
    CHECK(cli({"run", "--family", "h1", "--omega0", "4", "--omega", "2", "--f0", "3", "--t-end", "0"}).code == 1);
    CHECK(cli({"run", "--family", "h1", "--omega0", "4", "--omega", "2", "--f0", "3", "--samples", "1"}).code == 1);
    CHECK(cli({"run", "--family", "su2-driven", "--j", "0.3", "--omega0", "4", "--omega", "4", "--b0", "1"}).code == 1);
    CHECK(cli({"--format", "xml", "run", "--family", "h1"}).code == 1);
    CHECK(cli({"--tol", "-1", "repro", "fig1a"}).code == 1);
    CHECK(cli({"repro", "fig42"}).code == 1);
    CHECK(cli({"lanczos", "--matrix", fixture("missing.json")}).code == 1);
    CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: numerical failures exit 2") {
    const Result guard = cli({"run", "--family", "su11", "--omega0", "4", "--omega", "2", "--g", "2.1", "--t-end", "500"});
    CHECK(guard.code == 2);
    CHECK(guard.err.find("ComplexityGuard") != std::string::npos);
    CHECK(cli({"run", "--family", "h1", "--omega0", "4", "--omega", "4", "--f0", "3", "--truncation", "16"}).code == 2);
    CHECK(cli({"run", "--family", "su2-kicked", "--j", "1", "--omega0", "6.283185307179586", "--period", "1", "--chi",
               "0.5", "--k-max", "5"})
              .code == 2);
}

TEST_CASE("cli: kicked grid from k-max") {
    const Result r =
        cli({"run", "--family", "su2-kicked", "--j", "1", "--omega0", "1", "--period", "1", "--chi", "1", "--k-max", "4"});
    CHECK(r.code == 0);
    CHECK(lines(r.out).size() == 6);
}

TEST_CASE("cli: repro writes traces and reports checks") {
    const fs::path dir = scratch() / "repro";
    const Result r = cli({"--output", dir.string(), "--plot", (dir / "plots/").string(), "repro", "fig1b", "figquench", "fig6b"});
    CHECK(r.code == 0);
    for (const char* id : {"fig1b", "figquench", "fig6b"}) {
        CHECK(fs::exists(dir / (std::string(id) + ".csv")));
        CHECK(fs::exists(dir / "plots" / (std::string(id) + ".svg")));
        CHECK(r.out.find(std::string(id) + " PASS route agreement") != std::string::npos);
    }
    CHECK(r.out.find(" FAIL ") == std::string::npos);
    const std::string csv = read_text((dir / "fig1b.csv").string());
    CHECK(lines(csv)[0] == "t,C,dev");
    CHECK(lines(csv).size() == 1002);
    const fs::path again = scratch() / "repro2";
    CHECK(cli({"--output", again.string(), "repro", "fig1b"}).code == 0);
    CHECK(read_text((again / "fig1b.csv").string()) == csv);
}

TEST_CASE("cli: sweep") {
    const fs::path svg = scratch() / "sweep.svg";
    const Result r = cli({"--plot", svg.string(), "sweep", "--family", "su11", "--omega0", "4", "--omega", "4", "--g", "1",
                          "--t-end", "5", "--samples", "51", "--x-param", "g", "--x-lo", "0", "--x-hi", "3", "--x-n", "4",
                          "--y-param", "delta", "--y-lo", "0", "--y-hi", "3", "--y-n", "4", "--stat", "final"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == "g,delta,value,regime,error");
    CHECK(rows[1] == "0,0,0,quadratic,");
    CHECK(fs::exists(svg));
    const Result bad = cli({"sweep", "--family", "su11", "--omega0", "4", "--omega", "4", "--g", "1", "--t-end", "5",
                            "--truncation", "16", "--x-param", "g", "--x-lo", "0.1", "--x-hi", "3", "--x-n", "2",
                            "--y-param", "delta", "--y-lo", "0", "--y-hi", "0", "--y-n", "1"});
    CHECK(bad.code == 0);
    CHECK(bad.err.find("1 of 2 cells failed") != std::string::npos);
    CHECK(lines(bad.out)[2].find("nan,exponential,TruncationOverflow") != std::string::npos);
}

TEST_CASE("cli: lanczos on fixtures") {
    const Result d = cli({"lanczos", "--matrix", fixture("su3_vconfig.json")});
    REQUIRE(d.code == 0);
    const json j = json::parse(d.out);
    CHECK(j["a"].size() == 3);
    CHECK(std::abs(j["a"][1].get<double>() + 8.0) < 1e-12);
    CHECK(std::abs(j["b"][1].get<double>() - 5.0) < 1e-12);
    CHECK(j["basis"].size() == 3);

    const Result m = cli({"--format", "csv", "lanczos", "--matrix", fixture("su3_vconfig.json"), "--method", "moments"});
    REQUIRE(m.code == 0);
    CHECK(lines(m.out)[0] == "n,a,b");
    CHECK(lines(m.out).size() == 4);

    const Result diag = cli({"lanczos", "--matrix", fixture("diag4.json"), "--seed", fixture("seed_e0_4.json")});
    REQUIRE(diag.code == 0);
    CHECK(json::parse(diag.out)["a"].size() == 1);

    const json a = json::parse(cli({"lanczos", "--matrix", fixture("random_hermitian5.json")}).out);
    const json b = json::parse(cli({"lanczos", "--matrix", fixture("random_hermitian5.json"), "--method", "moments"}).out);
    REQUIRE(a["a"].size() == 5);
    REQUIRE(b["a"].size() == 5);
    for (int n = 0; n < 5; ++n) CHECK(std::abs(a["a"][n].get<double>() - b["a"][n].get<double>()) <= 1e-7);
    for (int n = 0; n < 4; ++n) CHECK(std::abs(a["b"][n].get<double>() - b["b"][n].get<double>()) <= 1e-7);

    CHECK(cli({"lanczos", "--matrix", fixture("su3_vconfig.json"), "--seed", fixture("seed_e0_4.json")}).code == 1);
    CHECK(cli({"lanczos", "--matrix", fixture("run_config.json")}).code == 1);
}

TEST_CASE("cli: the installed binary honours the exit code contract") {
    auto run = [](const std::string& args) {
        const std::string cmd = std::string("\"") + KRYLOV_TOOL + "\" " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(run("--output " + (scratch() / "bin").string() + " repro fig6a") == 0);
    CHECK(run("run --family h1") == 1);
    CHECK(run("run --family su11 --omega0 4 --omega 2 --g 2.1 --t-end 500") == 2);
}
