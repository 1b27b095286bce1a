#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "test_util.hpp"

using namespace nuexpr;
using namespace nuexpr::test;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "nuexpr_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    fs::path path = scratch_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

CliResult run_cli(const std::string& args) {
    fs::path err_path = scratch_dir() / "stderr.txt";
    std::string command =
        std::string(NUEXPR_CLI_PATH) + " " + args + " 2>" + err_path.string();
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    size_t got;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0)
        result.out.append(buffer, got);
    int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err_in(err_path);
    result.err.assign(std::istreambuf_iterator<char>(err_in),
                      std::istreambuf_iterator<char>());
    return result;
}

std::string quoted_data(const std::string& name) { return data_path(name); }

} // namespace

TEST_CASE("parse echoes the normal form") {
    std::string file = write_scratch("even.expr",
                                     "# comment line\n"
                                     "nu x.\n  [1](x, nu y. [0](y, x))\n");
    CliResult r = run_cli("parse -f dfa -a a,b " + file);
    CHECK(r.code == 0);
    CHECK(r.out == "nu v0. [1](v0, nu v1. [0](v1, v0))\n");
    CHECK(r.err.empty());
}

TEST_CASE("parse --flat and --closure") {
    std::string file = write_scratch("loop.expr", "nu v. [0](v, v)\n");
    CliResult flat = run_cli("parse -f dfa -a a,b --flat " + file);
    CHECK(flat.code == 0);
    CHECK(flat.out ==
          "nu v0. [0](v0, v0)\n"
          "v = [0](v, v)\n");
    CliResult closure = run_cli("parse -f dfa -a a,b --closure " + file);
    CHECK(closure.code == 0);
    CHECK(closure.out ==
          "nu v0. [0](v0, v0)\n"
          "nu v0. [0](v0, v0)\n"
          "[0](nu v0. [0](v0, v0), nu v1. [0](v1, v1))\n");
}

TEST_CASE("parse rejects inadmissible or malformed input") {
    std::string unguarded = write_scratch("unguarded.expr", "nu x. x\n");
    CliResult r1 = run_cli("parse -f lts " + unguarded);
    CHECK(r1.code == 2);
    CHECK(r1.err.find("unguarded") != std::string::npos);

    std::string bad_arity = write_scratch("arity.expr", "[2/3,1/3](nu v. [1](v))\n");
    CliResult r2 = run_cli("parse -f dist " + bad_arity);
    CHECK(r2.code == 2);
    CHECK(r2.err.find("expects 2 arguments") != std::string::npos);
    // diagnostics carry the file and position
    CHECK(r2.err.find("arity.expr:1:1") != std::string::npos);

    CliResult r3 = run_cli("parse -f lts " + scratch_dir().string() + "/missing.expr");
    CHECK(r3.code == 2);
    CHECK(r3.err.find("cannot open") != std::string::npos);

    std::string labelled = write_scratch("labelled.expr", "nu x. [a,c](x, x)\n");
    CliResult r4 = run_cli("parse -f lts --labels a,b " + labelled);
    CHECK(r4.code == 2);
    CHECK(r4.err.find("label 'c'") != std::string::npos);

    CliResult r5 = run_cli("parse -f lts -a a,b " + labelled);
    CHECK(r5.code == 2);
    CHECK(r5.err.find("--alphabet only applies") != std::string::npos);
}

TEST_CASE("eval prints the satisfying states in carrier order") {
    std::string expr = quoted_data("dfa_even_b.expr");
    std::string model = quoted_data("dfa_even_b.json");
    CliResult r = run_cli("eval " + expr + " " + model);
    CHECK(r.code == 0);
    CHECK(r.out == "x1\n");

    CliResult oracle = run_cli("eval --oracle " + expr + " " + model);
    CHECK(oracle.code == 0);
    CHECK(oracle.out == "x1\n");

    CliResult flat = run_cli("eval --flat " + expr + " " + model);
    CHECK(flat.code == 0);
    CHECK(flat.out ==
          "x1 = {x1}\n"
          "x2 = {x2}\n");

    std::string nowhere = write_scratch("nowhere.expr", "nu v. [0](v, v)\n");
    CliResult empty = run_cli("eval " + nowhere + " " + model);
    CHECK(empty.code == 0);
    CHECK(empty.out.empty());
}

TEST_CASE("synthesize reproduces the markov model") {
    std::string expr = quoted_data("markov_three_state.expr");
    CliResult r = run_cli("synthesize -f dist " + expr);
    CHECK(r.code == 0);
    CHECK(r.out == load_text("markov_three_state.json"));

    // writing to a file gives the same bytes, and runs are deterministic
    fs::path out_path = scratch_dir() / "markov_again.json";
    CliResult w = run_cli("synthesize -f dist -o " + out_path.string() + " " + expr);
    CHECK(w.code == 0);
    CHECK(w.out.empty());
    std::ifstream in(out_path);
    std::string written(std::istreambuf_iterator<char>(in),
                        std::istreambuf_iterator<char>{});
    CHECK(written == r.out);
    CliResult again = run_cli("synthesize -f dist " + expr);
    CHECK(again.out == r.out);
}

TEST_CASE("extract prints a characteristic expression") {
    std::string model = quoted_data("dfa_even_b.json");
    CliResult r = run_cli("extract " + model + " x1");
    CHECK(r.code == 0);
    CHECK(r.out == load_text("dfa_even_b.expr"));

    CliResult bad = run_cli("extract " + model + " q7");
    CHECK(bad.code == 2);
    CHECK(bad.err.find("unknown state 'q7'") != std::string::npos);
}

TEST_CASE("extract output feeds back into eval") {
    std::string model = quoted_data("lts_branching.json");
    fs::path expr_path = scratch_dir() / "from_y.expr";
    CliResult x = run_cli("extract -o " + expr_path.string() + " " + model + " y");
    REQUIRE(x.code == 0);
    CliResult r = run_cli("eval " + expr_path.string() + " " + model);
    CHECK(r.code == 0);
    CHECK(r.out == "y\n");
}

TEST_CASE("equiv three-way exit code") {
    std::string loop = write_scratch("loop_a.expr", "nu x. [a](x)\n");
    std::string unrolled = write_scratch("unrolled.expr", "nu x. [a]([a](x))\n");
    std::string branching = write_scratch("branching.expr", "nu x. [a,b](x, x)\n");

    CliResult same = run_cli("equiv -f lts " + loop + " " + unrolled);
    CHECK(same.code == 0);
    CHECK(same.out == "equivalent\n");

    CliResult same_oracle = run_cli("equiv -f lts --oracle " + loop + " " + unrolled);
    CHECK(same_oracle.code == 0);
    CHECK(same_oracle.out == "equivalent\n");

    CliResult differ = run_cli("equiv -f lts " + loop + " " + branching);
    CHECK(differ.code == 1);
    CHECK(differ.out == "inequivalent\n");

    CliResult differ_oracle = run_cli("equiv -f lts --oracle " + loop + " " + branching);
    CHECK(differ_oracle.code == 1);
    CHECK(differ_oracle.out == "inequivalent\n");

    CliResult broken = run_cli("equiv -f lts " + loop + " " +
                               scratch_dir().string() + "/missing.expr");
    CHECK(broken.code == 2);
    CHECK(broken.err.find("cannot open") != std::string::npos);
}
