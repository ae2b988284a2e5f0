#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef SINKPOP_CLI_PATH
#error "SINKPOP_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_raw(const std::string& command) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() / "sinkpop_cli_tests";
    fs::create_directories(dir);
    fs::path out = dir / ("out" + std::to_string(counter));
    fs::path err = dir / ("err" + std::to_string(counter));
    ++counter;
    std::string cmd =
        command + " > " + out.string() + " 2> " + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

RunResult run_cli(const std::string& args) {
    return run_raw(std::string(SINKPOP_CLI_PATH) + " " + args);
}

fs::path write_file(const std::string& name, const std::string& body) {
    fs::path dir = fs::temp_directory_path() / "sinkpop_cli_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream f(p);
    f << body;
    return p;
}

} // namespace

TEST_CASE("generate emits a parseable edge list that round trips") {
    RunResult gen = run_cli("generate cycle:5");
    REQUIRE(gen.exit_code == 0);
    CHECK(gen.out.substr(0, 4) == "5 5\n");

    fs::path file = write_file("c5.txt", gen.out);
    RunResult again = run_cli("generate " + file.string());
    CHECK(again.exit_code == 0);
    CHECK(again.out == gen.out);
}

TEST_CASE("sample on the lollipop returns its unique SFO") {
    RunResult r = run_cli("sample lollipop:4 --seed 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "0 1\n1 2\n2 3\n3 3\n");
}

TEST_CASE("sample on a tree exits 2 and names the component") {
    fs::path k2 = write_file("k2.txt", "2 1\n0 1\n");
    RunResult r = run_cli("sample " + k2.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("tree") != std::string::npos);
    CHECK(r.err.find("{0 1}") != std::string::npos);
}

TEST_CASE("sample cycle:1 reports tau = 0 in the stats stream") {
    RunResult r = run_cli("sample cycle:1 --stats - --seed 3");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"tau\":0") != std::string::npos);
}

TEST_CASE("sampling output is byte-identical for equal seed and flags") {
    RunResult a = run_cli("sample cycle:8 --seed 99 --count 5 --stats -");
    RunResult b = run_cli("sample cycle:8 --seed 99 --count 5 --stats -");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("enumerate reports the census and honors --format") {
    RunResult r = run_cli("enumerate theta:3");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"sfo_count\":6") != std::string::npos);

    RunResult csv = run_cli("enumerate theta:3 --format csv");
    CHECK(csv.out == "sfo_count,6\n");
}

TEST_CASE("enumerate --trees counts directed spanning trees") {
    RunResult r = run_cli("enumerate cycle:4 --trees --bidirect --root 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"tree_count\":4") != std::string::npos);
}

TEST_CASE("sample --tree emits a spanning tree deterministically") {
    RunResult a = run_cli("sample cycle:4 --tree --bidirect --root 0 --seed 5");
    RunResult b = run_cli("sample cycle:4 --tree --bidirect --root 0 --seed 5");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    int lines = 0;
    for (char c : a.out)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}

TEST_CASE("unknown experiment exits 5") {
    RunResult r = run_cli("experiment nosuch");
    CHECK(r.exit_code == 5);
}

TEST_CASE("oversized graphs exit 4") {
    RunResult r = run_cli("verify theta:21 --samples 1000");
    CHECK(r.exit_code == 4);
    RunResult e = run_cli("enumerate theta:21");
    CHECK(e.exit_code == 4);
}

TEST_CASE("hitting the pop cap exits 3") {
    // seed 3 needs four pops on theta:2, so a cap of zero must trip
    RunResult r = run_cli("sample theta:2 --seed 3 --max-pops 0");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("pop cap") != std::string::npos);
}

TEST_CASE("SINKPOP_SEED supplies the default seed; the flag wins") {
    RunResult flagged = run_cli("sample cycle:6 --seed 99 --count 3");
    RunResult env = run_raw("env SINKPOP_SEED=99 " SINKPOP_CLI_PATH
                            " sample cycle:6 --count 3");
    CHECK(env.out == flagged.out);
    RunResult overridden = run_raw("env SINKPOP_SEED=1 " SINKPOP_CLI_PATH
                                   " sample cycle:6 --seed 99 --count 3");
    CHECK(overridden.out == flagged.out);
}

TEST_CASE("parse failures exit 1") {
    fs::path bad = write_file("bad.txt", "definitely not a graph\n");
    RunResult r = run_cli("sample " + bad.string());
    CHECK(r.exit_code == 1);
    RunResult unknown_flag = run_cli("sample cycle:3 --bogus-flag");
    CHECK(unknown_flag.exit_code == 1);
}

TEST_CASE("verify passes on a small healthy graph") {
    RunResult r = run_cli(
        "verify theta:3 --samples 4000 --diamond-runs 60 --mono-runs 40 "
        "--seed 11");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"verdict\":\"pass\"") != std::string::npos);
}

TEST_CASE("verify on cycle:4 reports the exact mean of 6 pops") {
    RunResult r = run_cli(
        "verify cycle:4 --samples 5000 --diamond-runs 50 --mono-runs 30 "
        "--seed 13");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"value\":6.0") != std::string::npos);
}

TEST_CASE("enumerate --exact emits the oracle report") {
    RunResult r = run_cli("enumerate theta:3 --exact");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"sfo_count\":6") != std::string::npos);
    CHECK(r.out.find("\"expected_tau\"") != std::string::npos);
    CHECK(r.out.find("\"per_vertex_q\"") != std::string::npos);
    CHECK(r.out.find("\"exactly_uniform\":true") != std::string::npos);
}

TEST_CASE("experiment conditional-cycle prints a pass report near 2j(n-j)") {
    RunResult r = run_cli(
        "experiment conditional-cycle --n 4 --j 2 --samples 4000 --seed 21");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"verdict\":\"pass\"") != std::string::npos);
    CHECK(r.out.find("\"value\":8.0") != std::string::npos);
}

TEST_CASE("experiment equality at n = 4 includes the exact comparison") {
    RunResult r =
        run_cli("experiment equality --n 4 --samples 4000 --seed 22");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"exact_entrywise_equal\":true") != std::string::npos);
}
