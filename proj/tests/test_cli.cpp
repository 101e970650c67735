#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(ROBCRED_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/robcred_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("structural fixture") {
    const auto r = run("structural --pair exp-gamma --alpha 4 --beta 2 --p 0 --q 0 --n 100");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("k           5\n") != std::string::npos);
    CHECK(r.out.find("Z           0.952381") != std::string::npos);
}

TEST_CASE("structural pareto collective mean") {
    // mu = alpha / (beta (t-1)) = 4 / (2 * 2) = 1
    const auto r = run("structural --pair pareto-gamma --t 3 --alpha 4 --beta 2 --p 0 --q 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("mu          1\n") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run("structural --pair exp-gamma --p 0.2 --q 0.9").exit_code == 1);
    CHECK(run("structural --pair weibull-gamma").exit_code == 1);
    CHECK(run("structural").exit_code == 1);
    CHECK(run("nosuchcommand").exit_code == 1);
    CHECK(run("simulate").exit_code == 1);  // neither config nor preset
}

TEST_CASE("empirical matches the hand oracle") {
    const std::string csv_path = temp_path("claims.csv");
    write_file(csv_path, "group,loss\na,1\na,2\na,3\nb,4\nb,5\nb,6\n");
    const std::string out_path = temp_path("premiums.csv");
    const auto r = run("empirical " + csv_path + " --p 0 --q 0 --out " + out_path);
    CHECK(r.exit_code == 0);
    const std::string out = read_file(out_path);
    // premiums 2.1111..., 4.8888...; Z = 3/3.24
    CHECK(out.find("2.1111111111111") != std::string::npos);
    CHECK(out.find("4.8888888888888") != std::string::npos);
    CHECK(out.find("0.92592592592592") != std::string::npos);
    // aligned table on stdout
    CHECK(r.out.find("total") != std::string::npos);
}

TEST_CASE("empirical data errors exit 2") {
    const std::string p1 = temp_path("bad1.csv");
    write_file(p1, "group,loss\na,1\na,oops\n");
    CHECK(run("empirical " + p1).exit_code == 2);

    const std::string p2 = temp_path("bad2.csv");
    write_file(p2, "grp,loss\na,1\n");
    CHECK(run("empirical " + p2).exit_code == 2);  // missing group column

    const std::string p3 = temp_path("bad3.csv");
    write_file(p3, "group,loss\na,1\na,2\na,3\n");
    CHECK(run("empirical " + p3).exit_code == 2);  // single group

    CHECK(run("empirical /tmp/robcred_no_such_file.csv").exit_code == 2);
}

TEST_CASE("empirical q sweep emits one premium column per q") {
    const std::string csv_path = temp_path("claims2.csv");
    std::ostringstream data;
    data << "group,loss\n";
    for (int i = 1; i <= 40; ++i) data << "a," << i << "\n";
    for (int i = 1; i <= 40; ++i) data << "b," << i * 3 << "\n";
    write_file(csv_path, data.str());
    const auto r = run("empirical " + csv_path + " --q 0,0.05,0.1 --method trimmed");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("q=0.05") != std::string::npos);
    CHECK(r.out.find("q=0.1") != std::string::npos);
}

TEST_CASE("simulate is deterministic and honors the config file") {
    const std::string cfg_path = temp_path("study.cfg");
    write_file(cfg_path,
               "[prior]\nfamily = gamma\nalpha = 4\nbeta = 2\n"
               "[central]\nfamily = exp\ncoef = 0.5\n"
               "[contaminant]\nfamily = pareto\ncoef = 1\nt = 3\n"
               "[grids]\nq = 0, 0.05\nepsilon = 0, 0.05\n"
               "[run]\nn = 30\nN = 40\nreps = 2\nseed = 7\n");
    const std::string o1 = temp_path("sim1"), o2 = temp_path("sim2");
    CHECK(run("simulate " + cfg_path + " --out " + o1).exit_code == 0);
    CHECK(run("simulate " + cfg_path + " --out " + o2).exit_code == 0);
    CHECK(read_file(o1 + ".csv") == read_file(o2 + ".csv"));
    CHECK(read_file(o1 + ".txt") == read_file(o2 + ".txt"));
    CHECK(read_file(o1 + ".csv").find("epsilon,q,method,parameter") == 0);
}

TEST_CASE("simulate rejects malformed configs with a line number") {
    const std::string cfg_path = temp_path("bad.cfg");
    write_file(cfg_path, "[prior]\nfamily = gamma\nalpha 4\n");
    const auto r = run("simulate " + cfg_path);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("line 3") != std::string::npos);
}

TEST_CASE("shipped example configs parse and run") {
    const std::string cfg = std::string(ROBCRED_CONFIG_DIR) + "/exp_pareto.cfg";
    const auto r = run("simulate " + cfg + " --scale desk --seed 42");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("eps=0.06") != std::string::npos);
}

TEST_CASE("variance and coherence commands") {
    const auto v = run("variance --model exp:theta=1 --q 0.1 --method winsorized");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("0.9") != std::string::npos);
    const auto t = run("variance --model exp:theta=1 --q 0.1 --method trimmed");
    CHECK(t.exit_code == 0);
    const auto c = run("coherence --p 0.05 --q 0.6 --trials 20 --seed 3");
    CHECK(c.exit_code == 0);
    CHECK(c.out.find("subadditivity counterexample") != std::string::npos);
    CHECK(run("variance --model exp:rate=1").exit_code == 1);
}
