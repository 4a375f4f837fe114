#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "reflow/report.hpp"

namespace {

struct RunResult {
    int status = -1;
    std::string out;  // stdout and stderr, interleaved
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd;
    if (!env.empty()) cmd += env + " ";
    cmd += std::string("'") + REFLOW_CLI_PATH + "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int rc = pclose(p);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

bool has(const RunResult& r, const std::string& needle) {
    return r.out.find(needle) != std::string::npos;
}

const std::filesystem::path& work_dir() {
    static const std::filesystem::path d = [] {
        const auto p = std::filesystem::temp_directory_path() / "reflow_cli_tests";
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }();
    return d;
}

std::string write_config(const std::string& name, const std::string& text) {
    const auto p = work_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string ck_ini() {
    static const std::string p = write_config("ck.ini",
                                              "[pair]\n"
                                              "family = space_form\n"
                                              "n = 2\n"
                                              "k = 2\n"
                                              "[grid]\n"
                                              "counts = 33 33\n"
                                              "spacing = 0.05\n"
                                              "origin = 0 0\n"
                                              "[fixture]\n"
                                              "kind = compact_kink\n");
    return p;
}

} // namespace

TEST_CASE("pair subcommand prints the exact structural summary") {
    const RunResult r = run_cli("pair --family space_form --n 2 --k 2");
    CHECK(r.status == 0);
    CHECK(has(r, "family: space_form"));
    CHECK(has(r, "part dims: ++ 2  +- 4  -+ 2  -- 2"));
    CHECK(has(r, "bracket closure worst: 0\n"));
    CHECK(has(r, "lie triple worst: 0\n"));
    CHECK(has(r, "projector completeness worst: 0\n"));
    CHECK(has(r, "projector idempotence worst: 0\n"));
    CHECK(has(r, "rank: 2\n"));
    CHECK(has(r, "tangent rank: 2\n"));

    const RunResult l = run_cli("pair --family lagrangian --n 3");
    CHECK(l.status == 0);
    CHECK(has(l, "family: lagrangian"));
    CHECK(has(l, "rank: 3\n"));
}

TEST_CASE("argument handling: help is clean, misuse is exit 2") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("").status == 2);
    CHECK(run_cli("pair --not-a-flag").status == 2);
    CHECK(run_cli("pair --family martian").status == 2);
}

TEST_CASE("vacuum subcommand builds and verifies the constant solution") {
    const std::string vac = write_config("vac.ini",
                                         "[pair]\n"
                                         "family = space_form\n"
                                         "n = 2\n"
                                         "k = 1\n"
                                         "[grid]\n"
                                         "counts = 17 17\n"
                                         "spacing = 0.05\n");
    const RunResult r = run_cli("vacuum --config " + vac);
    CHECK(r.status == 0);
    CHECK(has(r, "rank: 2"));
    CHECK(has(r, "directions: 2"));
    CHECK(has(r, "[info] regularity"));
    CHECK(has(r, "verification passed"));
}

TEST_CASE("dimension above the rank exits with the obstruction code") {
    const std::string ob = write_config("ob.ini",
                                        "[pair]\n"
                                        "family = space_form\n"
                                        "n = 3\n"
                                        "k = 1\n"
                                        "[grid]\n"
                                        "counts = 9 9 9\n"
                                        "spacing = 0.05\n"
                                        "origin = 0 0 0\n");
    const RunResult r = run_cli("vacuum --config " + ob);
    CHECK(r.status == 3);
    CHECK(has(r, "obstructed: n=3 > rank=2"));
}

TEST_CASE("verification battery passes on the travelling-wave fixture") {
    const RunResult r = run_cli("verify --config " + ck_ini());
    CHECK(r.status == 0);
    CHECK(has(r, "[ ok ] degree"));
    CHECK(has(r, "[ ok ] mc"));
    CHECK(has(r, "[ ok ] regularity"));
    CHECK(has(r, "[ ok ] normal_flatness"));
    CHECK(has(r, "verification passed"));
}

TEST_CASE("planted defects fail loudly and name the right check") {
    const RunResult mc = run_cli("verify --config " + ck_ini() + " --defect mc");
    CHECK(mc.status == 4);
    CHECK(has(mc, "[FAIL] mc"));
    CHECK(has(mc, "verification failed: mc"));
    CHECK(has(mc, "[ ok ] normal_flatness"));
    CHECK_FALSE(has(mc, "FAIL] normal_flatness"));

    const RunResult nf = run_cli("verify --config " + ck_ini() + " --defect normal");
    CHECK(nf.status == 4);
    CHECK(has(nf, "FAIL] normal_flatness"));

    CHECK(run_cli("verify --config " + ck_ini() + " --defect bogus").status == 2);
}

TEST_CASE("tolerance overrides") {
    const RunResult tight =
        run_cli("verify --config " + ck_ini() + " --tol mc=1e-9");
    CHECK(tight.status == 4);
    CHECK(has(tight, "[FAIL] mc"));

    CHECK(run_cli("verify --config " + ck_ini() + " --tol badformat").status == 2);
    CHECK(run_cli("verify --config " + ck_ini() + " --tol mc=abc").status == 2);
}

TEST_CASE("configuration failure paths carry their own exit codes") {
    const RunResult missing = run_cli("verify --config /no/such/file.ini");
    CHECK(missing.status == 2);
    CHECK(has(missing, "cannot open config"));

    const RunResult fx =
        run_cli("verify --config " + ck_ini() + " --fixture nosuch");
    CHECK(fx.status == 2);
    CHECK(has(fx, "unknown fixture"));

    const std::string bad = write_config("filebad.ini",
                                         "[fixture]\n"
                                         "kind = file\n"
                                         "path = /no/such/file.rfc\n");
    const RunResult io = run_cli("verify --config " + bad);
    CHECK(io.status == 5);
    CHECK(has(io, "io error"));
}

TEST_CASE("generate writes containers that verify back from file") {
    const std::string gen = (work_dir() / "gen").string();
    const RunResult g = run_cli("generate --config " + ck_ini() + " --out " + gen +
                                " --lambda 1,2");
    CHECK(g.status == 0);
    CHECK(std::filesystem::exists(gen + "/connection.rfc"));
    CHECK(std::filesystem::exists(gen + "/frame_1.rff"));
    CHECK(std::filesystem::exists(gen + "/frame_2.rff"));

    const std::string file_ini = write_config("file.ini",
                                              "[fixture]\n"
                                              "kind = file\n"
                                              "path = " + gen +
                                                  "/connection.rfc\n");
    const RunResult v = run_cli("verify --config " + file_ini);
    CHECK(v.status == 0);
    CHECK(has(v, "verification passed"));

    CHECK(run_cli("generate --config " + ck_ini() + " --out /dev/null/x").status ==
          5);
}

TEST_CASE("scan output is byte-stable, threaded or not") {
    const std::string args = "scan --config " + ck_ini() + " --lambda 0.5,1,2,3";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    const RunResult c = run_cli(args, "REFLOW_THREADS=3");
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.substr(0, a.out.find('\n')) == reflow::csv_header());
    CHECK(run_cli(args, "REFLOW_THREADS=abc").status == 2);
}

TEST_CASE("remaining fixture families drive the battery cleanly") {
    const std::string lp = write_config("lagpolar.ini",
                                        "[pair]\n"
                                        "family = lagrangian\n"
                                        "n = 2\n"
                                        "[grid]\n"
                                        "counts = 33 33\n"
                                        "spacing = 0.05\n"
                                        "[fixture]\n"
                                        "kind = polar\n"
                                        "seed = 1\n");
    const RunResult l = run_cli("verify --config " + lp);
    CHECK(l.status == 0);
    CHECK(has(l, "[ ok ] mc_at"));
    CHECK(has(l, "[ ok ] lagrangian"));

    const std::string hyp = write_config("hyp.ini",
                                         "[pair]\n"
                                         "family = space_form\n"
                                         "n = 2\n"
                                         "k = 1\n"
                                         "hyperbolic = true\n"
                                         "[grid]\n"
                                         "counts = 33 33\n"
                                         "spacing = 0.05\n"
                                         "origin = 0.3 0.3\n"
                                         "[fixture]\n"
                                         "kind = hyperbolic_kink\n");
    const RunResult h = run_cli("verify --config " + hyp);
    CHECK(h.status == 0);
    CHECK(has(h, "verification passed"));
}
