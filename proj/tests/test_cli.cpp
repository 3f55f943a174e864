#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <sys/wait.h>

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(SDRC_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("subcommands chain end to end")
{
    testutil::TempDir dir("cli");
    const auto f = [&](const char* name) { return dir.file(name); };
    REQUIRE(run("--seed 2 synth --family T1 --n 300 --dims 8 --out " + f("d.csv")) == 0);
    REQUIRE(run("sharpen --in " + f("d.csv") + " --label-col label --out " + f("s.csv")) == 0);
    REQUIRE(run("project --in " + f("s.csv") + " --label-col label --out " + f("p.csv")) == 0);
    REQUIRE(run("cluster --method kmeans --k 5 --in " + f("p.csv") + " --label-col label --out " + f("l.csv")) == 0);
    REQUIRE(run("cluster --method dbscan --auto-params --in " + f("p.csv") + " --label-col label --out " +
                f("ld.csv")) == 0);
    REQUIRE(run("evaluate --pred " + f("l.csv") + " --truth " + f("d.csv") + " --label-col label --out " +
                f("r.json")) == 0);
    const auto j = nlohmann::json::parse(testutil::read_file(f("r.json")));
    CHECK(j["accuracy"] == 1.0);
    CHECK(j.contains("noise_policy"));
    REQUIRE(run("plot --in " + f("p.csv") + " --label-col label --labels " + f("l.csv") + " --out " + f("x.svg")) ==
            0);
    CHECK(testutil::read_file(f("x.svg")).find("<svg") != std::string::npos);
    REQUIRE(run("project --method pca --variance 0.9 --in " + f("d.csv") + " --label-col label --out " +
                f("pca.csv")) == 0);
}

TEST_CASE("pipeline and bench subcommands")
{
    testutil::TempDir dir("cli");
    testutil::write_file(dir.file("c.ini"), "[synth]\nfamily = T3\nn = 200\n\nmethods = kmeans,spectral\n");
    REQUIRE(run("--config " + dir.file("c.ini") + " --seed 5 pipeline --runs 2 --out-dir " + dir.file("o")) == 0);
    const auto m = nlohmann::json::parse(testutil::read_file(dir.file("o/manifest.json")));
    CHECK(m["seed"] == 5);
    CHECK(m["runs"] == 2);
    CHECK(m["synth"]["family"] == "T3");
    REQUIRE(run("bench --sizes 200,400 --repeats 3 --out " + dir.file("t.csv")) == 0);
    CHECK(testutil::read_file(dir.file("t.csv")).rfind("method,N,dims,median_seconds,repeats\n", 0) == 0);
}

TEST_CASE("exit codes")
{
    testutil::TempDir dir("cli");
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("--help") == 0);
    CHECK(run("synth --family T9 --out " + dir.file("x.csv")) == 2);
    CHECK(run("cluster --method kmeans --in " + dir.file("missing.csv") + " --out " + dir.file("l.csv")) == 3);
    testutil::write_file(dir.file("bad.csv"), "a,b\n1,x\n");
    CHECK(run("sharpen --in " + dir.file("bad.csv") + " --out " + dir.file("o.csv")) == 3);
    testutil::write_file(dir.file("huge.csv"), "a\n1e308\n-1e308\n");
    CHECK(run("sharpen --k 1 --in " + dir.file("huge.csv") + " --out " + dir.file("o.csv")) == 4);
    CHECK(run("pipeline --set methods=none") == 2);
    CHECK(run("pipeline --set bogus") == 2);
}
