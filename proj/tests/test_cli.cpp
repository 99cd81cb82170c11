#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "terp_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(TERP_CLI_PATH) + " " + args + " > " + (kWork / "stdout.txt").string() + " 2> " +
                            (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
    ~Workspace() { fs::remove_all(kWork); }
};

const std::string kQuick = "--families bm,fourier-exp --m-set 10,50 --restarts 4";

}  // namespace

TEST_CASE("simulate, cluster, evaluate and plot") {
    Workspace ws;
    const auto sim = kWork / "sim";
    REQUIRE(run("simulate --model 9 --sizes 10,10,10 --seed 3 --out " + sim.string()) == 0);
    CHECK(fs::exists(sim / "data.csv"));
    CHECK(fs::exists(sim / "truth.csv"));

    const auto out = kWork / "clu";
    REQUIRE(run("cluster " + (sim / "data.csv").string() + " --truth " + (sim / "truth.csv").string() +
                " --k 3 " + kQuick + " --out " + out.string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").find("rand") != std::string::npos);
    CHECK(fs::exists(out / "results.csv"));
    CHECK(fs::exists(out / "clusters_rep1.svg"));

    REQUIRE(run("evaluate " + (sim / "truth.csv").string() + " " + (sim / "truth.csv").string()) == 0);
    CHECK(slurp(kWork / "stdout.txt").find('1') != std::string::npos);

    REQUIRE(run("plot " + (sim / "data.csv").string() + " --labels " + (out / "labels_rep1.csv").string() + " --out " +
                (kWork / "p.svg").string()) == 0);
    CHECK(slurp(kWork / "p.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("long-format input for irregular and fragmented data") {
    Workspace ws;
    const auto sim = kWork / "sim";
    REQUIRE(run("simulate --model 8 --sizes 8,8,8 --regime fragmented --out " + sim.string()) == 0);
    CHECK(slurp(sim / "data.csv").rfind("curve_id,time,value", 0) == 0);
    CHECK(run("cluster " + (sim / "data.csv").string() + " --regime fragmented --k 3 " + kQuick + " --no-plot --out " +
              (kWork / "c").string()) == 0);
}

TEST_CASE("bench output is reproducible") {
    Workspace ws;
    const std::string args = "bench --model 2 --sizes 10,10 --reps 2 --seed 11 " + kQuick + " --no-plot --out ";
    REQUIRE(run(args + (kWork / "a").string()) == 0);
    REQUIRE(run(args + (kWork / "b").string() + " --threads 1") == 0);
    CHECK(slurp(kWork / "a" / "results.csv") == slurp(kWork / "b" / "results.csv"));
    CHECK(slurp(kWork / "a" / "summary.txt").find("mean_rand_index") != std::string::npos);
}

TEST_CASE("configuration file") {
    Workspace ws;
    std::ofstream(kWork / "run.ini") << "model=1\nsizes=[6,6]\nreps=1\nfamilies=[bm]\nm-set=[10]\n";
    CHECK(run("bench --config " + (kWork / "run.ini").string() + " --no-plot --out " + (kWork / "o").string()) == 0);
    CHECK(fs::exists(kWork / "o" / "results.csv"));
}

TEST_CASE("exit codes") {
    Workspace ws;
    CHECK(run("--help") == 0);
    CHECK(run("bench --model 1 --sizes 5,5 --out " + (kWork / "x").string() + " --m-set 50,10") == 2);
    CHECK(run("bench --model 12 --sizes 5,5 --out " + (kWork / "x").string()) == 2);
    CHECK(run("bench --model 1 --sizes 5,5 --families wiener --out " + (kWork / "x").string()) == 2);
    CHECK(run("cluster --out " + (kWork / "x").string()) == 2);
    CHECK(run("cluster " + (kWork / "missing.csv").string() + " --out " + (kWork / "x").string()) == 3);

    std::ofstream(kWork / "bad.csv") << "0,0.5,1\n1,2,oops\n";
    CHECK(run("cluster " + (kWork / "bad.csv").string() + " --out " + (kWork / "x").string()) == 3);
    CHECK(slurp(kWork / "stderr.txt").find("oops") != std::string::npos);

    std::ofstream flat(kWork / "flat.csv");
    flat << "0,0.5,1\n";
    for (int i = 0; i < 6; ++i) flat << "1,1,1\n";
    flat.close();
    CHECK(run("cluster " + (kWork / "flat.csv").string() + " --families bm --m-set 10 --no-plot --out " +
              (kWork / "y").string()) == 4);
}
