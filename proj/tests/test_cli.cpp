// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "noma/cli.hpp"

using namespace noma;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("noma-cli-" + tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

int count_method(const std::vector<std::string>& rows, const std::string& method) {
    int n = 0;
    for (const auto& r : rows)
        if (r.find("," + method + ",") != std::string::npos) ++n;
    return n;
}

}  // namespace

TEST_CASE("grid parsing") {
    CHECK(parse_grid("0:5:30") == std::vector<double>{0, 5, 10, 15, 20, 25, 30});
    CHECK(parse_grid("1,2.5,4") == std::vector<double>{1, 2.5, 4});
    CHECK(parse_grid("7") == std::vector<double>{7});
    CHECK_THROWS(parse_grid("0:0:3"));
    CHECK_THROWS(parse_grid("a,b"));
}

TEST_CASE("sweep writes one row per user and Eb/N0 point for each method") {
    TempDir d("sweep");
    const auto r = cli({"sweep", "--n", "2", "--beta", "0.7,0.3", "--m", "1", "--ebn0", "0:5:30", "--methods",
                        "series,mc", "--trials", "1e5", "--out", d.path.string()});
    REQUIRE(r.code == kExitOk);
    const auto csv = slurp(d.path / "sweep.csv");
    CHECK(csv.rfind("# noma-ber sweep csv v1\n", 0) == 0);
    const auto rows = data_rows(csv);
    REQUIRE(!rows.empty());
    CHECK(rows[0] == "N,user,m,omega,ebn0_db,beta_vector,method,ber,ci_low,ci_high,trials,seed");
    CHECK(count_method(rows, "series") == 14);
    CHECK(count_method(rows, "mc") == 14);
    CHECK(fs::exists(d.path / "sweep.manifest.json"));
}

TEST_CASE("fixed gains select the conditional path") {
    TempDir d("fixed");
    const auto r = cli({"sweep", "--n", "3", "--beta", "0.8,0.15,0.05", "--fixed-gains", "0.7,1.0,1.4", "--ebn0",
                        "10", "--methods", "oracle", "--out", d.path.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(count_method(data_rows(slurp(d.path / "sweep.csv")), "oracle") == 3);
    // The series needs fading.
    const auto bad = cli({"sweep", "--n", "2", "--beta", "0.7,0.3", "--fixed-gains", "1,1", "--ebn0", "10",
                          "--methods", "series", "--out", d.path.string()});
    CHECK(bad.code == kExitUsage);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(cli({"optimize", "--objective", "max-min", "--n", "2", "--ebn0", "10"}).code == kExitUsage);
    CHECK(cli({"sweep", "--n", "2", "--beta", "0.7,0.2,0.1", "--ebn0", "10", "--methods", "series"}).code ==
          kExitUsage);
    CHECK(cli({"sweep", "--n", "2", "--beta", "0.7,0.3", "--m", "2", "--ebn0", "10", "--methods", "rayleigh"}).code ==
          kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
    CHECK(cli({"--version"}).code == kExitOk);
}

TEST_CASE("manifest rerun reproduces the csv bytes") {
    TempDir d("manifest");
    REQUIRE(cli({"sweep", "--n", "2", "--beta", "0.7,0.3", "--m", "0.5,2", "--ebn0", "0:10:30", "--methods",
                 "series,mc,oracle", "--trials", "5e4", "--oracle-strata", "256", "--seed", "11", "--out",
                 (d.path / "a").string()})
                .code == kExitOk);
    for (const char* shards : {"1", "8"}) {
        const auto b = d.path / (std::string("b") + shards);
        REQUIRE(cli({"sweep", "--manifest", (d.path / "a" / "sweep.manifest.json").string(), "--shards", shards,
                     "--out", b.string()})
                    .code == kExitOk);
        CHECK(slurp(b / "sweep.csv") == slurp(d.path / "a" / "sweep.csv"));
    }
    // A manifest cannot be combined with parameters that would change the output.
    CHECK(cli({"sweep", "--manifest", (d.path / "a" / "sweep.manifest.json").string(), "--seed", "3"}).code ==
          kExitUsage);
}

TEST_CASE("optimize writes one row per m and Eb/N0 point") {
    TempDir d("opt");
    const auto r = cli({"optimize", "--objective", "min-average", "--n", "2", "--m", "1,3", "--ebn0", "10,20",
                        "--out", d.path.string()});
    REQUIRE(r.code == kExitOk);
    const auto rows = data_rows(slurp(d.path / "optimize.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "objective,N,m,ebn0_db,beta_1,beta_2,ber_1,ber_2,residual,converged");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rfind("min-average,2,", 0) == 0);
}

TEST_CASE("validate honours the check filter") {
    const auto r = cli({"validate", "--only", "c1"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("n2-conditional-equivalence") != std::string::npos);
    CHECK(r.out.find("order-statistics") == std::string::npos);
    CHECK(cli({"validate", "--only", "no-such-check"}).code == kExitUsage);
}
