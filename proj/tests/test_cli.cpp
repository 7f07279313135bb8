#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wavesynth/table.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(WAVESYNTH_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path fresh(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("wavesynth_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

wavesynth::Table load(const fs::path& p) {
    std::ifstream in(p);
    return wavesynth::read_csv(in);
}

} // namespace

TEST_CASE("invalid values exit with status 2 and name the parameter") {
    const auto r = run("density --kappa -1 -o " + fresh("bad").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("kappa") != std::string::npos);
    CHECK(run("density --no-such-flag").code == 2);
    CHECK(run("frobnicate").code == 2);
    const auto eps = run("ppw-instability --eps 0 -o " + fresh("bad_eps").string());
    CHECK(eps.code == 2);
    CHECK(eps.output.find("eps") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and reproducible from the sidecar") {
    const auto a = fresh("rep_a"), b = fresh("rep_b"), c = fresh("rep_c");
    const std::string args = "epw-stability --P 16 --Ms 80,160 --strategy sobol,deterministic";
    REQUIRE(run(args + " -o " + a.string()).code == 0);
    REQUIRE(run(args + " -o " + b.string()).code == 0);
    const std::string csv = slurp(a / "epw-stability.csv");
    CHECK(csv == slurp(b / "epw-stability.csv"));
    CHECK(slurp(a / "epw-stability.config.json") == slurp(b / "epw-stability.config.json"));
    CHECK(csv.rfind("# config_sha256=", 0) == 0);

    REQUIRE(run("epw-stability --config " + (a / "epw-stability.config.json").string() + " -o " + c.string()).code ==
            0);
    CHECK(slurp(c / "epw-stability.csv") == csv);
    CHECK(slurp(c / "epw-stability.config.json") == slurp(a / "epw-stability.config.json"));
}

TEST_CASE("flags override a configuration file") {
    const auto a = fresh("override");
    {
        std::ofstream(a / "cfg.json") << R"({"kappas": [4, 8], "p_factor": 2})";
    }
    REQUIRE(run("tau-table --config " + (a / "cfg.json").string() + " --kappa 4 -o " + a.string()).code == 0);
    const auto t = load(a / "tau-table.csv");
    CHECK(t.rows.size() == 9u);
    CHECK(t.number(0, "kappa") == 4.0);
    CHECK(run("tau-table --config " + (a / "missing.json").string()).code != 0);
}

TEST_CASE("strict reproducibility requires a seed for randomized runs") {
    const auto d = fresh("strict");
    const auto r = run("surrogate --strict-repro --Ps 8 --ratios 2 -o " + d.string());
    CHECK(r.code == 2);
    CHECK(r.output.find("seed") != std::string::npos);
    CHECK(run("surrogate --strict-repro --seed 3 --Ps 8 --ratios 2 -o " + d.string()).code == 0);
    CHECK(run("epw-stability --strict-repro --P 8 --Ms 40 -o " + d.string()).code == 0);
    CHECK(run("epw-stability --strict-repro --strategy random --P 8 --Ms 40 -o " + d.string()).code == 2);
}

TEST_CASE("headline evanescent run") {
    const auto d = fresh("headline");
    REQUIRE(run("epw-stability --kappa 16 --P 64 --M 512 --strategy sobol -o " + d.string()).code == 0);
    const auto t = load(d / "epw-stability.csv");
    REQUIRE(t.rows.size() == 129u);
    for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(t.number(r, "residual") < 1e-10);
}

TEST_CASE("table schemas and plotting") {
    const auto d = fresh("schema");
    REQUIRE(run("ppw-instability --Ms 64 --p-max 4 -o " + d.string()).code == 0);
    std::istringstream lines(slurp(d / "ppw-instability.csv"));
    std::string first, header;
    std::getline(lines, first);
    std::getline(lines, header);
    CHECK(header == "p,M,S,eps,residual,coeff_norm,eps_rank");

    REQUIRE(run("density --kappa 16 --P 64 -o " + d.string()).code == 0);
    const auto dens = load(d / "density.csv");
    CHECK(dens.columns == std::vector<std::string>{"zeta", "rho", "cdf"});

    const auto plot = run("plot " + (d / "ppw-instability.csv").string() + " --x p --y residual,coeff_norm --logy --out " +
                          (d / "ppw.svg").string());
    CHECK(plot.code == 0);
    CHECK(slurp(d / "ppw.svg").rfind("<svg", 0) == 0);
    CHECK(run("plot " + (d / "ppw-instability.csv").string() + " --x p --y missing --out " + (d / "x.svg").string())
              .code != 0);
}
