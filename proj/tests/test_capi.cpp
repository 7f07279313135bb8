#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavesynth.h"

namespace fs = std::filesystem;

TEST_SUITE("capi") {

TEST_CASE("library metadata") {
    CHECK(std::strlen(ws_version()) > 0);
    CHECK(std::string(ws_status_name(WS_OK)) == "ok");
    CHECK(std::string(ws_status_name(WS_ERR_CONFIG)) == "configuration error");
    CHECK(std::string(ws_status_name(static_cast<ws_status>(99))) == "unknown status");
}

TEST_CASE("special functions and error reporting") {
    double v = 0.0;
    REQUIRE(ws_bessel_j(16, 16.0, &v) == WS_OK);
    CHECK(v == doctest::Approx(oracle::series_bessel_j(16, 16.0)).epsilon(1e-13));
    CHECK(std::string(ws_last_error()).empty());
    CHECK(ws_bessel_j(0, -1.0, &v) == WS_ERR_DOMAIN);
    CHECK(std::string(ws_last_error()).find("non-negative") != std::string::npos);
    REQUIRE(ws_bessel_y(0, 30.0, &v) == WS_OK);
    CHECK(v == doctest::Approx(oracle::boost_y(0, 30.0)).epsilon(1e-12));
    ws_complex h{};
    REQUIRE(ws_hankel1_0(2.0, &h) == WS_OK);
    CHECK(h.re == doctest::Approx(oracle::boost_j(0, 2.0)).epsilon(1e-13));
    CHECK(h.im == doctest::Approx(oracle::boost_y(0, 2.0)).epsilon(1e-12));
    CHECK(ws_hankel1_0(0.0, &h) == WS_ERR_DOMAIN);
    CHECK(ws_bessel_j(0, 1.0, nullptr) == WS_ERR_INVALID_HANDLE);
}

TEST_CASE("context lifecycle and constants") {
    ws_context* ctx = nullptr;
    CHECK(ws_context_create(-2.0, 10, &ctx) == WS_ERR_DOMAIN);
    CHECK(ctx == nullptr);
    REQUIRE(ws_context_create(16.0, 64, &ctx) == WS_OK);
    double lb = 0.0, la = 0.0;
    REQUIRE(ws_context_log_beta(ctx, 0, &lb) == WS_OK);
    REQUIRE(ws_context_log_alpha(ctx, 0, &la) == WS_OK);
    ws_complex tau{};
    double lb1 = 0.0, la1 = 0.0;
    REQUIRE(ws_context_tau(ctx, 1, &tau) == WS_OK);
    REQUIRE(ws_context_log_beta(ctx, 1, &lb1) == WS_OK);
    REQUIRE(ws_context_log_alpha(ctx, 1, &la1) == WS_OK);
    CHECK(tau.re == 0.0);
    CHECK(tau.im == doctest::Approx(std::exp(-(lb1 + la1))).epsilon(1e-14));
    double tm = 0.0, tp = 0.0;
    REQUIRE(ws_context_tau_bounds(ctx, &tm, &tp) == WS_OK);
    CHECK(tm > 0.0);
    CHECK(tp / tm < 100.0);
    ws_complex b{};
    REQUIRE(ws_circular_wave(ctx, 0, 0.0, 0.0, &b) == WS_OK);
    CHECK(b.re == doctest::Approx(std::exp(lb)).epsilon(1e-15));
    ws_complex a{};
    REQUIRE(ws_herglotz_poly(ctx, 0, 1.0, 2.0, &a) == WS_OK);
    CHECK(a.re == doctest::Approx(std::exp(la)).epsilon(1e-15));
    CHECK(ws_herglotz_poly(ctx, 64, 0.0, 20.0, &a) == WS_ERR_NUMERICAL);
    CHECK(ws_context_log_beta(ctx, 65, &lb) == WS_ERR_DOMAIN);
    CHECK(ws_context_log_beta(nullptr, 0, &lb) == WS_ERR_INVALID_HANDLE);
    ws_complex w{};
    REQUIRE(ws_evanescent_wave(16.0, 0.3, 0.0, 0.0, 0.0, &w) == WS_OK);
    CHECK(w.re == 1.0);
    ws_context_destroy(ctx);
    ws_context_destroy(nullptr);
}

TEST_CASE("density and node handles") {
    ws_context* ctx = nullptr;
    REQUIRE(ws_context_create(16.0, 64, &ctx) == WS_OK);
    ws_density* d = nullptr;
    CHECK(ws_density_create(ctx, 65, &d) == WS_ERR_DOMAIN);
    REQUIRE(ws_density_create(ctx, 64, &d) == WS_OK);
    double c = 0.0, z = 0.0, zm = 0.0, rho = 0.0;
    REQUIRE(ws_density_cdf(d, 0.0, &c) == WS_OK);
    CHECK(c == doctest::Approx(0.5).epsilon(1e-13));
    REQUIRE(ws_density_cdf_inverse(d, 0.9, &z) == WS_OK);
    REQUIRE(ws_density_cdf(d, z, &c) == WS_OK);
    CHECK(std::abs(c - 0.9) <= 1e-12);
    CHECK(ws_density_cdf_inverse(d, 1.0, &z) == WS_ERR_DOMAIN);
    REQUIRE(ws_density_zeta_max(d, &zm) == WS_OK);
    REQUIRE(ws_density_rho(d, 0.0, &rho) == WS_OK);
    CHECK(rho > 0.0);

    ws_nodes* n1 = nullptr;
    ws_nodes* n2 = nullptr;
    CHECK(ws_nodes_sample(d, 10, "halton", 0, &n1) == WS_ERR_CONFIG);
    CHECK(std::string(ws_last_error_parameter()) == "strategy");
    REQUIRE(ws_nodes_sample(d, 10, "random", 77, &n1) == WS_OK);
    REQUIRE(ws_nodes_sample(d, 10, "random", 77, &n2) == WS_OK);
    size_t count = 0;
    REQUIRE(ws_nodes_count(n1, &count) == WS_OK);
    CHECK(count == 10u);
    for (size_t i = 0; i < count; ++i) {
        double p1, z1, p2, z2;
        REQUIRE(ws_nodes_get(n1, i, &p1, &z1) == WS_OK);
        REQUIRE(ws_nodes_get(n2, i, &p2, &z2) == WS_OK);
        CHECK(p1 == p2);
        CHECK(z1 == z2);
        CHECK(std::abs(z1) <= zm);
    }
    double p, q;
    CHECK(ws_nodes_get(n1, 10, &p, &q) == WS_ERR_DOMAIN);
    ws_nodes_destroy(n1);
    ws_nodes_destroy(n2);
    ws_density_destroy(d);
    ws_context_destroy(ctx);
}

TEST_CASE("regularized solve through the C interface") {
    // Column-major 3x2 system with an exact solution.
    const std::vector<ws_complex> a = {{1, 0}, {0, 0}, {0, 0}, {0, 0}, {2, 0}, {0, 0}};
    const std::vector<ws_complex> b = {{1, 0}, {4, 0}, {0, 0}};
    std::vector<ws_complex> xi(2);
    double res = -1.0, nrm = -1.0;
    int rank = -1;
    REQUIRE(ws_solve_regularized(3, 2, a.data(), b.data(), 1e-14, xi.data(), &res, &nrm, &rank) == WS_OK);
    CHECK(xi[0].re == doctest::Approx(1.0));
    CHECK(xi[1].re == doctest::Approx(2.0));
    CHECK(res <= 1e-15);
    CHECK(nrm == doctest::Approx(std::sqrt(5.0)));
    CHECK(rank == 2);
    REQUIRE(ws_solve_regularized(3, 2, a.data(), b.data(), 0.6, xi.data(), nullptr, nullptr, &rank) == WS_OK);
    CHECK(rank == 1);
    CHECK(xi[0].re == 0.0);
    CHECK(ws_solve_regularized(3, 2, a.data(), b.data(), 0.0, xi.data(), nullptr, nullptr, nullptr) == WS_ERR_CONFIG);
    CHECK(std::string(ws_last_error_parameter()) == "eps");
    CHECK(ws_solve_regularized(3, 2, nullptr, b.data(), 0.1, xi.data(), nullptr, nullptr, nullptr) ==
          WS_ERR_INVALID_HANDLE);
}

TEST_CASE("experiments and tables") {
    char* resolved = nullptr;
    REQUIRE(ws_experiment_resolve("tau-table", R"({"kappas": [4]})", &resolved) == WS_OK);
    const std::string json = resolved;
    ws_string_free(resolved);
    CHECK(json.find("\"kappas\"") != std::string::npos);
    CHECK(ws_experiment_resolve("tau-table", R"({"kappas": [-4]})", &resolved) == WS_ERR_CONFIG);
    CHECK(std::string(ws_last_error_parameter()) == "kappas");
    int randomized = -1;
    REQUIRE(ws_experiment_randomized("surrogate", nullptr, &randomized) == WS_OK);
    CHECK(randomized == 1);
    REQUIRE(ws_experiment_randomized("density", "{}", &randomized) == WS_OK);
    CHECK(randomized == 0);

    ws_table* t = nullptr;
    REQUIRE(ws_experiment_run("tau-table", json.c_str(), &t) == WS_OK);
    size_t rows = 0, cols = 0;
    REQUIRE(ws_table_rows(t, &rows) == WS_OK);
    REQUIRE(ws_table_columns(t, &cols) == WS_OK);
    CHECK(rows == 65u);
    CHECK(cols == 7u);
    const char* name = nullptr;
    REQUIRE(ws_table_column_name(t, 1, &name) == WS_OK);
    CHECK(std::string(name) == "p");
    const char* cell = nullptr;
    REQUIRE(ws_table_cell_text(t, 3, 1, &cell) == WS_OK);
    CHECK(std::string(cell) == "3");
    double v = 0.0;
    REQUIRE(ws_table_cell_double(t, 3, 1, &v) == WS_OK);
    CHECK(v == 3.0);
    CHECK(ws_table_cell_text(t, rows, 0, &cell) == WS_ERR_DOMAIN);
    const char* cfg = nullptr;
    REQUIRE(ws_table_config_json(t, &cfg) == WS_OK);
    CHECK(std::string(cfg) == json);

    const fs::path dir = fs::temp_directory_path() / "wavesynth_capi";
    fs::remove_all(dir);
    fs::create_directories(dir);
    REQUIRE(ws_table_write(t, dir.c_str(), "tau") == WS_OK);
    ws_table* back = nullptr;
    REQUIRE(ws_table_read_csv((dir / "tau.csv").c_str(), &back) == WS_OK);
    size_t back_rows = 0;
    REQUIRE(ws_table_rows(back, &back_rows) == WS_OK);
    CHECK(back_rows == rows);
    for (size_t r = 0; r < rows; r += 9) {
        for (size_t c = 0; c < cols; ++c) {
            const char *x = nullptr, *y = nullptr;
            ws_table_cell_text(t, r, c, &x);
            ws_table_cell_text(back, r, c, &y);
            CHECK(std::string(x) == std::string(y));
        }
    }
    REQUIRE(ws_table_config_json(back, &cfg) == WS_OK);
    CHECK(std::string(cfg).empty());

    REQUIRE(ws_plot_svg((dir / "tau.csv").c_str(), "p", "abs_tau", "kappa", 1, "tau", (dir / "tau.svg").c_str()) ==
            WS_OK);
    CHECK(fs::file_size(dir / "tau.svg") > 100u);
    CHECK(ws_plot_svg((dir / "tau.csv").c_str(), "p", "nothing", "", 0, "", (dir / "x.svg").c_str()) != WS_OK);
    CHECK(ws_table_read_csv((dir / "missing.csv").c_str(), &back) == WS_ERR_IO);
    CHECK(ws_table_write(t, (dir / "tau.csv" / "sub").c_str(), "tau") == WS_ERR_IO);
    ws_table_destroy(back);
    ws_table_destroy(t);
    fs::remove_all(dir);

    CHECK(ws_experiment_run("unknown", "{}", &t) == WS_ERR_CONFIG);
    CHECK(ws_experiment_run("density", "{\"kappa\": ", &t) == WS_ERR_CONFIG);
}

}
