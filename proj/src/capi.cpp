#include "wavesynth.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "wavesynth/error.hpp"
#include "wavesynth/experiment_config.hpp"
#include "wavesynth/lsq_solver.hpp"
#include "wavesynth/modal_bases.hpp"
#include "wavesynth/plane_waves.hpp"
#include "wavesynth/sampling.hpp"
#include "wavesynth/scenarios.hpp"
#include "wavesynth/special_functions.hpp"
#include "wavesynth/svg_plot.hpp"
#include "wavesynth/table.hpp"

using namespace wavesynth;

struct ws_context {
    std::shared_ptr<const DiskContext> impl;
};

struct ws_density {
    std::unique_ptr<DensityModel> impl;
};

struct ws_nodes {
    NodeSet impl;
};

struct ws_table {
    Table impl;
    std::string config_json;
    std::vector<std::vector<std::string>> text;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_parameter;

ws_status fail(ws_status code, const std::string& msg, const std::string& parameter = {}) {
    g_last_error = msg;
    g_last_parameter = parameter;
    return code;
}

template <class F>
ws_status guarded(F&& f) {
    g_last_error.clear();
    g_last_parameter.clear();
    try {
        return f();
    } catch (const ConfigError& e) {
        return fail(WS_ERR_CONFIG, e.what(), e.parameter());
    } catch (const DomainError& e) {
        return fail(WS_ERR_DOMAIN, e.what());
    } catch (const NumericalError& e) {
        return fail(WS_ERR_NUMERICAL, e.what());
    } catch (const IoError& e) {
        return fail(WS_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(WS_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(WS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(WS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(WS_ERR_INTERNAL, "unknown exception");
    }
}

ws_status null_handle(const char* what) { return fail(WS_ERR_INVALID_HANDLE, std::string("null ") + what); }

ws_complex to_c(cplx z) { return {z.real(), z.imag()}; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ws_table* wrap_table(Table t, std::string config_json) {
    auto h = std::make_unique<ws_table>();
    h->impl = std::move(t);
    h->config_json = std::move(config_json);
    h->text.reserve(h->impl.rows.size());
    for (const auto& row : h->impl.rows) {
        std::vector<std::string> r;
        r.reserve(row.size());
        for (const auto& c : row) r.push_back(format_cell(c));
        h->text.push_back(std::move(r));
    }
    return h.release();
}

bool in_table(const ws_table* t, size_t row, size_t col) {
    return row < t->impl.rows.size() && col < t->impl.columns.size();
}

} // namespace

extern "C" {

const char* ws_version(void) { return "1.0.0"; }

const char* ws_status_name(ws_status status) {
    switch (status) {
    case WS_OK: return "ok";
    case WS_ERR_DOMAIN: return "domain error";
    case WS_ERR_CONFIG: return "configuration error";
    case WS_ERR_NUMERICAL: return "numerical failure";
    case WS_ERR_IO: return "I/O error";
    case WS_ERR_INVALID_HANDLE: return "invalid handle";
    case WS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ws_last_error(void) { return g_last_error.c_str(); }
const char* ws_last_error_parameter(void) { return g_last_parameter.c_str(); }
void ws_string_free(char* s) { std::free(s); }

ws_status ws_bessel_j(int order, double x, double* out) {
    if (!out) return null_handle("output pointer");
    return guarded([&] {
        *out = special::bessel_j(order, x);
        return WS_OK;
    });
}

ws_status ws_bessel_y(int order, double x, double* out) {
    if (!out) return null_handle("output pointer");
    return guarded([&] {
        *out = special::bessel_y(order, x);
        return WS_OK;
    });
}

ws_status ws_hankel1_0(double x, ws_complex* out) {
    if (!out) return null_handle("output pointer");
    return guarded([&] {
        *out = to_c(special::hankel1_0(x));
        return WS_OK;
    });
}

ws_status ws_context_create(double kappa, int p_max, ws_context** out) {
    if (!out) return null_handle("output pointer");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<ws_context>();
        h->impl = std::make_shared<const DiskContext>(kappa, p_max);
        *out = h.release();
        return WS_OK;
    });
}

void ws_context_destroy(ws_context* ctx) { delete ctx; }

ws_status ws_context_log_beta(const ws_context* ctx, int p, double* out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    return guarded([&] {
        *out = ctx->impl->log_beta(p);
        return WS_OK;
    });
}

ws_status ws_context_log_alpha(const ws_context* ctx, int p, double* out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    return guarded([&] {
        *out = ctx->impl->log_alpha(p);
        return WS_OK;
    });
}

ws_status ws_context_tau(const ws_context* ctx, int p, ws_complex* out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    return guarded([&] {
        *out = to_c(ctx->impl->tau(p));
        return WS_OK;
    });
}

ws_status ws_context_tau_bounds(const ws_context* ctx, double* tau_minus, double* tau_plus) {
    if (!ctx || !tau_minus || !tau_plus) return null_handle("context or output pointer");
    return guarded([&] {
        const TauBounds b = tau_bounds(*ctx->impl);
        *tau_minus = b.tau_minus;
        *tau_plus = b.tau_plus;
        return WS_OK;
    });
}

ws_status ws_circular_wave(const ws_context* ctx, int p, double r, double theta, ws_complex* out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    return guarded([&] {
        *out = to_c(circular_wave(*ctx->impl, p, r, theta));
        return WS_OK;
    });
}

ws_status ws_herglotz_poly(const ws_context* ctx, int p, double phi, double zeta, ws_complex* out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    return guarded([&] {
        *out = to_c(herglotz_poly(*ctx->impl, p, CylinderPoint(phi, zeta)));
        return WS_OK;
    });
}

ws_status ws_evanescent_wave(double kappa, double phi, double zeta, double x, double y, ws_complex* out) {
    if (!out) return null_handle("output pointer");
    return guarded([&] {
        *out = to_c(evanescent_wave(kappa, CylinderPoint(phi, zeta), Point2{x, y}));
        return WS_OK;
    });
}

ws_status ws_density_create(const ws_context* ctx, int P, ws_density** out) {
    if (!ctx || !out) return null_handle("context or output pointer");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<ws_density>();
        h->impl = std::make_unique<DensityModel>(ctx->impl, P);
        *out = h.release();
        return WS_OK;
    });
}

void ws_density_destroy(ws_density* density) { delete density; }

ws_status ws_density_rho(const ws_density* d, double zeta, double* out) {
    if (!d || !out) return null_handle("density or output pointer");
    return guarded([&] {
        *out = d->impl->density(zeta);
        return WS_OK;
    });
}

ws_status ws_density_cdf(const ws_density* d, double zeta, double* out) {
    if (!d || !out) return null_handle("density or output pointer");
    return guarded([&] {
        *out = d->impl->cdf(zeta);
        return WS_OK;
    });
}

ws_status ws_density_cdf_inverse(const ws_density* d, double u, double* out) {
    if (!d || !out) return null_handle("density or output pointer");
    return guarded([&] {
        *out = d->impl->cdf_inverse(u);
        return WS_OK;
    });
}

ws_status ws_density_zeta_max(const ws_density* d, double* out) {
    if (!d || !out) return null_handle("density or output pointer");
    *out = d->impl->zeta_max();
    return WS_OK;
}

ws_status ws_nodes_sample(const ws_density* d, int M, const char* strategy, uint64_t seed, ws_nodes** out) {
    if (!d || !out || !strategy) return null_handle("density, strategy or output pointer");
    *out = nullptr;
    return guarded([&] {
        auto h = std::make_unique<ws_nodes>();
        h->impl = sample_nodes(*d->impl, M, parse_strategy(strategy), seed);
        *out = h.release();
        return WS_OK;
    });
}

void ws_nodes_destroy(ws_nodes* nodes) { delete nodes; }

ws_status ws_nodes_count(const ws_nodes* nodes, size_t* out) {
    if (!nodes || !out) return null_handle("nodes or output pointer");
    *out = nodes->impl.nodes.size();
    return WS_OK;
}

ws_status ws_nodes_get(const ws_nodes* nodes, size_t index, double* phi, double* zeta) {
    if (!nodes || !phi || !zeta) return null_handle("nodes or output pointer");
    if (index >= nodes->impl.nodes.size()) return fail(WS_ERR_DOMAIN, "node index out of range");
    *phi = nodes->impl.nodes[index].phi;
    *zeta = nodes->impl.nodes[index].zeta;
    return WS_OK;
}

ws_status ws_solve_regularized(size_t rows, size_t cols, const ws_complex* a, const ws_complex* b, double eps,
                               ws_complex* xi, double* residual, double* coeff_norm, int* eps_rank) {
    if (!a || !b || !xi) return null_handle("matrix, right-hand side or solution pointer");
    return guarded([&] {
        if (rows == 0 || cols == 0) throw ConfigError("M", "system dimensions must be positive");
        Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (size_t j = 0; j < cols; ++j) {
            for (size_t i = 0; i < rows; ++i) {
                const ws_complex& e = a[j * rows + i];
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(e.re, e.im);
            }
        }
        Vector rhs(static_cast<Eigen::Index>(rows));
        for (size_t i = 0; i < rows; ++i) rhs[static_cast<Eigen::Index>(i)] = cplx(b[i].re, b[i].im);
        const SolveReport rep = solve_regularized(m, svd(m), rhs, eps);
        for (size_t j = 0; j < cols; ++j) xi[j] = to_c(rep.xi[static_cast<Eigen::Index>(j)]);
        if (residual) *residual = rep.residual;
        if (coeff_norm) *coeff_norm = rep.xi.norm();
        if (eps_rank) *eps_rank = rep.eps_rank;
        return WS_OK;
    });
}

ws_status ws_experiment_resolve(const char* name, const char* config_json, char** resolved_json) {
    if (!name || !resolved_json) return null_handle("experiment name or output pointer");
    *resolved_json = nullptr;
    return guarded([&] {
        *resolved_json = dup_string(resolve_config(name, config_json ? config_json : "").to_json());
        return WS_OK;
    });
}

ws_status ws_experiment_randomized(const char* name, const char* config_json, int* out) {
    if (!name || !out) return null_handle("experiment name or output pointer");
    return guarded([&] {
        *out = resolve_config(name, config_json ? config_json : "").randomized() ? 1 : 0;
        return WS_OK;
    });
}

ws_status ws_experiment_run(const char* name, const char* config_json, ws_table** out) {
    if (!name || !out) return null_handle("experiment name or output pointer");
    *out = nullptr;
    return guarded([&] {
        const ExperimentConfig cfg = resolve_config(name, config_json ? config_json : "");
        Table t = run_experiment(cfg);
        *out = wrap_table(std::move(t), cfg.to_json());
        return WS_OK;
    });
}

ws_status ws_table_read_csv(const char* path, ws_table** out) {
    if (!path || !out) return null_handle("path or output pointer");
    *out = nullptr;
    return guarded([&] {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw IoError(std::string("cannot open ") + path + " for reading");
        *out = wrap_table(read_csv(f), "");
        return WS_OK;
    });
}

void ws_table_destroy(ws_table* table) { delete table; }

ws_status ws_table_rows(const ws_table* t, size_t* out) {
    if (!t || !out) return null_handle("table or output pointer");
    *out = t->impl.rows.size();
    return WS_OK;
}

ws_status ws_table_columns(const ws_table* t, size_t* out) {
    if (!t || !out) return null_handle("table or output pointer");
    *out = t->impl.columns.size();
    return WS_OK;
}

ws_status ws_table_column_name(const ws_table* t, size_t column, const char** out) {
    if (!t || !out) return null_handle("table or output pointer");
    if (column >= t->impl.columns.size()) return fail(WS_ERR_DOMAIN, "column index out of range");
    *out = t->impl.columns[column].c_str();
    return WS_OK;
}

ws_status ws_table_cell_text(const ws_table* t, size_t row, size_t column, const char** out) {
    if (!t || !out) return null_handle("table or output pointer");
    if (!in_table(t, row, column)) return fail(WS_ERR_DOMAIN, "cell index out of range");
    *out = t->text[row][column].c_str();
    return WS_OK;
}

ws_status ws_table_cell_double(const ws_table* t, size_t row, size_t column, double* out) {
    if (!t || !out) return null_handle("table or output pointer");
    if (!in_table(t, row, column)) return fail(WS_ERR_DOMAIN, "cell index out of range");
    return guarded([&] {
        *out = t->impl.number(row, t->impl.columns[column]);
        return WS_OK;
    });
}

ws_status ws_table_config_json(const ws_table* t, const char** out) {
    if (!t || !out) return null_handle("table or output pointer");
    *out = t->config_json.c_str();
    return WS_OK;
}

ws_status ws_table_write(const ws_table* t, const char* dir, const char* name) {
    if (!t || !dir || !name) return null_handle("table, directory or name");
    return guarded([&] {
        emit_report(t->impl, t->config_json, dir, name);
        return WS_OK;
    });
}

ws_status ws_plot_svg(const char* csv_path, const char* x_column, const char* y_columns, const char* group_column,
                      int log_y, const char* title, const char* svg_path) {
    if (!csv_path || !x_column || !y_columns || !svg_path) return null_handle("plot argument");
    return guarded([&] {
        std::ifstream in(csv_path, std::ios::binary);
        if (!in) throw IoError(std::string("cannot open ") + csv_path + " for reading");
        const Table table = read_csv(in);
        PlotSpec spec;
        spec.x_column = x_column;
        std::stringstream ys(y_columns);
        for (std::string y; std::getline(ys, y, ',');) {
            if (!y.empty()) spec.y_columns.push_back(y);
        }
        spec.group_column = group_column ? group_column : "";
        spec.log_y = log_y != 0;
        spec.title = title ? title : "";
        std::string svg;
        try {
            svg = render_svg(table, spec);
        } catch (const std::out_of_range& e) {
            throw ConfigError("column", e.what());
        }
        std::ofstream out(svg_path, std::ios::binary);
        if (!out) throw IoError(std::string("cannot open ") + svg_path + " for writing");
        out << svg;
        if (!out) throw IoError(std::string("write failed: ") + svg_path);
        return WS_OK;
    });
}

} // extern "C"
