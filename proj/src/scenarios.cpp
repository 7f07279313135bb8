#include "wavesynth/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "wavesynth/error.hpp"
#include "wavesynth/plane_waves.hpp"
#include "wavesynth/sampling.hpp"
#include "wavesynth/special_functions.hpp"

namespace wavesynth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryTolerance = 1e-9;
// Decorrelates the surrogate coefficient stream from random node draws that
// share the same user seed.
constexpr std::uint64_t kCoefficientStreamSalt = 0x9E3779B97F4A7C15ULL;

Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
double norm(Point2 a) { return std::hypot(a.x, a.y); }
double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double segment_distance(Point2 x, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double t = std::clamp(((x.x - a.x) * ab.x + (x.y - a.y) * ab.y) / (ab.x * ab.x + ab.y * ab.y), 0.0, 1.0);
    return norm(x - (a + t * ab));
}

int ceil_int(double v) { return static_cast<int>(std::ceil(v - 1e-9)); }

/// b_p on the unit circle at theta = 0; b_p(1, theta) = c_p e^{i p theta}.
cplx unit_circle_factor(const DiskContext& ctx, int p) { return circular_wave(ctx, p, 1.0, 0.0); }

Vector disk_mode_rhs(cplx factor, int p, int S) {
    Vector b(S);
    for (int s = 0; s < S; ++s) b[s] = factor * std::polar(1.0, p * (kTwoPi * s / S));
    return b;
}

struct SolveSummary {
    double residual;
    double coeff_norm;
    int eps_rank;
};

SolveSummary summarize(const SolveReport& r) { return {r.residual, r.xi.norm(), r.eps_rank}; }

std::shared_ptr<const DiskContext> make_context(double kappa, int needed) {
    return std::make_shared<const DiskContext>(kappa, std::max(needed, ceil_int(kappa)));
}

double bulk_max_error(double kappa, const WaveSet& waves, const Vector& xi, std::span<const Point2> pts,
                      std::span<const cplx> exact, double* max_exact) {
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx approx = evaluate_expansion(kappa, waves, {xi.data(), static_cast<std::size_t>(xi.size())}, pts[i]);
        err = std::max(err, std::abs(approx - exact[i]));
        ref = std::max(ref, std::abs(exact[i]));
    }
    if (max_exact) *max_exact = ref;
    return err;
}

} // namespace

// ---------------------------------------------------------------------------
// Geometry

std::array<Point2, 3> Geometry::triangle_vertices() {
    return {Point2{1.0, 0.0}, Point2{-1.0, 0.0}, Point2{std::cos(5.0 * kPi / 8.0), std::sin(5.0 * kPi / 8.0)}};
}

double Geometry::perimeter() const {
    if (kind == GeometryKind::UnitDisk) return kTwoPi;
    const auto v = triangle_vertices();
    return norm(v[1] - v[0]) + norm(v[2] - v[1]) + norm(v[0] - v[2]);
}

std::vector<Point2> Geometry::boundary_points(int S) const {
    if (S < 1) throw ConfigError("S", "boundary sample count must be positive");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(S));
    if (kind == GeometryKind::UnitDisk) {
        for (int s = 0; s < S; ++s) pts.push_back(from_polar(1.0, kTwoPi * s / S));
        return pts;
    }
    const auto v = triangle_vertices();
    const std::array<double, 3> len = {norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])};
    const double L = len[0] + len[1] + len[2];
    for (int s = 0; s < S; ++s) {
        double t = L * s / S;
        int e = 0;
        while (e < 2 && t > len[e]) {
            t -= len[e];
            ++e;
        }
        const Point2 a = v[e];
        const Point2 b = v[(e + 1) % 3];
        pts.push_back(a + (t / len[e]) * (b - a));
    }
    return pts;
}

double Geometry::boundary_distance(const Point2& x) const {
    if (kind == GeometryKind::UnitDisk) return std::abs(norm(x) - 1.0);
    const auto v = triangle_vertices();
    return std::min({segment_distance(x, v[0], v[1]), segment_distance(x, v[1], v[2]), segment_distance(x, v[2], v[0])});
}

bool Geometry::contains(const Point2& x) const {
    if (kind == GeometryKind::UnitDisk) return norm(x) <= 1.0 + 1e-12;
    const auto v = triangle_vertices();
    // x is inside when it lies on the interior side of every edge; the
    // vertex order v1 -> v2 -> v3 is clockwise, so flip the sign to match.
    const double orientation = cross(v[1] - v[0], v[2] - v[0]) > 0.0 ? 1.0 : -1.0;
    for (int e = 0; e < 3; ++e) {
        const Point2 a = v[e];
        const Point2 b = v[(e + 1) % 3];
        if (orientation * cross(b - a, x - a) < -1e-12 * norm(b - a)) return false;
    }
    return true;
}

std::vector<Point2> Geometry::bulk_points() const {
    std::vector<Point2> pts;
    if (kind == GeometryKind::UnitDisk) {
        pts.reserve(100 * 256);
        for (int i = 1; i <= 100; ++i) {
            for (int j = 0; j < 256; ++j) pts.push_back(from_polar(i / 100.0, kTwoPi * j / 256.0));
        }
        return pts;
    }
    constexpr int n = 140;
    const auto v = triangle_vertices();
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            const double l1 = static_cast<double>(i) / n;
            const double l2 = static_cast<double>(j) / n;
            const double l3 = 1.0 - l1 - l2;
            pts.push_back(l1 * v[0] + l2 * v[1] + l3 * v[2]);
        }
    }
    return pts;
}

Point2 source_position(const std::string& name, double kappa) {
    const double lambda = kTwoPi / kappa;
    const auto v = Geometry::triangle_vertices();
    if (name == "edge") {
        // Edge v1 v2 lies on the x axis with the triangle above it.
        const Point2 mid = 0.5 * (v[0] + v[1]);
        return mid + lambda * Point2{0.0, -1.0};
    }
    if (name == "vertex") {
        const Point2 u1 = (1.0 / norm(v[0] - v[2])) * (v[0] - v[2]);
        const Point2 u2 = (1.0 / norm(v[1] - v[2])) * (v[1] - v[2]);
        const Point2 inward = u1 + u2;
        return v[2] - (lambda / norm(inward)) * inward;
    }
    throw ConfigError("sources", "unknown source position '" + name + "' (expected edge or vertex)");
}

// ---------------------------------------------------------------------------
// Targets

Target Target::circular_mode(int p) {
    Target t;
    t.kind = Kind::CircularMode;
    t.p = p;
    return t;
}

Target Target::random_surrogate(double kappa, int P, std::uint64_t seed) {
    if (P < 0) throw ConfigError("P", "surrogate truncation must be non-negative");
    Target t;
    t.kind = Kind::RandomSurrogate;
    t.p = P;
    t.coefficients = ModalVector(-P, P);
    UniformStream rng(seed ^ kCoefficientStreamSalt);
    for (int p = -P; p <= P; ++p) {
        const double re = rng.next_normal();
        const double im = rng.next_normal();
        const double decay = 1.0 / std::sqrt(std::max(1.0, std::abs(p) - kappa));
        t.coefficients[p] = cplx(re, im) * (decay / std::numbers::sqrt2);
    }
    return t;
}

Target Target::fundamental_solution(const Geometry& geometry, const Point2& s) {
    if (geometry.contains(s)) {
        throw DomainError("fundamental solution source (" + std::to_string(s.x) + ", " + std::to_string(s.y) +
                          ") must lie strictly outside the domain");
    }
    Target t;
    t.kind = Kind::FundamentalSolution;
    t.source = s;
    return t;
}

double Target::norm() const {
    switch (kind) {
    case Kind::CircularMode: return 1.0;
    case Kind::RandomSurrogate: {
        double s = 0.0;
        for (const auto& c : coefficients.values) s += std::norm(c);
        return std::sqrt(s);
    }
    case Kind::FundamentalSolution: break;
    }
    throw DomainError("Target::norm: the basis norm is only available for modal targets");
}

cplx target_value(const DiskContext& ctx, const Target& target, const Point2& x) {
    switch (target.kind) {
    case Target::Kind::CircularMode:
    case Target::Kind::RandomSurrogate: {
        double r = std::hypot(x.x, x.y);
        if (r > 1.0 && r <= 1.0 + kBoundaryTolerance) r = 1.0;
        const double theta = std::atan2(x.y, x.x);
        if (target.kind == Target::Kind::CircularMode) return circular_wave(ctx, target.p, r, theta);
        const int P = target.coefficients.p_max;
        const ModalVector b = circular_waves(ctx, P, r, theta);
        cplx sum{0.0, 0.0};
        for (int p = -P; p <= P; ++p) sum += target.coefficients[p] * b[p];
        return sum;
    }
    case Target::Kind::FundamentalSolution: {
        const double d = std::hypot(x.x - target.source.x, x.y - target.source.y);
        return cplx(0.0, 0.25) * special::hankel1_0(ctx.kappa() * d);
    }
    }
    throw DomainError("target_value: unknown target kind");
}

std::vector<cplx> target_values(const DiskContext& ctx, const Target& target, std::span<const Point2> xs) {
    std::vector<cplx> out(xs.size());
    if (target.kind == Target::Kind::CircularMode || target.kind == Target::Kind::RandomSurrogate) {
        // On the unit circle the modal factors can be reused for every angle.
        const bool on_circle = std::all_of(xs.begin(), xs.end(), [](const Point2& x) {
            return std::abs(std::hypot(x.x, x.y) - 1.0) <= kBoundaryTolerance;
        });
        if (on_circle) {
            const int lo = target.kind == Target::Kind::CircularMode ? target.p : target.coefficients.p_min;
            const int hi = target.kind == Target::Kind::CircularMode ? target.p : target.coefficients.p_max;
            std::vector<cplx> fac;
            for (int p = lo; p <= hi; ++p) {
                const cplx c = unit_circle_factor(ctx, p);
                fac.push_back(target.kind == Target::Kind::CircularMode ? c : c * target.coefficients[p]);
            }
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double theta = std::atan2(xs[i].y, xs[i].x);
                cplx sum{0.0, 0.0};
                for (int p = lo; p <= hi; ++p) sum += fac[static_cast<std::size_t>(p - lo)] * std::polar(1.0, p * theta);
                out[i] = sum;
            }
            return out;
        }
    }
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = target_value(ctx, target, xs[i]);
    return out;
}

cplx trace_eval(const DiskContext& ctx, const Target& target, const Geometry& geometry, const Point2& x) {
    if (geometry.boundary_distance(x) > kBoundaryTolerance) {
        throw DomainError("trace_eval: point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                          ") is not on the boundary");
    }
    return target_value(ctx, target, x);
}

CollocationSystem assemble(const DiskContext& ctx, const WaveSet& waves, const Geometry& geometry,
                           const Target& target, int S) {
    if (S < static_cast<int>(waves.size())) {
        throw ConfigError("S", "S=" + std::to_string(S) + " must be at least the number of waves (" +
                                   std::to_string(waves.size()) + ")");
    }
    CollocationSystem sys;
    sys.boundary_points = geometry.boundary_points(S);
    sys.matrix = assemble_matrix(ctx.kappa(), waves, sys.boundary_points);
    const auto values = target_values(ctx, target, sys.boundary_points);
    sys.rhs = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return sys;
}

// ---------------------------------------------------------------------------
// Parallel sweeps

int worker_count() {
    if (const char* env = std::getenv("WAVESYNTH_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 4096) {
            throw ConfigError("WAVESYNTH_THREADS", std::string("WAVESYNTH_THREADS must be a positive integer, got '") +
                                                       env + "'");
        }
        return static_cast<int>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(worker_count()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::mutex mu;
    std::size_t next = 0;
    auto work = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next >= n) return;
                i = next++;
            }
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// ---------------------------------------------------------------------------
// Experiments

Table run_density(const ExperimentConfig& cfg) {
    const DensityModel model(make_context(cfg.kappa, cfg.P), cfg.P);
    Table t({"zeta", "rho", "cdf"});
    const auto& z = model.knots();
    const auto& u = model.cdf_table();
    for (std::size_t k = 0; k < z.size(); ++k) t.add_row({z[k], model.density(z[k]), u[k]});
    return t;
}

Table run_sample(const ExperimentConfig& cfg) {
    const DensityModel model(make_context(cfg.kappa, cfg.P), cfg.P);
    const NodeSet nodes = sample_nodes(model, cfg.M, cfg.strategies.front(), cfg.seed);
    Table t({"m", "phi", "zeta"});
    for (std::size_t m = 0; m < nodes.nodes.size(); ++m) {
        t.add_row({static_cast<std::int64_t>(m + 1), nodes.nodes[m].phi, nodes.nodes[m].zeta});
    }
    return t;
}

Table run_tau_table(const ExperimentConfig& cfg) {
    Table t({"kappa", "p", "log_alpha", "log_beta", "abs_tau", "tau_minus", "tau_plus"});
    std::vector<Table> parts(cfg.kappas.size(), t);
    parallel_for(cfg.kappas.size(), [&](std::size_t i) {
        const double kappa = cfg.kappas[i];
        const DiskContext ctx(kappa, std::max(ceil_int(cfg.p_factor * kappa), ceil_int(kappa)));
        const TauBounds b = tau_bounds(ctx);
        for (int p = 0; p <= ctx.p_max(); ++p) {
            parts[i].add_row({kappa, static_cast<std::int64_t>(p), ctx.log_alpha(p), ctx.log_beta(p), ctx.abs_tau(p),
                              b.tau_minus, b.tau_plus});
        }
    });
    for (auto& part : parts) {
        for (auto& row : part.rows) t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_ppw_instability(const ExperimentConfig& cfg) {
    const int pmax_abs = std::max(std::abs(cfg.p_min), std::abs(cfg.p_max));
    const auto ctx = make_context(cfg.kappa, pmax_abs);
    const Geometry disk = Geometry::unit_disk();
    std::vector<cplx> factors;
    for (int p = cfg.p_min; p <= cfg.p_max; ++p) factors.push_back(unit_circle_factor(*ctx, p));

    Table t({"p", "M", "S", "eps", "residual", "coeff_norm", "eps_rank"});
    std::vector<std::vector<std::vector<Cell>>> parts(cfg.Ms.size());
    parallel_for(cfg.Ms.size(), [&](std::size_t i) {
        const int M = cfg.Ms[i];
        const WaveSet waves = propagative_set(M);
        const int S_base = std::max(cfg.samples_for(M), M);
        std::map<int, std::pair<Matrix, SvdFactorization>> by_S;
        for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
            const int S = std::max(S_base, 2 * std::abs(p));
            auto it = by_S.find(S);
            if (it == by_S.end()) {
                const auto pts = disk.boundary_points(S);
                Matrix a = assemble_matrix(ctx->kappa(), waves, pts);
                SvdFactorization f = svd(a);
                it = by_S.emplace(S, std::make_pair(std::move(a), std::move(f))).first;
            }
            const Vector b = disk_mode_rhs(factors[static_cast<std::size_t>(p - cfg.p_min)], p, S);
            const auto s = summarize(solve_regularized(it->second.first, it->second.second, b, cfg.eps));
            parts[i].push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(M), static_cast<std::int64_t>(S),
                                cfg.eps, s.residual, s.coeff_norm, static_cast<std::int64_t>(s.eps_rank)});
        }
    });
    for (auto& part : parts) {
        for (auto& row : part) t.add_row(std::move(row));
    }
    return t;
}

Table run_epw_stability(const ExperimentConfig& cfg) {
    const int pmax_abs = std::max({std::abs(cfg.p_min), std::abs(cfg.p_max), cfg.P});
    const auto ctx = make_context(cfg.kappa, pmax_abs);
    const DensityModel model(ctx, cfg.P);
    const Geometry disk = Geometry::unit_disk();
    std::vector<cplx> factors;
    for (int p = cfg.p_min; p <= cfg.p_max; ++p) factors.push_back(unit_circle_factor(*ctx, p));

    struct CellSpec {
        SamplingStrategy strategy;
        int M;
    };
    std::vector<CellSpec> cells;
    for (auto s : cfg.strategies) {
        for (int M : cfg.Ms) cells.push_back({s, M});
    }
    Table t({"p", "M", "S", "eps", "strategy", "P", "residual", "coeff_norm", "eps_rank"});
    std::vector<std::vector<std::vector<Cell>>> parts(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const NodeSet nodes = sample_nodes(model, cells[i].M, cells[i].strategy, cfg.seed);
        const WaveSet waves = evanescent_set(model, nodes);
        const int M = static_cast<int>(waves.size());
        const int S_base = std::max(cfg.samples_for(M), M);
        std::map<int, std::pair<Matrix, SvdFactorization>> by_S;
        for (int p = cfg.p_min; p <= cfg.p_max; ++p) {
            const int S = std::max(S_base, 2 * std::abs(p));
            auto it = by_S.find(S);
            if (it == by_S.end()) {
                Matrix a = assemble_matrix(ctx->kappa(), waves, disk.boundary_points(S));
                SvdFactorization f = svd(a);
                it = by_S.emplace(S, std::make_pair(std::move(a), std::move(f))).first;
            }
            const Vector b = disk_mode_rhs(factors[static_cast<std::size_t>(p - cfg.p_min)], p, S);
            const auto s = summarize(solve_regularized(it->second.first, it->second.second, b, cfg.eps));
            parts[i].push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(M), static_cast<std::int64_t>(S),
                                cfg.eps, std::string(to_string(cells[i].strategy)), static_cast<std::int64_t>(cfg.P),
                                s.residual, s.coeff_norm, static_cast<std::int64_t>(s.eps_rank)});
        }
    });
    for (auto& part : parts) {
        for (auto& row : part) t.add_row(std::move(row));
    }
    return t;
}

Table run_surrogate_convergence(const ExperimentConfig& cfg) {
    const int p_top = *std::max_element(cfg.Ps.begin(), cfg.Ps.end());
    const auto ctx = make_context(cfg.kappa, p_top);
    const Geometry disk = Geometry::unit_disk();

    std::map<int, std::unique_ptr<DensityModel>> models;
    std::map<int, Target> targets;
    for (int P : cfg.Ps) {
        if (!models.count(P)) {
            models.emplace(P, std::make_unique<DensityModel>(ctx, P));
            targets.emplace(P, Target::random_surrogate(cfg.kappa, P, cfg.seed));
        }
    }
    std::vector<Point2> bulk;
    if (cfg.bulk) bulk = disk.bulk_points();
    std::map<int, std::vector<cplx>> bulk_exact;
    if (cfg.bulk) {
        for (auto& [P, target] : targets) bulk_exact.emplace(P, target_values(*ctx, target, bulk));
    }

    struct CellSpec {
        int P;
        double ratio;
        SamplingStrategy strategy;
    };
    std::vector<CellSpec> cells;
    for (int P : cfg.Ps) {
        for (double q : cfg.ratios) {
            for (auto s : cfg.strategies) cells.push_back({P, q, s});
        }
    }
    std::vector<std::string> cols = {"P",   "N",        "M",          "S",         "ratio",    "strategy",
                                     "eps", "residual", "coeff_norm", "target_norm", "relative_coeff_norm", "eps_rank"};
    if (cfg.bulk) {
        cols.emplace_back("bulk_max_error");
        cols.emplace_back("bulk_relative_error");
    }
    Table t(cols);
    std::vector<std::vector<Cell>> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& c = cells[i];
        const int N = 2 * c.P + 1;
        const DensityModel& model = *models.at(c.P);
        const Target& target = targets.at(c.P);
        const NodeSet nodes = sample_nodes(model, ceil_int(c.ratio * N), c.strategy, cfg.seed);
        const WaveSet waves = evanescent_set(model, nodes);
        const int M = static_cast<int>(waves.size());
        const int S = std::max(cfg.samples_for(M), M);
        const CollocationSystem sys = assemble(*ctx, waves, disk, target, S);
        const SolveReport rep = solve_regularized(sys, cfg.eps);
        const double unorm = target.norm();
        std::vector<Cell> row = {static_cast<std::int64_t>(c.P),
                                 static_cast<std::int64_t>(N),
                                 static_cast<std::int64_t>(M),
                                 static_cast<std::int64_t>(S),
                                 c.ratio,
                                 std::string(to_string(c.strategy)),
                                 cfg.eps,
                                 rep.residual,
                                 rep.coeff_norm,
                                 unorm,
                                 rep.coeff_norm / unorm,
                                 static_cast<std::int64_t>(rep.eps_rank)};
        if (cfg.bulk) {
            double ref = 0.0;
            const double err = bulk_max_error(cfg.kappa, waves, rep.xi, bulk, bulk_exact.at(c.P), &ref);
            row.emplace_back(err);
            row.emplace_back(err / ref);
        }
        rows[i] = std::move(row);
    });
    for (auto& row : rows) t.add_row(std::move(row));
    return t;
}

Table run_quasi_optimality(const ExperimentConfig& cfg) {
    const int p_top = *std::max_element(cfg.Ps.begin(), cfg.Ps.end());
    const auto ctx = make_context(cfg.kappa, p_top);
    const Geometry disk = Geometry::unit_disk();
    std::vector<cplx> factors;
    for (int p = -p_top; p <= p_top; ++p) factors.push_back(unit_circle_factor(*ctx, p));

    struct CellSpec {
        int P;
        SamplingStrategy strategy;
    };
    std::vector<CellSpec> cells;
    for (int P : cfg.Ps) {
        for (auto s : cfg.strategies) cells.push_back({P, s});
    }
    Table t({"P", "N", "M_star", "ratio", "strategy", "sigma", "max_residual", "evaluations", "converged"});
    std::vector<std::vector<Cell>> rows(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& c = cells[i];
        const int N = 2 * c.P + 1;
        const DensityModel model(ctx, c.P);
        std::map<int, double> memo;
        // Largest residual over all modes |p| <= P for the set of size M.
        auto worst = [&](int M) {
            if (auto it = memo.find(M); it != memo.end()) return it->second;
            const NodeSet nodes = sample_nodes(model, M, c.strategy, cfg.seed);
            const WaveSet waves = evanescent_set(model, nodes);
            const int Mw = static_cast<int>(waves.size());
            const int S = std::max({cfg.samples_for(Mw), Mw, 2 * c.P});
            const Matrix a = assemble_matrix(ctx->kappa(), waves, disk.boundary_points(S));
            const SvdFactorization f = svd(a);
            double w = 0.0;
            for (int p = -c.P; p <= c.P; ++p) {
                const Vector b = disk_mode_rhs(factors[static_cast<std::size_t>(p + p_top)], p, S);
                w = std::max(w, solve_regularized(a, f, b, cfg.eps).residual);
            }
            memo.emplace(M, w);
            return w;
        };
        const int cap = static_cast<int>(std::floor(cfg.max_factor * N));
        int lo = 0;
        int hi = N;
        bool ok = worst(hi) <= cfg.sigma;
        while (!ok && hi < cap) {
            lo = hi;
            hi = std::min(2 * hi, cap);
            ok = worst(hi) <= cfg.sigma;
        }
        if (ok && lo > 0) {
            const int step = std::max(1, ceil_int(cfg.resolution * N));
            while (hi - lo > step) {
                const int mid = lo + (hi - lo) / 2;
                if (worst(mid) <= cfg.sigma) hi = mid;
                else lo = mid;
            }
        }
        rows[i] = {static_cast<std::int64_t>(c.P),
                   static_cast<std::int64_t>(N),
                   static_cast<std::int64_t>(ok ? hi : -1),
                   ok ? static_cast<double>(hi) / N : std::numeric_limits<double>::infinity(),
                   std::string(to_string(c.strategy)),
                   cfg.sigma,
                   memo.at(hi),
                   static_cast<std::int64_t>(memo.size()),
                   static_cast<std::int64_t>(ok ? 1 : 0)};
    });
    for (auto& row : rows) t.add_row(std::move(row));
    return t;
}

Table run_triangle(const ExperimentConfig& cfg) {
    const Geometry tri = Geometry::triangle();
    auto P_for = [&](int M) { return std::max(ceil_int(cfg.kappa), M / 4); };
    int p_top = 0;
    for (int M : cfg.Ms) p_top = std::max(p_top, P_for(M));
    const auto ctx = make_context(cfg.kappa, p_top);

    std::vector<Target> targets;
    for (const auto& s : cfg.sources) targets.push_back(Target::fundamental_solution(tri, source_position(s, cfg.kappa)));

    std::vector<Point2> bulk;
    std::vector<std::vector<cplx>> bulk_exact;
    if (cfg.bulk) {
        bulk = tri.bulk_points();
        for (const auto& tg : targets) bulk_exact.push_back(target_values(*ctx, tg, bulk));
    }

    struct CellSpec {
        int M;
        bool epw;
        SamplingStrategy strategy;
    };
    std::vector<CellSpec> cells;
    for (int M : cfg.Ms) {
        for (const auto& kind : cfg.kinds) {
            if (kind == "ppw") {
                cells.push_back({M, false, SamplingStrategy::Deterministic});
            } else {
                for (auto s : cfg.strategies) cells.push_back({M, true, s});
            }
        }
    }
    std::map<int, std::unique_ptr<DensityModel>> models;
    for (const auto& c : cells) {
        if (c.epw && !models.count(P_for(c.M))) {
            models.emplace(P_for(c.M), std::make_unique<DensityModel>(ctx, P_for(c.M)));
        }
    }

    std::vector<std::string> cols = {"source", "kind", "strategy", "M",        "P",
                                     "S",      "eps",  "residual", "coeff_norm", "eps_rank"};
    if (cfg.bulk) {
        cols.emplace_back("bulk_max_error");
        cols.emplace_back("bulk_relative_error");
    }
    Table t(cols);
    std::vector<std::vector<std::vector<Cell>>> parts(cells.size());
    parallel_for(cells.size(), [&](std::size_t i) {
        const auto& c = cells[i];
        WaveSet waves;
        int P = 0;
        if (c.epw) {
            P = P_for(c.M);
            const DensityModel& model = *models.at(P);
            waves = evanescent_set(model, sample_nodes(model, c.M, c.strategy, cfg.seed));
        } else {
            waves = propagative_set(c.M);
        }
        const int M = static_cast<int>(waves.size());
        const int S = std::max(cfg.samples_for(M), M);
        const auto pts = tri.boundary_points(S);
        Matrix a = assemble_matrix(cfg.kappa, waves, pts);
        if (c.epw) normalize_columns_sup(a, waves);
        const SvdFactorization f = svd(a);
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const auto vals = target_values(*ctx, targets[k], pts);
            const Vector b = Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
            const SolveReport rep = solve_regularized(a, f, b, cfg.eps);
            std::vector<Cell> row = {cfg.sources[k],
                                     std::string(c.epw ? "epw" : "ppw"),
                                     std::string(c.epw ? to_string(c.strategy) : "uniform"),
                                     static_cast<std::int64_t>(M),
                                     static_cast<std::int64_t>(P),
                                     static_cast<std::int64_t>(S),
                                     cfg.eps,
                                     rep.residual,
                                     rep.coeff_norm,
                                     static_cast<std::int64_t>(rep.eps_rank)};
            if (cfg.bulk) {
                double ref = 0.0;
                const double err = bulk_max_error(cfg.kappa, waves, rep.xi, bulk, bulk_exact[k], &ref);
                row.emplace_back(err);
                row.emplace_back(err / ref);
            }
            parts[i].push_back(std::move(row));
        }
    });
    // Rows grouped by source, then in sweep order.
    for (std::size_t k = 0; k < targets.size(); ++k) {
        for (auto& part : parts) t.add_row(std::move(part[k]));
    }
    return t;
}

Table run_experiment(const ExperimentConfig& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "density") return run_density(cfg);
    if (e == "sample") return run_sample(cfg);
    if (e == "tau-table") return run_tau_table(cfg);
    if (e == "ppw-instability") return run_ppw_instability(cfg);
    if (e == "epw-stability") return run_epw_stability(cfg);
    if (e == "surrogate") return run_surrogate_convergence(cfg);
    if (e == "quasi-opt") return run_quasi_optimality(cfg);
    if (e == "triangle") return run_triangle(cfg);
    throw ConfigError("experiment", "unknown experiment '" + e + "'");
}

} // namespace wavesynth
