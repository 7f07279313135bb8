#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wavesynth/experiment_config.hpp"
#include "wavesynth/lsq_solver.hpp"
#include "wavesynth/modal_bases.hpp"
#include "wavesynth/table.hpp"

namespace wavesynth {

enum class GeometryKind { UnitDisk, Triangle };

/// The unit disk or the fixed triangle inscribed in it with vertices
/// (1, 0), (-1, 0), (cos 5pi/8, sin 5pi/8).
struct Geometry {
    GeometryKind kind = GeometryKind::UnitDisk;

    static Geometry unit_disk() { return {GeometryKind::UnitDisk}; }
    static Geometry triangle() { return {GeometryKind::Triangle}; }

    static std::array<Point2, 3> triangle_vertices();
    double perimeter() const;

    /// Disk: angles 2 pi s / S. Triangle: S points equispaced in arc length,
    /// starting at the first vertex and walking v1 -> v2 -> v3 -> v1.
    std::vector<Point2> boundary_points(int S) const;
    /// Distance from x to the boundary curve.
    double boundary_distance(const Point2& x) const;
    /// Closed-set membership (boundary included, 1e-12 slack).
    bool contains(const Point2& x) const;
    /// Disk: polar grid r = i/100 (i = 1..100) times 256 angles.
    /// Triangle: barycentric lattice (i, j, n-i-j)/n with n = 140.
    std::vector<Point2> bulk_points() const;
};

/// Source placements used by the triangle experiment, one wavelength
/// 2 pi / kappa from the boundary: below the midpoint of edge v1 v2, or
/// beyond v3 along the outward bisector.
Point2 source_position(const std::string& name, double kappa);

struct Target {
    enum class Kind { CircularMode, RandomSurrogate, FundamentalSolution };

    Kind kind = Kind::CircularMode;
    int p = 0;
    /// Surrogate coefficients u_p for |p| <= P.
    ModalVector coefficients;
    Point2 source;

    static Target circular_mode(int p);
    /// u_p = g_p max(1, |p| - kappa)^{-1/2} with g_p complex normal,
    /// E|g_p|^2 = 1, drawn in order p = -P..P from `seed`.
    static Target random_surrogate(double kappa, int P, std::uint64_t seed);
    /// i/4 H_0^(1)(kappa |x - s|); throws DomainError unless s lies strictly
    /// outside the closed geometry.
    static Target fundamental_solution(const Geometry& geometry, const Point2& s);

    /// ||u||_B: 1 for a circular mode, ||u_p||_2 for a surrogate.
    double norm() const;
};

/// u(x) anywhere in the closed geometry. Needs ctx.p_max() >= the target's modes.
cplx target_value(const DiskContext& ctx, const Target& target, const Point2& x);
std::vector<cplx> target_values(const DiskContext& ctx, const Target& target, std::span<const Point2> xs);

/// Dirichlet trace at a boundary point; throws DomainError if x is more
/// than 1e-9 away from the boundary.
cplx trace_eval(const DiskContext& ctx, const Target& target, const Geometry& geometry, const Point2& x);

/// Matrix and right-hand side at S boundary points of the geometry.
CollocationSystem assemble(const DiskContext& ctx, const WaveSet& waves, const Geometry& geometry,
                           const Target& target, int S);

/// Worker count for sweeps: WAVESYNTH_THREADS if set (positive integer),
/// otherwise the hardware concurrency. Throws ConfigError on a malformed value.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

Table run_density(const ExperimentConfig& cfg);
Table run_sample(const ExperimentConfig& cfg);
Table run_tau_table(const ExperimentConfig& cfg);
Table run_ppw_instability(const ExperimentConfig& cfg);
Table run_epw_stability(const ExperimentConfig& cfg);
Table run_surrogate_convergence(const ExperimentConfig& cfg);
Table run_quasi_optimality(const ExperimentConfig& cfg);
Table run_triangle(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
Table run_experiment(const ExperimentConfig& cfg);

} // namespace wavesynth
