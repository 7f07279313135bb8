#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavesynth/modal_bases.hpp"
#include "wavesynth/sampling.hpp"

namespace wavesynth {

enum class WaveKind { Propagative, Evanescent };

/// One member of an approximation set. The weight is stored as a logarithm
/// because sqrt(mu_N / M) underflows for strongly evanescent nodes while the
/// weighted wave itself stays moderate on the domain.
struct WaveEntry {
    CylinderPoint y;
    double log_weight = 0.0;

    double weight() const { return std::exp(log_weight); }
};

struct WaveSet {
    WaveKind kind = WaveKind::Propagative;
    std::vector<WaveEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
};

/// M propagative waves at angles 2 pi m / M, m = 1..M, each weighted M^{-1/2}.
WaveSet propagative_set(int M);

/// Evanescent waves at the given nodes, weighted sqrt(mu_N(y_m) / M) with M
/// the number of nodes.
WaveSet evanescent_set(const DensityModel& model, const NodeSet& nodes);

/// weight * wave evaluated at x.
cplx evaluate_member(double kappa, const WaveEntry& entry, const Point2& x);

/// sum_l xi_l weight_l wave_l(x)
cplx evaluate_expansion(double kappa, const WaveSet& waves, std::span<const cplx> xi, const Point2& x);

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct CollocationSystem {
    Matrix matrix;
    Vector rhs;
    std::vector<Point2> boundary_points;
};

/// A_{s,l} = weight_l wave_l(x_s). Throws NumericalError on non-finite entries.
Matrix assemble_matrix(double kappa, const WaveSet& waves, std::span<const Point2> boundary);

/// Rescales every column to unit max modulus over its rows, folding the
/// factor into the entry weights.
void normalize_columns_sup(Matrix& matrix, WaveSet& waves);

/// Thin SVD A = U diag(sigma) V^*, sigma descending.
struct SvdFactorization {
    Matrix U;
    Eigen::VectorXd sigma;
    Matrix V;

    double sigma_max() const { return sigma.size() ? sigma[0] : 0.0; }
    /// #{sigma_m >= eps sigma_max}
    int eps_rank(double eps) const;
};

/// LAPACK divide-and-conquer SVD with a QR-iteration fallback. Throws
/// NumericalError if neither converges.
SvdFactorization svd(const Matrix& a);

struct SolveReport {
    Vector xi;
    std::vector<double> singular_values;
    int eps_rank = 0;
    double sigma_max = 0.0;
    double residual = 0.0;
    double coeff_norm = 0.0;
};

/// xi = V (Sigma_eps^+ (U^* b)), evaluated right to left. Singular values
/// with sigma_m >= eps sigma_max are kept. b = 0 yields xi = 0, residual 0.
SolveReport solve_regularized(const Matrix& a, const SvdFactorization& f, const Vector& b, double eps);
SolveReport solve_regularized(const CollocationSystem& system, double eps);

/// Relative residual ||A xi - b|| / ||b|| (0 when b = 0) and ||xi||.
std::pair<double, double> residual_and_norm(const SolveReport& report, const CollocationSystem& system);

} // namespace wavesynth
