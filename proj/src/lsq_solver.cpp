#include "wavesynth/lsq_solver.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <lapacke.h>

#include "wavesynth/error.hpp"
#include "wavesynth/plane_waves.hpp"

namespace wavesynth {

WaveSet propagative_set(int M) {
    if (M < 1) throw ConfigError("M", "propagative_set: M must be positive");
    WaveSet set;
    set.kind = WaveKind::Propagative;
    set.entries.reserve(static_cast<std::size_t>(M));
    const double lw = -0.5 * std::log(static_cast<double>(M));
    for (int m = 1; m <= M; ++m) {
        set.entries.push_back({CylinderPoint(2.0 * std::numbers::pi * m / M, 0.0), lw});
    }
    return set;
}

WaveSet evanescent_set(const DensityModel& model, const NodeSet& nodes) {
    WaveSet set;
    set.kind = WaveKind::Evanescent;
    const double log_m = std::log(static_cast<double>(nodes.nodes.size()));
    set.entries.reserve(nodes.nodes.size());
    for (const auto& y : nodes.nodes) {
        set.entries.push_back({y, 0.5 * (model.log_christoffel_mu(y.zeta) - log_m)});
    }
    return set;
}

cplx evaluate_member(double kappa, const WaveEntry& entry, const Point2& x) {
    return evanescent_wave(kappa, entry.y, x, entry.log_weight);
}

cplx evaluate_expansion(double kappa, const WaveSet& waves, std::span<const cplx> xi, const Point2& x) {
    cplx sum{0.0, 0.0};
    for (std::size_t l = 0; l < waves.size(); ++l) sum += xi[l] * evaluate_member(kappa, waves.entries[l], x);
    return sum;
}

Matrix assemble_matrix(double kappa, const WaveSet& waves, std::span<const Point2> boundary) {
    const auto S = static_cast<Eigen::Index>(boundary.size());
    const auto M = static_cast<Eigen::Index>(waves.size());
    Matrix a(S, M);
    for (Eigen::Index l = 0; l < M; ++l) {
        const auto& e = waves.entries[static_cast<std::size_t>(l)];
        for (Eigen::Index s = 0; s < S; ++s) {
            const cplx v = evaluate_member(kappa, e, boundary[static_cast<std::size_t>(s)]);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw NumericalError("assemble: non-finite matrix entry for wave " + std::to_string(l) +
                                     " (zeta=" + std::to_string(e.y.zeta) + " too large for the geometry)");
            }
            a(s, l) = v;
        }
    }
    return a;
}

void normalize_columns_sup(Matrix& matrix, WaveSet& waves) {
    for (Eigen::Index l = 0; l < matrix.cols(); ++l) {
        const double peak = matrix.col(l).cwiseAbs().maxCoeff();
        if (!(peak > 0.0)) continue;
        matrix.col(l) /= peak;
        waves.entries[static_cast<std::size_t>(l)].log_weight -= std::log(peak);
    }
}

int SvdFactorization::eps_rank(double eps) const {
    const double cut = eps * sigma_max();
    int r = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma[i] >= cut) ++r;
    }
    return r;
}

SvdFactorization svd(const Matrix& a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    SvdFactorization f;
    f.U.resize(m, k);
    f.sigma.resize(k);
    Matrix vh(k, n);
    Matrix work = a;
    auto* pa = reinterpret_cast<lapack_complex_double*>(work.data());
    auto* pu = reinterpret_cast<lapack_complex_double*>(f.U.data());
    auto* pvh = reinterpret_cast<lapack_complex_double*>(vh.data());
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, pa, m, f.sigma.data(), pu, m, pvh, k);
    if (info != 0) {
        work = a;
        std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, k - 1)));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, pa, m, f.sigma.data(), pu, m, pvh, k,
                              superb.data());
        if (info != 0) {
            throw NumericalError("SVD did not converge (LAPACK info=" + std::to_string(info) + ")");
        }
    }
    f.V = vh.adjoint();
    return f;
}

SolveReport solve_regularized(const Matrix& a, const SvdFactorization& f, const Vector& b, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("eps", "eps must lie in (0, 1]");
    SolveReport r;
    r.singular_values.assign(f.sigma.data(), f.sigma.data() + f.sigma.size());
    r.sigma_max = f.sigma_max();
    r.eps_rank = f.eps_rank(eps);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        r.xi = Vector::Zero(a.cols());
        return r;
    }
    // U^* b, then the kept part of Sigma^+, then V.
    Vector coeffs = f.U.adjoint() * b;
    const double cut = eps * r.sigma_max;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
        coeffs[i] = (f.sigma[i] >= cut && f.sigma[i] > 0.0) ? coeffs[i] / f.sigma[i] : cplx{0.0, 0.0};
    }
    r.xi = f.V * coeffs;
    r.residual = (a * r.xi - b).norm() / bnorm;
    r.coeff_norm = r.xi.norm();
    return r;
}

SolveReport solve_regularized(const CollocationSystem& system, double eps) {
    return solve_regularized(system.matrix, svd(system.matrix), system.rhs, eps);
}

std::pair<double, double> residual_and_norm(const SolveReport& report, const CollocationSystem& system) {
    const double bnorm = system.rhs.norm();
    const double res = bnorm == 0.0 ? 0.0 : (system.matrix * report.xi - system.rhs).norm() / bnorm;
    return {res, report.xi.norm()};
}

} // namespace wavesynth
