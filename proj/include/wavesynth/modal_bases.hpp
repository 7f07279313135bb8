#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace wavesynth {

using cplx = std::complex<double>;

/// Point of the parameter cylinder [0, 2pi) x R; phi is wrapped on construction.
struct CylinderPoint {
    double phi = 0.0;
    double zeta = 0.0;

    CylinderPoint() = default;
    CylinderPoint(double phi_, double zeta_);
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 from_polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

/// Complex coefficients indexed by Fourier mode p in [p_min, p_max].
struct ModalVector {
    int p_min = 0;
    int p_max = -1;
    std::vector<cplx> values;

    ModalVector() = default;
    ModalVector(int lo, int hi) : p_min(lo), p_max(hi), values(static_cast<std::size_t>(hi - lo + 1)) {}

    std::size_t size() const noexcept { return values.size(); }
    cplx& operator[](int p) { return values[static_cast<std::size_t>(p - p_min)]; }
    const cplx& operator[](int p) const { return values[static_cast<std::size_t>(p - p_min)]; }
};

/// Wavenumber plus eagerly tabulated normalization constants of the circular
/// waves (beta_p) and Herglotz polynomials (alpha_p) for |p| <= p_max.
///
/// Both constants vary super-exponentially in |p|, so the tables keep their
/// logarithms; every product that appears downstream (beta_p J_p, alpha_p
/// e^{p zeta}, tau_p) is formed in the log domain. Immutable once built.
class DiskContext {
public:
    /// Weight exponent z in w_z(zeta) = exp(-kappa sinh|zeta| + z|zeta|).
    static constexpr double kWeightShift = 0.25;

    DiskContext(double kappa, int p_max);

    double kappa() const noexcept { return kappa_; }
    int p_max() const noexcept { return p_max_; }

    double log_beta(int p) const;
    double log_alpha(int p) const;
    double beta(int p) const;
    double alpha(int p) const;
    /// i^p / (alpha_p beta_p)
    cplx tau(int p) const;
    double abs_tau(int p) const;

    /// log of the squared weight w^2(zeta).
    double log_weight_sq(double zeta) const;

private:
    std::size_t slot(int p) const;

    double kappa_;
    int p_max_;
    std::vector<double> log_beta_;
    std::vector<double> log_alpha_;
};

/// i^p computed by branching on p mod 4.
cplx i_pow(int p) noexcept;

/// log of the one-sided moment I(q) = int_0^inf exp(2(q+z) zeta - 2 kappa sinh zeta) dzeta.
double log_half_line_moment(double kappa, int q, double rel_tol = 1e-13);

struct TauBounds {
    double tau_minus = 0.0;
    double tau_plus = 0.0;
};

TauBounds tau_bounds(const DiskContext& ctx);

/// b_p(r, theta) = beta_p J_p(kappa r) e^{i p theta}, 0 <= r <= 1.
cplx circular_wave(const DiskContext& ctx, int p, double r, double theta);

/// All b_p(r, theta) for |p| <= P at one point, sharing a single Bessel column.
ModalVector circular_waves(const DiskContext& ctx, int P, double r, double theta);

/// a_p(y) = alpha_p e^{p zeta} e^{i p phi}. Throws NumericalError when p zeta > 700.
cplx herglotz_poly(const DiskContext& ctx, int p, const CylinderPoint& y);

/// log sum_{|p|<=P} |a_p(y)|^2 (independent of phi).
double log_kernel_diag_truncated(const DiskContext& ctx, int P, double zeta);

/// sum_{|p|<=P} |a_p(y)|^2 = 1 / mu_N(y). Throws NumericalError on overflow.
double kernel_diag_truncated(const DiskContext& ctx, int P, const CylinderPoint& y);

} // namespace wavesynth
