#include "wavesynth/modal_bases.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavesynth/error.hpp"
#include "wavesynth/quadrature.hpp"
#include "wavesynth/special_functions.hpp"

namespace wavesynth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// log of 2 pi [J_p^2 - J_{p-1} J_{p+1} + J'_p J_p / kappa], the squared
// B-norm of J_p(kappa r) e^{i p theta}.
double log_circular_norm_sq(const special::BesselColumn& col, int p, double kappa) {
    const double jp = col.value(p);
    double bracket;
    if (std::abs(jp) > 1e-140) {
        const double jm = col.value(p - 1);
        const double jn = col.value(p + 1);
        bracket = jp * jp - jm * jn + 0.5 * (jm - jn) * jp / kappa;
        if (!(bracket > 0.0)) {
            throw NumericalError("beta: non-positive norm bracket at p=" + std::to_string(p));
        }
        return std::log(kTwoPi) + std::log(bracket);
    }
    // Deep evanescent regime: factor J_p^2 out and work with neighbour ratios.
    const double lp = col.log_abs(p);
    const double rm = col.sign(p - 1) * col.sign(p) * std::exp(col.log_abs(p - 1) - lp);
    const double rn = col.sign(p + 1) * col.sign(p) * std::exp(col.log_abs(p + 1) - lp);
    bracket = 1.0 - rm * rn + 0.5 * (rm - rn) / kappa;
    if (!(bracket > 0.0) || !std::isfinite(lp)) {
        throw NumericalError("beta: Bessel evaluation broke down at p=" + std::to_string(p));
    }
    return std::log(kTwoPi) + 2.0 * lp + std::log(bracket);
}

} // namespace

CylinderPoint::CylinderPoint(double phi_, double zeta_) : phi(std::fmod(phi_, kTwoPi)), zeta(zeta_) {
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
}

cplx i_pow(int p) noexcept {
    switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

double log_half_line_moment(double kappa, int q, double rel_tol) {
    const double c = q + DiskContext::kWeightShift;
    // Exponent g(zeta) = 2 c zeta - 2 kappa sinh zeta; concave, peak at
    // cosh zeta* = c / kappa when c > kappa, else at the origin.
    const auto g = [&](double z) { return 2.0 * c * z - 2.0 * kappa * std::sinh(z); };
    const double peak = (c > kappa) ? std::acosh(c / kappa) : 0.0;
    const double g_peak = g(peak);
    // Beyond `end` the integrand is below e^{-80} of its maximum.
    double step = 1.0;
    while (g(peak + step) - g_peak > -80.0) step *= 2.0;
    double lo = peak;
    double hi = peak + step;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) - g_peak > -80.0) lo = mid;
        else hi = mid;
    }
    const auto integrand = [&](double z) { return std::exp(g(z) - g_peak); };
    double total = 0.0;
    if (peak > 0.0) total += quadrature::gauss_kronrod(integrand, 0.0, peak, rel_tol, 0.0).value;
    total += quadrature::gauss_kronrod(integrand, peak, hi, rel_tol, 0.0).value;
    return g_peak + std::log(total);
}

DiskContext::DiskContext(double kappa, int p_max) : kappa_(kappa), p_max_(p_max) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw DomainError("DiskContext: kappa must be positive, got " + std::to_string(kappa));
    }
    if (p_max < static_cast<int>(std::ceil(kappa))) {
        throw DomainError("DiskContext: p_max=" + std::to_string(p_max) + " must be at least ceil(kappa)");
    }
    if (p_max > special::kMaxBesselOrder) {
        throw DomainError("DiskContext: p_max=" + std::to_string(p_max) + " exceeds supported Bessel order");
    }
    const auto n = static_cast<std::size_t>(p_max) + 1;
    log_beta_.resize(n);
    log_alpha_.resize(n);
    const special::BesselColumn col(p_max + 1, kappa);
    for (int p = 0; p <= p_max; ++p) {
        log_beta_[p] = -0.5 * log_circular_norm_sq(col, p, kappa);
        const double log_norm_sq =
            std::log(kTwoPi) + log_add(log_half_line_moment(kappa, p), log_half_line_moment(kappa, -p));
        log_alpha_[p] = -0.5 * log_norm_sq;
        if (!std::isfinite(log_beta_[p]) || !std::isfinite(log_alpha_[p])) {
            throw NumericalError("DiskContext: non-finite normalization at p=" + std::to_string(p));
        }
    }
}

std::size_t DiskContext::slot(int p) const {
    const int a = p < 0 ? -p : p;
    if (a > p_max_) {
        throw DomainError("mode " + std::to_string(p) + " exceeds tabulated range p_max=" + std::to_string(p_max_));
    }
    return static_cast<std::size_t>(a);
}

double DiskContext::log_beta(int p) const { return log_beta_[slot(p)]; }
double DiskContext::log_alpha(int p) const { return log_alpha_[slot(p)]; }
double DiskContext::beta(int p) const { return std::exp(log_beta(p)); }
double DiskContext::alpha(int p) const { return std::exp(log_alpha(p)); }
double DiskContext::abs_tau(int p) const { return std::exp(-log_alpha(p) - log_beta(p)); }
cplx DiskContext::tau(int p) const { return i_pow(p) * abs_tau(p); }

double DiskContext::log_weight_sq(double zeta) const {
    const double a = std::abs(zeta);
    return -2.0 * kappa_ * std::sinh(a) + 2.0 * kWeightShift * a;
}

TauBounds tau_bounds(const DiskContext& ctx) {
    TauBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (int p = 0; p <= ctx.p_max(); ++p) {
        const double t = ctx.abs_tau(p);
        b.tau_minus = std::min(b.tau_minus, t);
        b.tau_plus = std::max(b.tau_plus, t);
    }
    return b;
}

cplx circular_wave(const DiskContext& ctx, int p, double r, double theta) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("circular_wave: radius must lie in [0, 1]");
    const int a = p < 0 ? -p : p;
    const special::BesselColumn col(a, ctx.kappa() * r);
    const int s = col.sign(p);
    if (s == 0) return {0.0, 0.0};
    const double mag = std::exp(ctx.log_beta(p) + col.log_abs(p));
    return std::polar(s * mag, p * theta);
}

ModalVector circular_waves(const DiskContext& ctx, int P, double r, double theta) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("circular_waves: radius must lie in [0, 1]");
    ModalVector out(-P, P);
    const special::BesselColumn col(P, ctx.kappa() * r);
    for (int p = -P; p <= P; ++p) {
        const int s = col.sign(p);
        if (s == 0) continue;
        out[p] = std::polar(s * std::exp(ctx.log_beta(p) + col.log_abs(p)), p * theta);
    }
    return out;
}

cplx herglotz_poly(const DiskContext& ctx, int p, const CylinderPoint& y) {
    if (p * y.zeta > 700.0) {
        throw NumericalError("herglotz_poly: p*zeta=" + std::to_string(p * y.zeta) +
                             " overflows; restrict the zeta range");
    }
    return std::polar(std::exp(ctx.log_alpha(p) + p * y.zeta), p * y.phi);
}

double log_kernel_diag_truncated(const DiskContext& ctx, int P, double zeta) {
    if (P > ctx.p_max()) throw DomainError("kernel diagonal: P exceeds context p_max");
    double peak = -std::numeric_limits<double>::infinity();
    for (int p = -P; p <= P; ++p) peak = std::max(peak, 2.0 * (ctx.log_alpha(p) + p * zeta));
    double sum = 0.0;
    for (int p = -P; p <= P; ++p) {
        const double e = 2.0 * (ctx.log_alpha(p) + p * zeta) - peak;
        if (e > -45.0) sum += std::exp(e);
    }
    return peak + std::log(sum);
}

double kernel_diag_truncated(const DiskContext& ctx, int P, const CylinderPoint& y) {
    const double v = std::exp(log_kernel_diag_truncated(ctx, P, y.zeta));
    if (!std::isfinite(v)) throw NumericalError("kernel diagonal overflows at zeta=" + std::to_string(y.zeta));
    return v;
}

} // namespace wavesynth
