#include "wavesynth/plane_waves.hpp"

#include <cmath>
#include <string>

#include "wavesynth/error.hpp"

namespace wavesynth {

cplx evanescent_wave(double kappa, const CylinderPoint& y, const Point2& x, double log_scale) {
    const double c = std::cos(y.phi);
    const double s = std::sin(y.phi);
    const double along = x.x * c + x.y * s;
    const double across = -x.x * s + x.y * c;
    const double modulus = std::exp(log_scale - kappa * std::sinh(y.zeta) * across);
    return std::polar(modulus, kappa * std::cosh(y.zeta) * along);
}

cplx propagative_wave(double kappa, double phi, const Point2& x) {
    return std::polar(1.0, kappa * (x.x * std::cos(phi) + x.y * std::sin(phi)));
}

cplx epw_eval(const DiskContext& ctx, const EvanescentWave& wave, const Point2& x) {
    return evanescent_wave(ctx.kappa(), wave.y, x);
}

cplx ppw_eval(const DiskContext& ctx, const PropagativeWave& wave, const Point2& x) {
    return propagative_wave(ctx.kappa(), wave.phi, x);
}

ModalVector epw_modal_coefficients(const DiskContext& ctx, const EvanescentWave& wave, int P) {
    if (P > ctx.p_max()) {
        throw DomainError("epw_modal_coefficients: P=" + std::to_string(P) + " exceeds context p_max");
    }
    ModalVector out(-P, P);
    for (int p = -P; p <= P; ++p) {
        if (p * wave.y.zeta > 700.0) {
            throw NumericalError("epw_modal_coefficients: p*zeta overflows at p=" + std::to_string(p));
        }
        // tau_p conj(a_p) = i^p e^{p zeta} e^{-i p phi} / beta_p
        out[p] = i_pow(p) * std::polar(std::exp(p * wave.y.zeta - ctx.log_beta(p)), -p * wave.y.phi);
    }
    return out;
}

int jacobi_anger_tail(double kappa, double zeta) {
    return static_cast<int>(std::ceil(kappa * std::exp(1.0) / 2.0)) + 40 +
           static_cast<int>(std::ceil(6.0 * kappa * std::abs(zeta)));
}

} // namespace wavesynth
