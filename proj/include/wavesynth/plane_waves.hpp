#pragma once

#include "wavesynth/modal_bases.hpp"

namespace wavesynth {

struct PropagativeWave {
    double phi = 0.0;
};

struct EvanescentWave {
    CylinderPoint y;
};

/// exp(i kappa cosh(zeta) x.d(phi)) exp(-kappa sinh(zeta) x.d_perp(phi)), with
/// the modulus additionally scaled by exp(log_scale). The split form never
/// forms trig functions of a complex angle.
cplx evanescent_wave(double kappa, const CylinderPoint& y, const Point2& x, double log_scale = 0.0);

/// exp(i kappa d(phi).x)
cplx propagative_wave(double kappa, double phi, const Point2& x);

cplx epw_eval(const DiskContext& ctx, const EvanescentWave& wave, const Point2& x);
cplx ppw_eval(const DiskContext& ctx, const PropagativeWave& wave, const Point2& x);

/// Jacobi-Anger coefficients tau_p conj(a_p(y)) for |p| <= P, so that
/// phi_y = sum_p coeff_p b_p on the unit disk.
ModalVector epw_modal_coefficients(const DiskContext& ctx, const EvanescentWave& wave, int P);

/// Oracle tail length: indices past ceil(kappa e / 2) + 40 + ceil(6 kappa |zeta|)
/// contribute below double precision on the unit disk.
int jacobi_anger_tail(double kappa, double zeta);

} // namespace wavesynth
