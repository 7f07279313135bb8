#pragma once

#include <functional>

namespace wavesynth::quadrature {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Subdivides the
/// interval with the largest error estimate until the summed estimate drops
/// below max(abs_tol, rel_tol * |value|). Throws NumericalError with the
/// achieved estimate if `max_intervals` is exhausted.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                               double abs_tol = 0.0, int max_intervals = 2000);

/// n-point Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
void gauss_legendre(int n, double* nodes, double* weights);

} // namespace wavesynth::quadrature
