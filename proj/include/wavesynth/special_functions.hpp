#pragma once

#include <complex>
#include <vector>

namespace wavesynth::special {

/// Largest |order| accepted by the Bessel routines.
inline constexpr int kMaxBesselOrder = 1024;

/// Largest column length accepted by BesselColumn (room for the J_{p+1}
/// neighbours needed at the top supported order).
inline constexpr int kMaxColumnOrder = kMaxBesselOrder + 8;

/// J_order(x) for integer order and x >= 0.
double bessel_j(int order, double x);

/// J'_order(x) = (J_{order-1}(x) - J_{order+1}(x)) / 2.
double bessel_j_derivative(int order, double x);

/// Y_order(x) for integer order and x > 0 (forward recurrence from Y_0, Y_1).
double bessel_y(int order, double x);

/// H_0^{(1)}(x) = J_0(x) + i Y_0(x), x > 0.
std::complex<double> hankel1_0(double x);

/// Whole-column evaluation of J_0 .. J_nmax at a fixed argument by Miller's
/// backward recurrence.
///
/// Each order is kept both as a double (which may underflow for large orders)
/// and as a log-magnitude with sign, so products such as beta_p J_p(kappa r)
/// can be formed without intermediate under/overflow. Negative orders are
/// served through J_{-p} = (-1)^p J_p.
class BesselColumn {
public:
    BesselColumn(int nmax, double x);

    int max_order() const noexcept { return nmax_; }
    double argument() const noexcept { return x_; }

    double value(int p) const;
    /// log|J_p(x)|; -inf when J_p(x) is exactly zero.
    double log_abs(int p) const;
    int sign(int p) const;
    /// (J_{p-1} - J_{p+1}) / 2.
    double derivative(int p) const;

private:
    int index(int p) const;
    int parity_sign(int p) const noexcept { return (p < 0 && (-p) % 2 == 1) ? -1 : 1; }

    int nmax_;
    double x_;
    // Orders 0 .. nmax+1 so that derivative() is defined up to nmax.
    std::vector<double> value_;
    std::vector<double> log_abs_;
    std::vector<signed char> sign_;
};

} // namespace wavesynth::special
