#include "wavesynth/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavesynth/error.hpp"

namespace wavesynth::special {

namespace {

constexpr double kRescale = 1e250;
const double kLogRescale = std::log(kRescale);
constexpr double kEulerGamma = 0.57721566490153286061;
// Above this argument Y_0, Y_1 come from the Hankel asymptotic expansion.
constexpr double kAsymptoticThreshold = 25.0;

void check_order(int order) {
    if (order > kMaxBesselOrder || order < -kMaxBesselOrder) {
        throw DomainError("Bessel order " + std::to_string(order) + " outside supported range |order| <= " +
                          std::to_string(kMaxBesselOrder));
    }
}

void check_argument(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError("Bessel argument must be finite and non-negative, got " + std::to_string(x));
    }
}

int miller_start(int nmax, double x) {
    const double m = std::max(static_cast<double>(nmax), std::ceil(x));
    return static_cast<int>(m + 20.0 + std::sqrt(60.0 * m)) + 2;
}

// Ascending series, used for small arguments and low orders where it
// converges in a handful of terms without cancellation.
double ascending_series(int p, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= p; ++k) term *= half / k;
    const double q = -half * half;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + p));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Hankel large-argument expansion for integer nu (DLMF 10.17.3-4).
void asymptotic_jy(int nu, double x, double& j, double& y) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double mag = std::abs(term);
        if (mag > prev) break; // divergent tail
        prev = mag;
        // a_k / x^k with alternating signs for P (even k) and Q (odd k)
        switch (k % 4) {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        case 0: p += term; break;
        }
        if (mag < 1e-18) break;
    }
    // omega = x - nu pi/2 - pi/4; expand the phase shift exactly.
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double root_half = std::numbers::sqrt2 / 2.0;
    double cw = root_half * (c + s);
    double sw = root_half * (s - c);
    switch (((nu % 4) + 4) % 4) {
    case 1: { double t = cw; cw = sw; sw = -t; break; }
    case 2: cw = -cw; sw = -sw; break;
    case 3: { double t = cw; cw = -sw; sw = t; break; }
    default: break;
    }
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    j = amp * (p * cw - q * sw);
    y = amp * (p * sw + q * cw);
}

// Neumann series for Y_0 and Y_1 over a Miller column.
void neumann_y01(double x, double& y0, double& y1) {
    const int nmax = miller_start(0, x);
    const BesselColumn col(nmax, x);
    const double lg = std::log(0.5 * x) + kEulerGamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= nmax; ++k) {
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        s0 += sgn * col.value(2 * k) / k;
        s1 += sgn * (col.value(2 * k - 1) - col.value(2 * k + 1)) / k;
    }
    y0 = (2.0 / std::numbers::pi) * (lg * col.value(0) - 2.0 * s0);
    y1 = (2.0 / std::numbers::pi) * (lg * col.value(1) - col.value(0) / x + s1);
}

} // namespace

BesselColumn::BesselColumn(int nmax, double x) : nmax_(nmax), x_(x) {
    if (nmax < 0 || nmax > kMaxColumnOrder) {
        throw DomainError("BesselColumn: maximal order " + std::to_string(nmax) + " outside [0, " +
                          std::to_string(kMaxColumnOrder) + "]");
    }
    check_argument(x);
    const std::size_t len = static_cast<std::size_t>(nmax) + 2;
    value_.assign(len, 0.0);
    log_abs_.assign(len, -std::numeric_limits<double>::infinity());
    sign_.assign(len, 0);
    if (x == 0.0) {
        value_[0] = 1.0;
        log_abs_[0] = 0.0;
        sign_[0] = 1;
        return;
    }

    const int top = static_cast<int>(len) - 1;
    const int start = miller_start(top, x);
    std::vector<double> raw(len, 0.0);
    std::vector<int> shift(len, 0);
    int cur_shift = 0;
    double next = 0.0; // j_{k+1}
    double cur = 1e-30; // j_k, k = start
    double norm = 0.0;  // J_0 + 2 sum J_{2k}, in units of the running shift
    for (int k = start; k >= 0; --k) {
        if (k <= top) {
            raw[k] = cur;
            shift[k] = cur_shift;
        }
        if (k % 2 == 0) norm += (k == 0 ? 1.0 : 2.0) * cur;
        if (k == 0) break;
        const double prev = (2.0 * k / x) * cur - next;
        next = cur;
        cur = prev;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            next /= kRescale;
            norm /= kRescale;
            ++cur_shift;
        }
    }
    const double log_norm = std::log(std::abs(norm));
    const double norm_sign = norm < 0 ? -1.0 : 1.0;
    for (int k = 0; k <= top; ++k) {
        const int d = cur_shift - shift[k];
        if (raw[k] == 0.0) continue;
        const int s = ((raw[k] < 0) != (norm_sign < 0)) ? -1 : 1;
        sign_[k] = static_cast<signed char>(s);
        if (d == 0) {
            value_[k] = raw[k] / norm;
            const double a = std::abs(value_[k]);
            log_abs_[k] = (a > 1e-290) ? std::log(a) : std::log(std::abs(raw[k])) - log_norm;
        } else {
            log_abs_[k] = std::log(std::abs(raw[k])) - d * kLogRescale - log_norm;
            value_[k] = s * std::exp(log_abs_[k]);
        }
    }
}

int BesselColumn::index(int p) const {
    const int a = p < 0 ? -p : p;
    if (a > nmax_ + 1) {
        throw DomainError("BesselColumn: order " + std::to_string(p) + " exceeds column size " +
                          std::to_string(nmax_));
    }
    return a;
}

double BesselColumn::value(int p) const { return parity_sign(p) * value_[index(p)]; }

double BesselColumn::log_abs(int p) const { return log_abs_[index(p)]; }

int BesselColumn::sign(int p) const { return parity_sign(p) * sign_[index(p)]; }

double BesselColumn::derivative(int p) const {
    if (p == 0) return -value(1);
    return 0.5 * (value(p - 1) - value(p + 1));
}

double bessel_j(int order, double x) {
    check_order(order);
    check_argument(x);
    const int a = order < 0 ? -order : order;
    const double parity = (order < 0 && a % 2 == 1) ? -1.0 : 1.0;
    if (x == 0.0) return a == 0 ? 1.0 : 0.0;
    if (x <= 1.0 && a <= 20) return parity * ascending_series(a, x);
    return parity * BesselColumn(a, x).value(a);
}

double bessel_j_derivative(int order, double x) {
    check_order(order);
    check_argument(x);
    if (order == kMaxBesselOrder || order == -kMaxBesselOrder) {
        throw DomainError("bessel_j_derivative: order at the edge of the supported range");
    }
    return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

double bessel_y(int order, double x) {
    check_order(order);
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("bessel_y requires a finite positive argument, got " + std::to_string(x));
    }
    const int a = order < 0 ? -order : order;
    const double parity = (order < 0 && a % 2 == 1) ? -1.0 : 1.0;
    double y0 = 0.0;
    double y1 = 0.0;
    if (x > kAsymptoticThreshold) {
        double j = 0.0;
        asymptotic_jy(0, x, j, y0);
        asymptotic_jy(1, x, j, y1);
    } else {
        neumann_y01(x, y0, y1);
    }
    if (a == 0) return y0;
    double prev = y0;
    double cur = y1;
    for (int n = 1; n < a; ++n) {
        const double nxt = (2.0 * n / x) * cur - prev;
        prev = cur;
        cur = nxt;
        if (!std::isfinite(cur)) return parity * cur;
    }
    return parity * cur;
}

std::complex<double> hankel1_0(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("hankel1_0 requires x > 0 (singularity at the source), got " + std::to_string(x));
    }
    return {bessel_j(0, x), bessel_y(0, x)};
}

} // namespace wavesynth::special
