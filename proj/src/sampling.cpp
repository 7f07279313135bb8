#include "wavesynth/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wavesynth/error.hpp"
#include "wavesynth/quadrature.hpp"

namespace wavesynth {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Support cutoff: density below 1e-30 of its maximum.
const double kLogCutoff = std::log(1e-30);
} // namespace

std::string_view to_string(SamplingStrategy s) noexcept {
    switch (s) {
    case SamplingStrategy::Deterministic: return "deterministic";
    case SamplingStrategy::Sobol: return "sobol";
    case SamplingStrategy::Random: return "random";
    }
    return "unknown";
}

SamplingStrategy parse_strategy(std::string_view name) {
    if (name == "deterministic") return SamplingStrategy::Deterministic;
    if (name == "sobol") return SamplingStrategy::Sobol;
    if (name == "random") return SamplingStrategy::Random;
    throw ConfigError("strategy", "unknown sampling strategy '" + std::string(name) +
                                      "' (expected deterministic, sobol or random)");
}

// ---------------------------------------------------------------------------
// Sobol

const std::array<std::array<std::uint64_t, Sobol2D::kBits>, 2>& Sobol2D::directions() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, kBits>, 2> v{};
        // m_k for x + 1: m_k = 2 m_{k-1} xor m_{k-1}, m_1 = 1.
        std::uint64_t m = 1;
        for (int k = 0; k < kBits; ++k) {
            v[0][k] = std::uint64_t{1} << (kBits - 1 - k);
            if (k > 0) m = (m << 1) ^ m;
            v[1][k] = m << (kBits - 1 - k);
        }
        return v;
    }();
    return table;
}

std::array<double, 2> Sobol2D::point(std::uint64_t n) const {
    const auto& v = directions();
    const std::uint64_t gray = n ^ (n >> 1);
    std::uint64_t x0 = 0;
    std::uint64_t x1 = 0;
    for (int k = 0; k < kBits; ++k) {
        if ((gray >> k) & 1U) {
            x0 ^= v[0][k];
            x1 ^= v[1][k];
        }
    }
    const double scale = std::ldexp(1.0, -kBits);
    return {static_cast<double>(x0) * scale, static_cast<double>(x1) * scale};
}

// ---------------------------------------------------------------------------
// Random

double UniformStream::next() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * std::ldexp(1.0, -53);
}

double UniformStream::next_normal() {
    const double u1 = next();
    const double u2 = next();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// ---------------------------------------------------------------------------
// Density

DensityModel::DensityModel(std::shared_ptr<const DiskContext> ctx, int P) : ctx_(std::move(ctx)), P_(P) {
    if (!ctx_) throw DomainError("DensityModel: null context");
    if (P < 0 || P > ctx_->p_max()) {
        throw DomainError("DensityModel: truncation P=" + std::to_string(P) + " outside [0, p_max]");
    }
    quadrature::gauss_legendre(kPanelOrder, gl_nodes_.data(), gl_weights_.data());

    // Scan outwards tracking the maximum until the density has dropped far
    // below it, then bisect the last crossing of the cutoff level.
    constexpr double kScanStep = 0.01;
    double log_max = log_density(0.0);
    double z = 0.0;
    double last_above = 0.0;
    for (;;) {
        z += kScanStep;
        const double ld = log_density(z);
        log_max = std::max(log_max, ld);
        if (ld - log_max >= kLogCutoff) last_above = z;
        if (ld - log_max < kLogCutoff - 20.0) break;
        if (z > 50.0) throw NumericalError("DensityModel: density support does not terminate");
    }
    double lo = last_above;
    double hi = last_above + kScanStep;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_density(mid) - log_max >= kLogCutoff) lo = mid;
        else hi = mid;
    }
    zeta_max_ = hi;

    knots_.resize(kCells + 1);
    table_.resize(kCells + 1);
    const double h = 2.0 * zeta_max_ / kCells;
    for (int k = 0; k <= kCells; ++k) knots_[k] = -zeta_max_ + k * h;
    knots_[kCells / 2] = 0.0;
    table_[0] = 0.0;
    for (int k = 0; k < kCells; ++k) table_[k + 1] = table_[k] + cell_integral(knots_[k], knots_[k + 1]);
    total_mass_ = table_[kCells];
    for (auto& t : table_) t /= total_mass_;
    table_[kCells] = 1.0;
}

double DensityModel::cell_integral(double a, double b) const {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) s += gl_weights_[i] * density(c + r * gl_nodes_[i]);
    return kTwoPi * r * s;
}

double DensityModel::log_christoffel_mu(double zeta) const { return -log_kernel_diag_truncated(*ctx_, P_, zeta); }

double DensityModel::christoffel_mu(const CylinderPoint& y) const { return std::exp(log_christoffel_mu(y.zeta)); }

double DensityModel::log_density(double zeta) const {
    return ctx_->log_weight_sq(zeta) + log_kernel_diag_truncated(*ctx_, P_, zeta) - std::log(dimension());
}

double DensityModel::density(double zeta) const { return std::exp(log_density(zeta)); }

double DensityModel::cdf(double zeta) const {
    if (zeta <= -zeta_max_) return 0.0;
    if (zeta >= zeta_max_) return 1.0;
    const double h = 2.0 * zeta_max_ / kCells;
    int k = static_cast<int>(std::floor((zeta + zeta_max_) / h));
    k = std::clamp(k, 0, kCells - 1);
    if (zeta < knots_[k]) --k;
    return table_[k] + cell_integral(knots_[k], zeta) / total_mass_;
}

double DensityModel::cdf_inverse(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw DomainError("cdf_inverse: u must lie in the open interval (0, 1), got " + std::to_string(u));
    }
    const auto it = std::upper_bound(table_.begin(), table_.end(), u);
    int k = static_cast<int>(it - table_.begin()) - 1;
    k = std::clamp(k, 0, kCells - 1);
    double lo = knots_[k];
    double hi = knots_[k + 1];
    const double base = table_[k];
    // Safeguarded Newton inside the bracketing cell; falls back to bisection
    // whenever the Newton step leaves the bracket.
    const double span = table_[k + 1] - table_[k];
    double z = (span > 0.0) ? lo + (hi - lo) * (u - base) / span : 0.5 * (lo + hi);
    for (int iter = 0; iter < 60; ++iter) {
        const double f = base + cell_integral(knots_[k], z) / total_mass_ - u;
        if (std::abs(f) <= 1e-13) return z;
        if (f > 0.0) hi = z;
        else lo = z;
        const double slope = kTwoPi * density(z) / total_mass_;
        double next = (slope > 0.0) ? z - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) return next;
        z = next;
    }
    return z;
}

// ---------------------------------------------------------------------------
// Node sets

NodeSet sample_nodes(const DensityModel& model, int M, SamplingStrategy strategy, std::uint64_t seed) {
    if (M < 1) throw ConfigError("M", "sample_nodes: M must be at least 1, got " + std::to_string(M));
    NodeSet out;
    out.P = model.truncation();
    out.strategy = strategy;
    out.seed = seed;
    switch (strategy) {
    case SamplingStrategy::Deterministic: {
        const int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(M)) - 1e-12));
        std::vector<double> zetas(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) zetas[j] = model.cdf_inverse((j + 0.5) / k);
        out.nodes.reserve(static_cast<std::size_t>(k) * k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) out.nodes.emplace_back(kTwoPi * (i + 0.5) / k, zetas[j]);
        }
        break;
    }
    case SamplingStrategy::Sobol: {
        const Sobol2D sobol;
        out.nodes.reserve(static_cast<std::size_t>(M));
        for (int m = 1; m <= M; ++m) {
            const auto z = sobol.point(static_cast<std::uint64_t>(m));
            out.nodes.emplace_back(kTwoPi * z[0], model.cdf_inverse(z[1]));
        }
        break;
    }
    case SamplingStrategy::Random: {
        UniformStream rng(seed);
        out.nodes.reserve(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            const double zp = rng.next();
            const double zz = rng.next();
            out.nodes.emplace_back(kTwoPi * zp, model.cdf_inverse(zz));
        }
        break;
    }
    }
    return out;
}

} // namespace wavesynth
