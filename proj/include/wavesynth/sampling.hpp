#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wavesynth/modal_bases.hpp"

namespace wavesynth {

enum class SamplingStrategy { Deterministic, Sobol, Random };

std::string_view to_string(SamplingStrategy s) noexcept;
/// Accepts "deterministic", "sobol", "random"; throws ConfigError otherwise.
SamplingStrategy parse_strategy(std::string_view name);

/// Two-dimensional Sobol sequence in Gray-code order. Dimension 0 is the
/// van der Corput sequence in base 2, dimension 1 uses the primitive
/// polynomial x + 1 with initial direction number m_1 = 1.
class Sobol2D {
public:
    static constexpr int kBits = 52;

    /// Point with index n >= 0 (n = 0 is the origin).
    std::array<double, 2> point(std::uint64_t n) const;
    static const std::array<std::array<std::uint64_t, kBits>, 2>& directions();
};

/// Uniform doubles strictly inside (0, 1) from std::mt19937_64, converted by
/// (x >> 11 + 1/2) 2^-53 so the stream is identical on every platform.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
    double next();
    /// Standard normal by Box-Muller on two successive uniforms.
    double next_normal();

private:
    std::mt19937_64 engine_;
};

/// Christoffel-function sampling density on the cylinder for the truncation
/// P (N = 2P + 1 modes), its zeta-marginal CDF and inverse.
///
/// rho_N(zeta) = w^2(zeta) sum_{|p|<=P} |a_p|^2 / N integrates to one over the
/// cylinder, so the zeta-marginal is 2 pi rho_N. The CDF is tabulated on
/// 4096 uniform cells of [-zeta_max, zeta_max] with 16-point Gauss-Legendre
/// panels and refined inside a cell by the same rule.
class DensityModel {
public:
    static constexpr int kCells = 4096;
    static constexpr int kPanelOrder = 16;

    DensityModel(std::shared_ptr<const DiskContext> ctx, int P);

    const DiskContext& context() const noexcept { return *ctx_; }
    std::shared_ptr<const DiskContext> context_ptr() const noexcept { return ctx_; }
    int truncation() const noexcept { return P_; }
    int dimension() const noexcept { return 2 * P_ + 1; }
    double zeta_max() const noexcept { return zeta_max_; }
    /// Raw quadrature of rho_N over the cylinder (analytically 1).
    double total_mass() const noexcept { return total_mass_; }

    double log_christoffel_mu(double zeta) const;
    double christoffel_mu(const CylinderPoint& y) const;
    double log_density(double zeta) const;
    double density(double zeta) const;
    double cdf(double zeta) const;
    /// zeta with |cdf(zeta) - u| <= 1e-12; u must lie in (0, 1).
    double cdf_inverse(double u) const;

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& cdf_table() const noexcept { return table_; }

private:
    double cell_integral(double a, double b) const;

    std::shared_ptr<const DiskContext> ctx_;
    int P_;
    double zeta_max_ = 0.0;
    double total_mass_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> table_;
    std::array<double, kPanelOrder> gl_nodes_{};
    std::array<double, kPanelOrder> gl_weights_{};
};

struct NodeSet {
    int P = 0;
    SamplingStrategy strategy = SamplingStrategy::Sobol;
    std::uint64_t seed = 0;
    std::vector<CylinderPoint> nodes;
};

/// Maps unit-square samples through (2 pi z_phi, cdf_inverse(z_zeta)).
/// Deterministic emits k^2 >= M grid midpoints with k = ceil(sqrt(M));
/// Sobol emits indices 1..M; Random draws M pairs from `seed`.
NodeSet sample_nodes(const DensityModel& model, int M, SamplingStrategy strategy, std::uint64_t seed);

} // namespace wavesynth
