#pragma once

#include "circreg/bandwidth_matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string_view>

namespace circreg {

enum class KernelFamily { epanechnikov_spherical, gaussian };

/// A spherically symmetric d-variate kernel. The Epanechnikov family is the
/// default; the Gaussian family has unbounded support and must be requested.
struct KernelSpec {
    KernelFamily family = KernelFamily::epanechnikov_spherical;
    int dimension = 1;

    static KernelSpec epanechnikov(int d) { return {KernelFamily::epanechnikov_spherical, d}; }
    static KernelSpec gaussian(int d) { return {KernelFamily::gaussian, d}; }
};

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family);

/// Second moment mu2(K) and roughness R(K) = integral of K^2.
struct KernelConstants {
    double mu2;
    double roughness;
};

/// Normalizing constant c_d = Gamma(d/2 + 2) / pi^(d/2) of the spherical Epanechnikov kernel.
double epanechnikov_normalizer(int dimension);

/// K(u), or |H|^-1 K(H^-1 u) when a bandwidth matrix is supplied.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& u,
                   const std::optional<BandwidthMatrix>& bandwidth = std::nullopt);

KernelConstants kernel_constants(const KernelSpec& spec);

/// Kernel profile as a function of the squared norm |u|^2 (no bandwidth).
double kernel_profile(const KernelSpec& spec, double squared_norm) noexcept;

/// Unnormalized profile: K(u) up to the family's constant factor. Used wherever
/// weights are renormalized anyway.
inline double kernel_shape(KernelFamily family, double squared_norm) noexcept {
    if (family == KernelFamily::gaussian) {
        return std::exp(-0.5 * squared_norm);
    }
    return squared_norm < 1.0 ? 1.0 - squared_norm : 0.0;
}

/// K with a fixed bandwidth, precomputing H^-1 and |H|^-1 for repeated use.
class ScaledKernel {
public:
    ScaledKernel(const KernelSpec& spec, const BandwidthMatrix& bandwidth);

    const KernelSpec& spec() const noexcept { return spec_; }
    const Eigen::MatrixXd& inverse_bandwidth() const noexcept { return inverse_; }

    /// |H|^-1 K(H^-1 u).
    double operator()(const Eigen::Ref<const Eigen::VectorXd>& u) const;

    /// Unnormalized K(z) for an already standardized z = H^-1 u.
    double shape(const Eigen::Ref<const Eigen::VectorXd>& z) const noexcept {
        return kernel_shape(spec_.family, z.squaredNorm());
    }

private:
    KernelSpec spec_;
    Eigen::MatrixXd inverse_;
    double scale_;
};

} // namespace circreg
