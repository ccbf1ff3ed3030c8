#include "circreg/kernel.hpp"

#include "circreg/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace circreg {

namespace {

void check_dimension(const KernelSpec& spec) {
    if (spec.dimension < 1) {
        throw InvalidInput("kernel dimension must be positive");
    }
}

double family_normalizer(const KernelSpec& spec) noexcept {
    if (spec.family == KernelFamily::gaussian) {
        return std::pow(2.0 * std::numbers::pi, -0.5 * spec.dimension);
    }
    return epanechnikov_normalizer(spec.dimension);
}

} // namespace

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "epanechnikov" || name == "epanechnikov_spherical") {
        return KernelFamily::epanechnikov_spherical;
    }
    if (name == "gaussian") {
        return KernelFamily::gaussian;
    }
    throw InvalidInput("unknown kernel family '" + std::string(name) + "'");
}

std::string_view to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::epanechnikov_spherical:
        return "epanechnikov";
    case KernelFamily::gaussian:
        return "gaussian";
    }
    return "unknown";
}

double epanechnikov_normalizer(int dimension) {
    const double half = 0.5 * dimension;
    return std::tgamma(half + 2.0) / std::pow(std::numbers::pi, half);
}

double kernel_profile(const KernelSpec& spec, double squared_norm) noexcept {
    return family_normalizer(spec) * kernel_shape(spec.family, squared_norm);
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& u,
                   const std::optional<BandwidthMatrix>& bandwidth) {
    check_dimension(spec);
    if (u.size() != spec.dimension) {
        throw InvalidInput("kernel_eval: argument length does not match kernel dimension");
    }
    if (!bandwidth) {
        return kernel_profile(spec, u.squaredNorm());
    }
    if (bandwidth->dimension() != spec.dimension) {
        throw InvalidBandwidth("kernel_eval: bandwidth dimension does not match kernel dimension");
    }
    return ScaledKernel(spec, *bandwidth)(u);
}

KernelConstants kernel_constants(const KernelSpec& spec) {
    check_dimension(spec);
    const double d = spec.dimension;
    switch (spec.family) {
    case KernelFamily::epanechnikov_spherical: {
        // Radial integrals of (1 - r^2) and (1 - r^2)^2 against r^(d-1) over [0, 1].
        const double c = epanechnikov_normalizer(spec.dimension);
        const double sphere_area = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
        const double radial_sq = 8.0 / (d * (d + 2.0) * (d + 4.0));
        return {1.0 / (d + 4.0), c * c * sphere_area * radial_sq};
    }
    case KernelFamily::gaussian:
        return {1.0, std::pow(4.0 * std::numbers::pi, -0.5 * d)};
    }
    throw InvalidInput("unknown kernel family");
}

ScaledKernel::ScaledKernel(const KernelSpec& spec, const BandwidthMatrix& bandwidth)
    : spec_(spec), inverse_(bandwidth.inverse()) {
    check_dimension(spec);
    scale_ = family_normalizer(spec) / bandwidth.determinant();
    if (bandwidth.dimension() != spec.dimension) {
        throw InvalidBandwidth("bandwidth dimension does not match kernel dimension");
    }
}

double ScaledKernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    if (u.size() != spec_.dimension) {
        throw InvalidInput("kernel argument length does not match kernel dimension");
    }
    return scale_ * kernel_shape(spec_.family, (inverse_ * u).squaredNorm());
}

} // namespace circreg
