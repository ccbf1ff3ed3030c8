#include "circreg/von_mises.hpp"

#include "circreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace circreg {

AngleSeries sample_von_mises(Angle mu, double kappa, std::size_t count, RandomStream& rng) {
    if (std::isnan(kappa) || kappa < 0.0) {
        throw InvalidInput("von Mises concentration must be nonnegative");
    }
    std::vector<Angle> out;
    out.reserve(count);
    if (std::isinf(kappa)) {
        out.assign(count, mu);
        return AngleSeries(std::move(out));
    }
    if (kappa == 0.0) {
        for (std::size_t i = 0; i < count; ++i) {
            out.emplace_back(kTwoPi * rng.uniform());
        }
        return AngleSeries(std::move(out));
    }

    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    while (out.size() < count) {
        const double z = std::cos(std::numbers::pi * rng.uniform());
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        const double u2 = rng.uniform();
        if (c * (2.0 - c) - u2 <= 0.0 && std::log(c / u2) + 1.0 - c < 0.0) {
            continue;
        }
        const double u3 = rng.uniform();
        const double theta = (u3 > 0.5 ? 1.0 : -1.0) * std::acos(std::clamp(f, -1.0, 1.0));
        out.emplace_back(mu.value() + theta);
    }
    return AngleSeries(std::move(out));
}

namespace {

// Large-argument expansion of e^-k sqrt(2 pi k) I_nu(k).
double scaled_bessel_asymptotic(int order, double kappa) {
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * kappa);
        sum += term;
    }
    return sum;
}

} // namespace

double bessel_ratio(int order, double kappa) {
    if (order < 0) {
        throw InvalidInput("Bessel order must be nonnegative");
    }
    if (std::isnan(kappa) || kappa < 0.0) {
        throw InvalidInput("Bessel argument must be nonnegative");
    }
    if (order == 0) {
        return 1.0;
    }
    if (kappa == 0.0) {
        return 0.0;
    }
    if (std::isinf(kappa)) {
        return 1.0;
    }
    if (kappa > 500.0) {
        return scaled_bessel_asymptotic(order, kappa) / scaled_bessel_asymptotic(0, kappa);
    }
    return std::cyl_bessel_i(static_cast<double>(order), kappa) / std::cyl_bessel_i(0.0, kappa);
}

VonMisesMoments von_mises_moments(double kappa) {
    const double a1 = bessel_ratio(1, kappa);
    const double a2 = bessel_ratio(2, kappa);
    return {a1, 0.5 * (1.0 - a2), 0.5 * (1.0 + a2) - a1 * a1, 0.0};
}

} // namespace circreg
