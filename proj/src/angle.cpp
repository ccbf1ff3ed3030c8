#include "circreg/angle.hpp"

#include "circreg/errors.hpp"

#include <numeric>

namespace circreg {

double wrap_angle(double raw) {
    if (!std::isfinite(raw)) {
        throw InvalidInput("wrap_angle: non-finite angle");
    }
    double r = std::fmod(raw, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    // r + 2pi can round up to exactly 2pi for tiny negative inputs.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

AngleSeries::AngleSeries(std::span<const double> radians) {
    values_.reserve(radians.size());
    for (double r : radians) {
        values_.emplace_back(r);
    }
}

std::vector<double> AngleSeries::radians() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out[i] = values_[i].value();
    }
    return out;
}

std::vector<double> AngleSeries::sines() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out[i] = values_[i].sin();
    }
    return out;
}

std::vector<double> AngleSeries::cosines() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out[i] = values_[i].cos();
    }
    return out;
}

AngleSeries AngleSeries::rotated(double delta) const {
    std::vector<Angle> out;
    out.reserve(values_.size());
    for (Angle a : values_) {
        out.push_back(a + delta);
    }
    return AngleSeries(std::move(out));
}

DirectionStats circ_mean_and_resultant(const AngleSeries& angles,
                                       std::optional<std::span<const double>> weights) {
    const std::size_t n = angles.size();
    if (n == 0) {
        throw InvalidInput("circ_mean_and_resultant: empty sample");
    }
    double s = 0.0;
    double c = 0.0;
    if (weights) {
        const auto& w = *weights;
        if (w.size() != n) {
            throw InvalidInput("circ_mean_and_resultant: weight count does not match sample size");
        }
        double total = 0.0;
        for (double wi : w) {
            if (!(wi >= 0.0)) {
                throw InvalidInput("circ_mean_and_resultant: negative weight");
            }
            total += wi;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvalidInput("circ_mean_and_resultant: weights must sum to 1");
        }
        for (std::size_t i = 0; i < n; ++i) {
            s += w[i] * angles[i].sin();
            c += w[i] * angles[i].cos();
        }
    } else {
        for (Angle a : angles) {
            s += a.sin();
            c += a.cos();
        }
        s /= static_cast<double>(n);
        c /= static_cast<double>(n);
    }

    DirectionStats stats;
    // Rounding can push a unit-vector average a hair above 1.
    stats.resultant_length = std::min(1.0, std::hypot(s, c));
    if (std::hypot(s, c) < kZeroResultant) {
        stats.undefined = true;
        return stats;
    }
    stats.mean_direction = Angle(std::atan2(s, c));
    return stats;
}

double angular_loss(Angle a, Angle b) noexcept {
    return 1.0 - std::cos(a.value() - b.value());
}

double signed_difference(Angle a, Angle b) noexcept {
    double d = a.value() - b.value();
    if (d > std::numbers::pi) {
        d -= kTwoPi;
    } else if (d <= -std::numbers::pi) {
        d += kTwoPi;
    }
    return d;
}

} // namespace circreg
