#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace circreg {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce a finite angle in radians into [0, 2pi). Throws InvalidInput on NaN/inf.
double wrap_angle(double raw);

/// An angle in radians, always stored in [0, 2pi).
class Angle {
public:
    constexpr Angle() = default;
    explicit Angle(double radians) : value_(wrap_angle(radians)) {}

    double value() const noexcept { return value_; }
    double sin() const noexcept { return std::sin(value_); }
    double cos() const noexcept { return std::cos(value_); }

    Angle operator+(double delta) const { return Angle(value_ + delta); }

    friend bool operator==(Angle, Angle) = default;

private:
    double value_ = 0.0;
};

/// Ordered sample of angles (the response sample).
class AngleSeries {
public:
    AngleSeries() = default;
    explicit AngleSeries(std::span<const double> radians);
    explicit AngleSeries(std::vector<Angle> angles) : values_(std::move(angles)) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    Angle operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Angle>& values() const noexcept { return values_; }

    void push_back(Angle a) { values_.push_back(a); }

    std::vector<double> radians() const;
    std::vector<double> sines() const;
    std::vector<double> cosines() const;

    /// Every element shifted by delta (mod 2pi).
    AngleSeries rotated(double delta) const;

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const AngleSeries&, const AngleSeries&) = default;

private:
    std::vector<Angle> values_;
};

/// Mean direction and mean resultant length of a (weighted) angular sample.
/// `mean_direction` is meaningless when `undefined` is set.
struct DirectionStats {
    Angle mean_direction;
    double resultant_length = 0.0;
    bool undefined = false;
};

/// Resultant norms below this are treated as a cancelled direction.
inline constexpr double kZeroResultant = 1e-14;

/// Weights, when given, must be nonnegative, match `angles` in length and sum to 1 (within 1e-12).
DirectionStats circ_mean_and_resultant(const AngleSeries& angles,
                                       std::optional<std::span<const double>> weights = std::nullopt);

/// Cosine loss 1 - cos(a - b), in [0, 2].
double angular_loss(Angle a, Angle b) noexcept;

/// Signed difference a - b mapped into (-pi, pi].
double signed_difference(Angle a, Angle b) noexcept;

} // namespace circreg
