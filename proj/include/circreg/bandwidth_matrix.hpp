#pragma once

#include <Eigen/Dense>

namespace circreg {

enum class MatrixKind { scalar, diagonal, full };

/// Symmetric positive definite d x d smoothing matrix H.
///
/// Construction validates symmetry (within 1e-12, relative to the largest
/// entry) and strict positivity of every eigenvalue; failures throw
/// InvalidBandwidth. The inverse and determinant are cached.
class BandwidthMatrix {
public:
    static BandwidthMatrix scalar(double h, Eigen::Index dimension);
    static BandwidthMatrix diagonal(const Eigen::VectorXd& entries);
    static BandwidthMatrix full(const Eigen::MatrixXd& entries);

    MatrixKind kind() const noexcept { return kind_; }
    Eigen::Index dimension() const noexcept { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
    const Eigen::MatrixXd& inverse() const noexcept { return inverse_; }
    double determinant() const noexcept { return determinant_; }

    /// Same kind, entries multiplied by `factor` > 0.
    BandwidthMatrix scaled(double factor) const;

    /// Largest semi-axis of the unit-kernel support ellipsoid {u : |H^-1 u| <= 1}.
    double max_radius() const;

private:
    BandwidthMatrix(MatrixKind kind, Eigen::MatrixXd entries);

    MatrixKind kind_;
    Eigen::MatrixXd entries_;
    Eigen::MatrixXd inverse_;
    double determinant_;
};

} // namespace circreg
