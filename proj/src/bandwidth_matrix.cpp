#include "circreg/bandwidth_matrix.hpp"

#include "circreg/errors.hpp"

#include <cmath>

namespace circreg {

BandwidthMatrix::BandwidthMatrix(MatrixKind kind, Eigen::MatrixXd entries)
    : kind_(kind), entries_(std::move(entries)) {
    const Eigen::Index d = entries_.rows();
    if (d < 1 || entries_.cols() != d) {
        throw InvalidBandwidth("bandwidth matrix must be square and non-empty");
    }
    if (!entries_.allFinite()) {
        throw InvalidBandwidth("bandwidth matrix has non-finite entries");
    }
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidBandwidth("bandwidth matrix is not symmetric");
    }
    entries_ = 0.5 * (entries_ + entries_.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
        throw InvalidBandwidth("bandwidth matrix is not positive definite");
    }
    inverse_ = entries_.inverse();
    determinant_ = eig.eigenvalues().prod();
}

BandwidthMatrix BandwidthMatrix::scalar(double h, Eigen::Index dimension) {
    if (dimension < 1) {
        throw InvalidBandwidth("bandwidth dimension must be positive");
    }
    return BandwidthMatrix(MatrixKind::scalar, h * Eigen::MatrixXd::Identity(dimension, dimension));
}

BandwidthMatrix BandwidthMatrix::diagonal(const Eigen::VectorXd& entries) {
    return BandwidthMatrix(MatrixKind::diagonal, entries.asDiagonal().toDenseMatrix());
}

BandwidthMatrix BandwidthMatrix::full(const Eigen::MatrixXd& entries) {
    return BandwidthMatrix(MatrixKind::full, entries);
}

BandwidthMatrix BandwidthMatrix::scaled(double factor) const {
    return BandwidthMatrix(kind_, factor * entries_);
}

double BandwidthMatrix::max_radius() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
}

} // namespace circreg
