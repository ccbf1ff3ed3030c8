#pragma once

#include "circreg/bandwidth_matrix.hpp"
#include "circreg/kernel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>

namespace circreg {

/// Fits whose equilibrated normal-equations matrix has a 2-norm condition
/// number above this are flagged unstable.
inline constexpr double kDefaultStabilityThreshold = 1e8;

/// Degree, kernel and bandwidth of a local polynomial fit.
/// Multivariate fits (d > 1) support degree 0 or 1 only.
struct LocalFitSpec {
    int degree = 0;
    KernelSpec kernel;
    BandwidthMatrix bandwidth;
    double stability_threshold = kDefaultStabilityThreshold;

    int dimension() const noexcept { return kernel.dimension; }
    /// Throws InvalidInput / InvalidBandwidth if the parts are inconsistent.
    void validate() const;
};

/// Number of polynomial coefficients of a degree-p fit in d dimensions.
int coefficient_count(int dimension, int degree);

struct LocalFitResult {
    double estimate = 0.0;
    bool stable = false;
    double condition_estimate = 1.0;
    std::size_t effective_points = 0;
};

/// Linear-smoother representation of a fit: estimate = weights . y.
struct SmoothingWeights {
    Eigen::VectorXd weights;
    bool stable = false;
    double condition_estimate = 1.0;
    std::size_t effective_points = 0;
};

/// Local constant fit sum K_H(X_i - x) y_i / sum K_H(X_i - x), computed directly.
/// An empty kernel neighbourhood gives stable = false rather than an exception.
LocalFitResult nw_direct(const Eigen::MatrixXd& covariates, std::span<const double> responses,
                         const Eigen::VectorXd& x, const KernelSpec& kernel,
                         const BandwidthMatrix& bandwidth);

/// Intercept of the kernel-weighted least-squares polynomial fit at x.
LocalFitResult local_fit_real(const Eigen::MatrixXd& covariates, std::span<const double> responses,
                              const Eigen::VectorXd& x, const LocalFitSpec& spec);

/// Equivalent-kernel weights w(x) of local_fit_real at x.
SmoothingWeights smoothing_weights(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& x,
                                   const LocalFitSpec& spec);

/// Reusable smoother over a fixed covariate matrix.
///
/// The design is expressed in standardized coordinates z = H^-1 (X_i - x);
/// this only reparameterizes the slope terms, so the intercept is unchanged,
/// while the reported condition number is taken after symmetric diagonal
/// equilibration and so reflects the local design geometry rather than units.
class LocalSmoother {
public:
    LocalSmoother(const Eigen::MatrixXd& covariates, LocalFitSpec spec);

    const LocalFitSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.cols()); }

    /// Weights at x. `exclude`, when set, drops that observation (leave-one-out).
    SmoothingWeights weights_at(const Eigen::VectorXd& x,
                                std::optional<std::size_t> exclude = std::nullopt) const;

    /// Solves the normal equations against one response vector.
    LocalFitResult fit_at(const Eigen::VectorXd& x, std::span<const double> responses,
                          std::optional<std::size_t> exclude = std::nullopt) const;

private:
    struct NormalSystem;
    NormalSystem assemble(const Eigen::VectorXd& x, std::optional<std::size_t> exclude) const;

    LocalFitSpec spec_;
    Eigen::MatrixXd points_; // d x n, one observation per column
    Eigen::MatrixXd inverse_bandwidth_;
    int coefficients_;
};

} // namespace circreg
