#pragma once

#include "circreg/angle.hpp"
#include "circreg/local_poly.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

namespace circreg {

/// Paired covariates (n x d) and circular responses.
class ObservationSet {
public:
    ObservationSet(Eigen::MatrixXd covariates, AngleSeries responses);

    std::size_t size() const noexcept { return responses_.size(); }
    int dimension() const noexcept { return static_cast<int>(covariates_.cols()); }
    const Eigen::MatrixXd& covariates() const noexcept { return covariates_; }
    const AngleSeries& responses() const noexcept { return responses_; }
    const std::vector<double>& sines() const noexcept { return sines_; }
    const std::vector<double>& cosines() const noexcept { return cosines_; }

    /// Copy with observation i removed.
    ObservationSet without(std::size_t i) const;
    /// Copy with every response rotated by delta.
    ObservationSet rotated(double delta) const;

    friend bool operator==(const ObservationSet& a, const ObservationSet& b) {
        return a.covariates_ == b.covariates_ && a.responses_ == b.responses_;
    }

private:
    Eigen::MatrixXd covariates_;
    AngleSeries responses_;
    std::vector<double> sines_;
    std::vector<double> cosines_;
};

/// Below this estimated mean resultant length the direction is undefined.
inline constexpr double kDegenerateResultant = 1e-10;

struct CircularPrediction {
    Angle direction;
    double ell_hat = 0.0;
    bool stable = false;
    bool smoother_stable = false; ///< the shared smoothing weights are well conditioned
    double m1_hat = 0.0; ///< sine component estimate
    double m2_hat = 0.0; ///< cosine component estimate
    double condition_estimate = 1.0;
    std::size_t effective_points = 0;
};

/// Circular regression estimator: atan2 of the local polynomial fits of the
/// sine and cosine of the responses, which share one set of smoothing weights.
class CircularFit {
public:
    CircularFit(ObservationSet data, LocalFitSpec spec);

    const ObservationSet& data() const noexcept { return *data_; }
    const LocalFitSpec& spec() const noexcept { return smoother_.spec(); }

    CircularPrediction predict(const Eigen::VectorXd& x) const;

    /// Prediction at covariate row i from a fit that excludes observation i.
    CircularPrediction predict_leave_one_out(std::size_t i) const;

    /// Prediction at every grid row; order preserved, unstable points flagged.
    std::vector<CircularPrediction> predict_surface(const Eigen::MatrixXd& grid,
                                                    unsigned threads = 1) const;

private:
    CircularPrediction combine(const SmoothingWeights& w) const;

    std::shared_ptr<const ObservationSet> data_;
    LocalSmoother smoother_;
};

inline CircularPrediction fit_circular_at(const CircularFit& fit, const Eigen::VectorXd& x) {
    return fit.predict(x);
}

inline std::vector<CircularPrediction> predict_surface(const CircularFit& fit,
                                                       const Eigen::MatrixXd& grid,
                                                       unsigned threads = 1) {
    return fit.predict_surface(grid, threads);
}

/// Conditional moments of the sine/cosine component errors implied by the
/// moments of the angular error at a point.
struct ErrorMoments {
    double sigma1_sq; ///< Var[sin eps]
    double sigma2_sq; ///< Var[cos eps]
    double sigma12;   ///< E[sin eps cos eps]
    double s1_sq;     ///< variance of the sine-model error
    double s2_sq;     ///< variance of the cosine-model error
    double c;         ///< covariance of the two component errors
};

/// f1 = sin m(x), f2 = cos m(x), ell the mean resultant length at x.
ErrorMoments error_moments_from_truth(double f1, double f2, double ell, double sigma1_sq,
                                      double sigma2_sq, double sigma12);

} // namespace circreg
