#include "circreg/circular_fit.hpp"

#include "circreg/errors.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace circreg {

ObservationSet::ObservationSet(Eigen::MatrixXd covariates, AngleSeries responses)
    : covariates_(std::move(covariates)), responses_(std::move(responses)) {
    if (responses_.empty()) {
        throw InvalidInput("observation set needs at least one observation");
    }
    if (static_cast<std::size_t>(covariates_.rows()) != responses_.size()) {
        throw InvalidInput("covariate rows do not match the number of responses");
    }
    if (covariates_.cols() < 1) {
        throw InvalidInput("observation set needs at least one covariate");
    }
    if (!covariates_.allFinite()) {
        throw InvalidInput("covariates contain non-finite values");
    }
    sines_ = responses_.sines();
    cosines_ = responses_.cosines();
}

ObservationSet ObservationSet::without(std::size_t i) const {
    const auto n = static_cast<Eigen::Index>(size());
    const auto k = static_cast<Eigen::Index>(i);
    Eigen::MatrixXd cov(n - 1, covariates_.cols());
    cov.topRows(k) = covariates_.topRows(k);
    cov.bottomRows(n - 1 - k) = covariates_.bottomRows(n - 1 - k);
    std::vector<Angle> resp = responses_.values();
    resp.erase(resp.begin() + k);
    return ObservationSet(std::move(cov), AngleSeries(std::move(resp)));
}

ObservationSet ObservationSet::rotated(double delta) const {
    return ObservationSet(covariates_, responses_.rotated(delta));
}

CircularFit::CircularFit(ObservationSet data, LocalFitSpec spec)
    : data_(std::make_shared<const ObservationSet>(std::move(data))),
      smoother_(data_->covariates(), std::move(spec)) {}

CircularPrediction CircularFit::combine(const SmoothingWeights& w) const {
    CircularPrediction p;
    p.condition_estimate = w.condition_estimate;
    p.effective_points = w.effective_points;
    p.smoother_stable = w.stable;
    if (!w.stable) {
        p.m1_hat = p.m2_hat = std::nan("");
        return p;
    }
    const Eigen::Map<const Eigen::VectorXd> s(data_->sines().data(),
                                              static_cast<Eigen::Index>(data_->size()));
    const Eigen::Map<const Eigen::VectorXd> c(data_->cosines().data(),
                                              static_cast<Eigen::Index>(data_->size()));
    p.m1_hat = w.weights.dot(s);
    p.m2_hat = w.weights.dot(c);
    p.ell_hat = std::hypot(p.m1_hat, p.m2_hat);
    p.stable = p.ell_hat >= kDegenerateResultant;
    if (p.stable) {
        p.direction = Angle(std::atan2(p.m1_hat, p.m2_hat));
    }
    return p;
}

CircularPrediction CircularFit::predict(const Eigen::VectorXd& x) const {
    return combine(smoother_.weights_at(x));
}

CircularPrediction CircularFit::predict_leave_one_out(std::size_t i) const {
    if (i >= data_->size()) {
        throw InvalidInput("leave-one-out index out of range");
    }
    const Eigen::VectorXd x = data_->covariates().row(static_cast<Eigen::Index>(i)).transpose();
    return combine(smoother_.weights_at(x, i));
}

std::vector<CircularPrediction> CircularFit::predict_surface(const Eigen::MatrixXd& grid,
                                                             unsigned threads) const {
    if (grid.rows() > 0 && grid.cols() != data_->dimension()) {
        throw InvalidInput("grid columns do not match the covariate dimension");
    }
    const auto m = static_cast<std::size_t>(grid.rows());
    std::vector<CircularPrediction> out(m);
    auto work = [&](std::size_t i) {
        out[i] = predict(grid.row(static_cast<Eigen::Index>(i)).transpose());
    };
    if (threads <= 1 || m < 2) {
        for (std::size_t i = 0; i < m; ++i) {
            work(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < m; i = next++) {
                work(i);
            }
        });
    }
    pool.clear();
    return out;
}

ErrorMoments error_moments_from_truth(double f1, double f2, double ell, double sigma1_sq,
                                      double sigma2_sq, double sigma12) {
    if (std::abs(f1 * f1 + f2 * f2 - 1.0) > 1e-10) {
        throw InvalidInput("f1^2 + f2^2 must equal 1");
    }
    if (!(ell >= 0.0 && ell <= 1.0)) {
        throw InvalidInput("mean resultant length must lie in [0, 1]");
    }
    if (!(sigma1_sq >= 0.0) || !(sigma2_sq >= 0.0)) {
        throw InvalidInput("error variances must be nonnegative");
    }
    ErrorMoments em{};
    em.sigma1_sq = sigma1_sq;
    em.sigma2_sq = sigma2_sq;
    em.sigma12 = sigma12;
    em.s1_sq = f1 * f1 * sigma2_sq + 2.0 * f1 * f2 * sigma12 + f2 * f2 * sigma1_sq;
    em.s2_sq = f2 * f2 * sigma2_sq - 2.0 * f2 * f1 * sigma12 + f1 * f1 * sigma1_sq;
    em.c = f1 * f2 * sigma2_sq - f1 * f1 * sigma12 + f2 * f2 * sigma12 - f1 * f2 * sigma1_sq;
    return em;
}

} // namespace circreg
