#include "circreg/local_poly.hpp"

#include "circreg/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace circreg {

void LocalFitSpec::validate() const {
    if (degree < 0) {
        throw InvalidInput("polynomial degree must be nonnegative");
    }
    if (kernel.dimension < 1) {
        throw InvalidInput("kernel dimension must be positive");
    }
    if (kernel.dimension > 1 && degree > 1) {
        throw InvalidInput("multivariate local fits support degree 0 or 1 only");
    }
    if (bandwidth.dimension() != kernel.dimension) {
        throw InvalidBandwidth("bandwidth dimension does not match kernel dimension");
    }
    if (!(stability_threshold >= 1.0)) {
        throw InvalidInput("stability threshold must be at least 1");
    }
}

int coefficient_count(int dimension, int degree) {
    if (degree == 0) {
        return 1;
    }
    if (dimension == 1) {
        return degree + 1;
    }
    if (degree == 1) {
        return dimension + 1;
    }
    throw InvalidInput("multivariate local fits support degree 0 or 1 only");
}

namespace {

void check_covariates(const Eigen::MatrixXd& covariates, int dimension) {
    if (covariates.rows() < 1) {
        throw InvalidInput("local fit needs at least one observation");
    }
    if (covariates.cols() != dimension) {
        throw InvalidInput("covariate columns do not match the kernel dimension");
    }
    if (!covariates.allFinite()) {
        throw InvalidInput("covariates contain non-finite values");
    }
}

void check_point(const Eigen::VectorXd& x, int dimension) {
    if (x.size() != dimension) {
        throw InvalidInput("evaluation point has the wrong dimension");
    }
    if (!x.allFinite()) {
        throw InvalidInput("evaluation point is not finite");
    }
}

} // namespace

LocalFitResult nw_direct(const Eigen::MatrixXd& covariates, std::span<const double> responses,
                         const Eigen::VectorXd& x, const KernelSpec& kernel,
                         const BandwidthMatrix& bandwidth) {
    check_covariates(covariates, kernel.dimension);
    check_point(x, kernel.dimension);
    if (responses.size() != static_cast<std::size_t>(covariates.rows())) {
        throw InvalidInput("response count does not match covariate rows");
    }
    const ScaledKernel k(kernel, bandwidth);
    double numerator = 0.0;
    double denominator = 0.0;
    LocalFitResult result;
    for (Eigen::Index i = 0; i < covariates.rows(); ++i) {
        const double w = k(covariates.row(i).transpose() - x);
        if (w > 0.0) {
            ++result.effective_points;
            numerator += w * responses[static_cast<std::size_t>(i)];
            denominator += w;
        }
    }
    if (denominator > 0.0) {
        result.estimate = numerator / denominator;
        result.stable = true;
    } else {
        result.estimate = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

struct LocalSmoother::NormalSystem {
    std::vector<std::size_t> index;  // observations with positive kernel weight
    std::vector<double> weight;      // kernel weights normalized to sum 1
    Eigen::MatrixXd basis;           // q x m polynomial basis at each support point
    Eigen::MatrixXd gram;            // sum_j weight_j b_j b_j^T
    Eigen::LDLT<Eigen::MatrixXd> factor;
    double condition = std::numeric_limits<double>::infinity();
    bool stable = false;
};

LocalSmoother::LocalSmoother(const Eigen::MatrixXd& covariates, LocalFitSpec spec)
    : spec_(std::move(spec)) {
    spec_.validate();
    check_covariates(covariates, spec_.dimension());
    points_ = covariates.transpose();
    inverse_bandwidth_ = spec_.bandwidth.inverse();
    coefficients_ = coefficient_count(spec_.dimension(), spec_.degree);
}

LocalSmoother::NormalSystem LocalSmoother::assemble(const Eigen::VectorXd& x,
                                                    std::optional<std::size_t> exclude) const {
    check_point(x, spec_.dimension());
    const Eigen::Index d = points_.rows();
    const Eigen::Index n = points_.cols();
    const int q = coefficients_;
    const KernelFamily family = spec_.kernel.family;

    NormalSystem sys;
    sys.index.reserve(static_cast<std::size_t>(n));
    sys.weight.reserve(static_cast<std::size_t>(n));
    std::vector<double> standardized;
    standardized.reserve(static_cast<std::size_t>(n * d));

    Eigen::VectorXd diff(d);
    Eigen::VectorXd z(d);
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (exclude && *exclude == static_cast<std::size_t>(j)) {
            continue;
        }
        diff = points_.col(j) - x;
        z.noalias() = inverse_bandwidth_ * diff;
        const double k = kernel_shape(family, z.squaredNorm());
        if (k > 0.0) {
            sys.index.push_back(static_cast<std::size_t>(j));
            sys.weight.push_back(k);
            standardized.insert(standardized.end(), z.data(), z.data() + d);
            total += k;
        }
    }
    const auto m = static_cast<Eigen::Index>(sys.index.size());
    if (m == 0 || !(total > 0.0)) {
        return sys;
    }
    for (double& w : sys.weight) {
        w /= total;
    }

    sys.basis.resize(q, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double* zj = standardized.data() + j * d;
        sys.basis(0, j) = 1.0;
        if (q == 1) {
            continue;
        }
        if (d == 1) {
            double power = 1.0;
            for (int k = 1; k < q; ++k) {
                power *= zj[0];
                sys.basis(k, j) = power;
            }
        } else {
            for (Eigen::Index k = 0; k < d; ++k) {
                sys.basis(k + 1, j) = zj[k];
            }
        }
    }

    const Eigen::Map<const Eigen::VectorXd> w(sys.weight.data(), m);
    sys.gram.noalias() = sys.basis * w.asDiagonal() * sys.basis.transpose();

    if (q == 1) {
        sys.condition = 1.0;
        sys.stable = true;
        sys.factor.compute(sys.gram);
        return sys;
    }
    if (m < q) {
        return sys;
    }
    const Eigen::VectorXd diag = sys.gram.diagonal();
    if (diag.minCoeff() <= 0.0) {
        return sys;
    }
    const Eigen::VectorXd scale = diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd equilibrated = scale.asDiagonal() * sys.gram * scale.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(equilibrated, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    sys.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    sys.factor.compute(sys.gram);
    sys.stable = sys.factor.info() == Eigen::Success && sys.condition <= spec_.stability_threshold;
    return sys;
}

SmoothingWeights LocalSmoother::weights_at(const Eigen::VectorXd& x,
                                           std::optional<std::size_t> exclude) const {
    NormalSystem sys = assemble(x, exclude);
    SmoothingWeights out;
    out.weights = Eigen::VectorXd::Zero(points_.cols());
    out.effective_points = sys.index.size();
    out.condition_estimate = sys.condition;
    out.stable = sys.stable;
    if (!sys.stable) {
        return out;
    }
    // w_j = weight_j * b_j^T G^-1 e1, using the symmetry of G.
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(coefficients_);
    e1(0) = 1.0;
    const Eigen::VectorXd a = sys.factor.solve(e1);
    for (std::size_t j = 0; j < sys.index.size(); ++j) {
        out.weights(static_cast<Eigen::Index>(sys.index[j])) =
            sys.weight[j] * a.dot(sys.basis.col(static_cast<Eigen::Index>(j)));
    }
    return out;
}

LocalFitResult LocalSmoother::fit_at(const Eigen::VectorXd& x, std::span<const double> responses,
                                     std::optional<std::size_t> exclude) const {
    if (responses.size() != size()) {
        throw InvalidInput("response count does not match covariate rows");
    }
    NormalSystem sys = assemble(x, exclude);
    LocalFitResult out;
    out.effective_points = sys.index.size();
    out.condition_estimate = sys.condition;
    out.stable = sys.stable;
    if (!sys.stable) {
        out.estimate = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(coefficients_);
    for (std::size_t j = 0; j < sys.index.size(); ++j) {
        rhs += (sys.weight[j] * responses[sys.index[j]]) * sys.basis.col(static_cast<Eigen::Index>(j));
    }
    out.estimate = sys.factor.solve(rhs)(0);
    return out;
}

LocalFitResult local_fit_real(const Eigen::MatrixXd& covariates, std::span<const double> responses,
                              const Eigen::VectorXd& x, const LocalFitSpec& spec) {
    return LocalSmoother(covariates, spec).fit_at(x, responses);
}

SmoothingWeights smoothing_weights(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& x,
                                   const LocalFitSpec& spec) {
    return LocalSmoother(covariates, spec).weights_at(x);
}

} // namespace circreg
