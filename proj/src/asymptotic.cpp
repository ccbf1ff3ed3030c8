#include "circreg/asymptotic.hpp"

#include "circreg/errors.hpp"

#include <cmath>

namespace circreg {

namespace {

void check_inputs(const AsymptoticInputs& in) {
    const Eigen::Index d = in.grad_m.size();
    if (d < 1 || in.hessian_m.rows() != d || in.hessian_m.cols() != d ||
        in.grad_density.size() != d || in.grad_ell.size() != d) {
        throw InvalidInput("asymptotic inputs have inconsistent dimensions");
    }
    if (!(in.density > 0.0)) {
        throw SingularPoint("design density vanishes at the evaluation point");
    }
    if (!(in.ell > 0.0)) {
        throw SingularPoint("mean resultant length vanishes at the evaluation point");
    }
    if (in.n == 0) {
        throw InvalidInput("sample size must be positive");
    }
    if (!(in.sigma1_sq >= 0.0)) {
        throw InvalidInput("sine error variance must be nonnegative");
    }
}

double variance_term(const AsymptoticInputs& in, double det_h) {
    return in.kernel.roughness * in.sigma1_sq /
           (static_cast<double>(in.n) * det_h * in.ell * in.ell * in.density);
}

} // namespace

AsymptoticInputs AsymptoticModel::inputs_at(const Eigen::VectorXd& x, std::size_t n,
                                            const KernelConstants& kernel) const {
    AsymptoticInputs in;
    in.grad_m = grad_m(x);
    in.hessian_m = hessian_m(x);
    in.density = density(x);
    in.grad_density = grad_density(x);
    in.ell = ell(x);
    in.grad_ell = grad_ell(x);
    in.sigma1_sq = sigma1_sq(x);
    in.n = n;
    in.kernel = kernel;
    return in;
}

Eigen::MatrixXd bias_curvature(const AsymptoticInputs& in, Estimator estimator) {
    check_inputs(in);
    Eigen::VectorXd g;
    if (estimator == Estimator::nw) {
        const Eigen::VectorXd grad_lf = in.density * in.grad_ell + in.ell * in.grad_density;
        g = grad_lf / (in.ell * in.density);
    } else {
        g = in.grad_ell / in.ell;
    }
    return g * in.grad_m.transpose() + in.grad_m * g.transpose() + in.hessian_m;
}

double amse_local(const AsymptoticInputs& in, const BandwidthMatrix& bandwidth, Estimator estimator) {
    const Eigen::MatrixXd b = bias_curvature(in, estimator);
    if (bandwidth.dimension() != b.rows()) {
        throw InvalidBandwidth("bandwidth dimension does not match the model dimension");
    }
    const Eigen::MatrixXd& h = bandwidth.matrix();
    const double bias = 0.5 * in.kernel.mu2 * (h * h * b).trace();
    return bias * bias + variance_term(in, bandwidth.determinant());
}

BandwidthMatrix h_opt_local(const AsymptoticInputs& in, Estimator estimator) {
    const Eigen::MatrixXd b = bias_curvature(in, estimator);
    const auto d = static_cast<double>(b.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (b + b.transpose()));
    Eigen::VectorXd lambda = eig.eigenvalues();
    if (lambda.minCoeff() > 0.0) {
        // B positive definite
    } else if (lambda.maxCoeff() < 0.0) {
        lambda = -lambda;
    } else {
        throw IndefiniteCurvature("bias curvature matrix is indefinite; no closed-form local optimum");
    }
    const double det_tilde = lambda.prod();
    // tr(H^2 B) = +-d h^2 along H = h Btilde^(-1/2); setting the h-derivative of
    // the AMSE to zero gives the optimal scale below.
    const double scale = std::pow(in.kernel.roughness * in.sigma1_sq * std::sqrt(det_tilde) /
                                      (static_cast<double>(in.n) * d * in.kernel.mu2 * in.kernel.mu2 *
                                       in.ell * in.ell * in.density),
                                  1.0 / (d + 4.0));
    const Eigen::MatrixXd inv_sqrt =
        eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
    return BandwidthMatrix::full(scale * inv_sqrt);
}

} // namespace circreg
