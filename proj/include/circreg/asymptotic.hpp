#pragma once

#include "circreg/bandwidth_matrix.hpp"
#include "circreg/kernel.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace circreg {

enum class Estimator { nw, ll };

/// Model quantities at a single point x needed by the leading-order
/// bias/variance expressions.
struct AsymptoticInputs {
    Eigen::VectorXd grad_m;     ///< gradient of the circular regression function
    Eigen::MatrixXd hessian_m;  ///< Hessian of the circular regression function
    double density = 0.0;       ///< design density f(x)
    Eigen::VectorXd grad_density;
    double ell = 0.0;           ///< mean resultant length l(x)
    Eigen::VectorXd grad_ell;
    double sigma1_sq = 0.0;     ///< Var[sin eps | X = x]
    std::size_t n = 0;
    KernelConstants kernel{};
};

/// Pointwise model description; `inputs_at` samples it at x.
struct AsymptoticModel {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_m;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian_m;
    std::function<double(const Eigen::VectorXd&)> density;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_density;
    std::function<double(const Eigen::VectorXd&)> ell;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_ell;
    std::function<double(const Eigen::VectorXd&)> sigma1_sq;

    AsymptoticInputs inputs_at(const Eigen::VectorXd& x, std::size_t n,
                               const KernelConstants& kernel) const;
};

/// Curvature matrix B(x) whose trace against H^2 gives the leading bias:
/// NW uses grad(l f) / (l f), LL uses grad(l) / l, plus the Hessian of m.
Eigen::MatrixXd bias_curvature(const AsymptoticInputs& inputs, Estimator estimator);

/// Squared leading bias plus leading variance of the circular estimator at x.
/// Throws SingularPoint when f(x) or l(x) is not positive.
double amse_local(const AsymptoticInputs& inputs, const BandwidthMatrix& bandwidth,
                  Estimator estimator);

/// Minimizer of amse_local of the form h * Btilde^(-1/2), Btilde = +-B.
/// Throws IndefiniteCurvature when B(x) is not definite.
BandwidthMatrix h_opt_local(const AsymptoticInputs& inputs, Estimator estimator);

} // namespace circreg
