#pragma once

#include "circreg/angle.hpp"
#include "circreg/asymptotic.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>

namespace circreg {

/// Regression surfaces on the unit square used by the simulation study.
///   M1: atan2(6 x1^5 - 2 x1^3 - 1, -2 x2^5 - 3 x2 - 1)
///   M2: acos(x1^5 - 1) + 1.5 asin(x2^3 - x2 + 1)
enum class ModelKind { m1, m2, custom };

ModelKind parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

/// Wrapped value of M1/M2 at x in [0,1]^2. Throws DomainError when an
/// acos/asin argument leaves [-1, 1] and InvalidInput for wrong dimensions.
Angle regression_truth(ModelKind model, const Eigen::VectorXd& x);

/// Analytic gradient and Hessian of the (unwrapped) M1/M2 surfaces.
Eigen::VectorXd regression_gradient(ModelKind model, const Eigen::VectorXd& x);
Eigen::MatrixXd regression_hessian(ModelKind model, const Eigen::VectorXd& x);

/// A regression model: one of the built-in surfaces or a user callable.
struct StudyModel {
    ModelKind kind = ModelKind::m1;
    std::function<double(const Eigen::VectorXd&)> custom; ///< radians, wrapped on use
    int dimension = 2;

    static StudyModel builtin(ModelKind kind) { return {kind, {}, 2}; }
    static StudyModel from_function(std::function<double(const Eigen::VectorXd&)> m, int dimension) {
        return {ModelKind::custom, std::move(m), dimension};
    }

    Angle truth(const Eigen::VectorXd& x) const;
    std::string name() const;
};

/// AMSE inputs for a built-in model with a uniform design on the unit square
/// and vM(0, kappa) errors: f = 1, l = I1/I0, sigma1^2 = (1 - I2/I0) / 2.
AsymptoticModel analytic_model(ModelKind model, double kappa);

} // namespace circreg
