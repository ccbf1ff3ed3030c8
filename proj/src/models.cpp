#include "circreg/models.hpp"

#include "circreg/errors.hpp"
#include "circreg/von_mises.hpp"

#include <cmath>
#include <string>

namespace circreg {

namespace {

void check_unit_square_point(const Eigen::VectorXd& x) {
    if (x.size() != 2) {
        throw InvalidInput("built-in models take a 2-vector");
    }
    if (!x.allFinite()) {
        throw InvalidInput("model argument is not finite");
    }
}

// M1 pieces: a(x1) = 6 x1^5 - 2 x1^3 - 1, b(x2) = -2 x2^5 - 3 x2 - 1.
struct M1Parts {
    double a, da, dda, b, db, ddb;
};

M1Parts m1_parts(const Eigen::VectorXd& x) {
    const double u = x(0);
    const double v = x(1);
    return {6 * std::pow(u, 5) - 2 * u * u * u - 1, 30 * std::pow(u, 4) - 6 * u * u, 120 * u * u * u - 12 * u,
            -2 * std::pow(v, 5) - 3 * v - 1,        -10 * std::pow(v, 4) - 3,        -40 * v * v * v};
}

// M2 pieces: g1(x1) = x1^5 - 1 inside acos, g2(x2) = x2^3 - x2 + 1 inside asin.
struct M2Parts {
    double g1, dg1, ddg1, g2, dg2, ddg2;
};

M2Parts m2_parts(const Eigen::VectorXd& x) {
    const double u = x(0);
    const double v = x(1);
    return {std::pow(u, 5) - 1, 5 * std::pow(u, 4), 20 * u * u * u, v * v * v - v + 1, 3 * v * v - 1, 6 * v};
}

void check_m2_domain(const M2Parts& p) {
    if (p.g1 < -1.0 || p.g1 > 1.0 || p.g2 < -1.0 || p.g2 > 1.0) {
        throw DomainError("M2 is undefined here: acos/asin argument outside [-1, 1]");
    }
}

void check_m2_smooth(const M2Parts& p) {
    check_m2_domain(p);
    if (std::abs(p.g1) >= 1.0 || std::abs(p.g2) >= 1.0) {
        throw DomainError("M2 is not differentiable where an acos/asin argument equals +-1");
    }
}

} // namespace

ModelKind parse_model_kind(std::string_view name) {
    if (name == "M1" || name == "m1") {
        return ModelKind::m1;
    }
    if (name == "M2" || name == "m2") {
        return ModelKind::m2;
    }
    throw InvalidInput("unknown model '" + std::string(name) + "' (expected M1 or M2)");
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::m1:
        return "M1";
    case ModelKind::m2:
        return "M2";
    case ModelKind::custom:
        return "custom";
    }
    return "unknown";
}

Angle regression_truth(ModelKind model, const Eigen::VectorXd& x) {
    check_unit_square_point(x);
    switch (model) {
    case ModelKind::m1: {
        const M1Parts p = m1_parts(x);
        return Angle(std::atan2(p.a, p.b));
    }
    case ModelKind::m2: {
        const M2Parts p = m2_parts(x);
        check_m2_domain(p);
        return Angle(std::acos(p.g1) + 1.5 * std::asin(p.g2));
    }
    case ModelKind::custom:
        break;
    }
    throw InvalidInput("regression_truth needs a built-in model");
}

Eigen::VectorXd regression_gradient(ModelKind model, const Eigen::VectorXd& x) {
    check_unit_square_point(x);
    Eigen::VectorXd g(2);
    if (model == ModelKind::m1) {
        const M1Parts p = m1_parts(x);
        const double r = p.a * p.a + p.b * p.b;
        g << p.b * p.da / r, -p.a * p.db / r;
        return g;
    }
    if (model == ModelKind::m2) {
        const M2Parts p = m2_parts(x);
        check_m2_smooth(p);
        g << -p.dg1 / std::sqrt(1 - p.g1 * p.g1), 1.5 * p.dg2 / std::sqrt(1 - p.g2 * p.g2);
        return g;
    }
    throw InvalidInput("regression_gradient needs a built-in model");
}

Eigen::MatrixXd regression_hessian(ModelKind model, const Eigen::VectorXd& x) {
    check_unit_square_point(x);
    Eigen::MatrixXd h(2, 2);
    if (model == ModelKind::m1) {
        const M1Parts p = m1_parts(x);
        const double r = p.a * p.a + p.b * p.b;
        const double r2 = r * r;
        const double h11 = p.b * (p.dda * r - 2 * p.a * p.da * p.da) / r2;
        const double h22 = p.a * (2 * p.b * p.db * p.db - p.ddb * r) / r2;
        const double h12 = p.da * p.db * (p.a * p.a - p.b * p.b) / r2;
        h << h11, h12, h12, h22;
        return h;
    }
    if (model == ModelKind::m2) {
        const M2Parts p = m2_parts(x);
        check_m2_smooth(p);
        const double q1 = 1 - p.g1 * p.g1;
        const double q2 = 1 - p.g2 * p.g2;
        const double h11 = -(p.ddg1 * q1 + p.g1 * p.dg1 * p.dg1) / std::pow(q1, 1.5);
        const double h22 = 1.5 * (p.ddg2 * q2 + p.g2 * p.dg2 * p.dg2) / std::pow(q2, 1.5);
        h << h11, 0.0, 0.0, h22;
        return h;
    }
    throw InvalidInput("regression_hessian needs a built-in model");
}

Angle StudyModel::truth(const Eigen::VectorXd& x) const {
    if (kind == ModelKind::custom) {
        if (!custom) {
            throw InvalidInput("custom model has no regression function");
        }
        return Angle(custom(x));
    }
    return regression_truth(kind, x);
}

std::string StudyModel::name() const {
    return std::string(to_string(kind));
}

AsymptoticModel analytic_model(ModelKind model, double kappa) {
    if (model == ModelKind::custom) {
        throw InvalidInput("analytic inputs are only available for built-in models");
    }
    const VonMisesMoments vm = von_mises_moments(kappa);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    AsymptoticModel am;
    am.grad_m = [model](const Eigen::VectorXd& x) { return regression_gradient(model, x); };
    am.hessian_m = [model](const Eigen::VectorXd& x) { return regression_hessian(model, x); };
    am.density = [](const Eigen::VectorXd&) { return 1.0; };
    am.grad_density = [zero](const Eigen::VectorXd&) { return zero; };
    am.ell = [ell = vm.ell](const Eigen::VectorXd&) { return ell; };
    am.grad_ell = [zero](const Eigen::VectorXd&) { return zero; };
    am.sigma1_sq = [s = vm.sigma1_sq](const Eigen::VectorXd&) { return s; };
    return am;
}

} // namespace circreg
