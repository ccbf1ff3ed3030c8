#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
    if (panels % 2 != 0) {
        ++panels;
    }
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

/// e^-x I_nu(x) for integer nu from the power series, each term formed in log
/// space so large x neither overflows nor underflows.
inline double bessel_i_series_scaled(int nu, double x) {
    if (x == 0.0) {
        return nu == 0 ? 1.0 : 0.0;
    }
    const double log_half = std::log(0.5 * x);
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double log_term = (2.0 * k + nu) * log_half - std::lgamma(k + 1.0) - std::lgamma(k + nu + 1.0) - x;
        const double term = std::exp(log_term);
        sum += term;
        if (k > x && term < 1e-17 * sum) {
            break;
        }
    }
    return sum;
}

inline double bessel_ratio_series(int nu, double kappa) {
    return bessel_i_series_scaled(nu, kappa) / bessel_i_series_scaled(0, kappa);
}

/// E[g(eps)] for eps ~ vM(0, kappa) by quadrature of the density.
inline double von_mises_expectation(double kappa, const std::function<double(double)>& g) {
    const auto density = [kappa](double t) { return std::exp(kappa * (std::cos(t) - 1.0)); };
    const double z = simpson(density, -pi, pi, 20000);
    return simpson([&](double t) { return g(t) * density(t); }, -pi, pi, 20000) / z;
}

/// Spherical Epanechnikov kernel with the normalizer recovered by quadrature
/// of the radial profile: c_d^-1 = |S^{d-1}| * int_0^1 (1 - r^2) r^(d-1) dr.
inline double sphere_area(int d) {
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

inline double epanechnikov_constant_by_quadrature(int d) {
    const double radial = simpson([d](double r) { return (1.0 - r * r) * std::pow(r, d - 1); }, 0.0, 1.0);
    return 1.0 / (sphere_area(d) * radial);
}

inline double epanechnikov_oracle(const Eigen::VectorXd& u) {
    const double sq = u.squaredNorm();
    if (sq >= 1.0) {
        return 0.0;
    }
    return epanechnikov_constant_by_quadrature(static_cast<int>(u.size())) * (1.0 - sq);
}

/// Kernel-weighted least-squares intercept by QR on the raw (unstandardized)
/// polynomial design. Monomials: 1, then for d = 1 powers up to p, for d > 1
/// the linear terms (p <= 1).
struct WlsFit {
    double intercept;
    int support;
};

inline WlsFit wls_intercept(const Eigen::MatrixXd& X, const std::vector<double>& y, const Eigen::VectorXd& x,
                            int degree, const std::function<double(const Eigen::VectorXd&)>& kernel) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    const Eigen::Index q = degree == 0 ? 1 : (d == 1 ? degree + 1 : d + 1);
    Eigen::MatrixXd A(n, q);
    Eigen::VectorXd b(n);
    int support = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd u = X.row(i).transpose() - x;
        const double w = kernel(u);
        support += w > 0.0 ? 1 : 0;
        const double s = std::sqrt(w);
        A(i, 0) = s;
        for (Eigen::Index c = 1; c < q; ++c) {
            A(i, c) = s * (d == 1 ? std::pow(u(0), static_cast<double>(c)) : u(c - 1));
        }
        b(i) = s * y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(b);
    return {beta(0), support};
}

/// Uniformly random symmetric positive definite matrix with eigenvalues in [lo, hi].
template <typename Rng>
Eigen::MatrixXd random_spd(int d, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> e(lo, hi);
    Eigen::MatrixXd g(d, d);
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            g(r, c) = u(rng);
        }
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd lambda(d);
    for (int i = 0; i < d; ++i) {
        lambda(i) = e(rng);
    }
    Eigen::MatrixXd m = q * lambda.asDiagonal() * q.transpose();
    return 0.5 * (m + m.transpose());
}

} // namespace oracle
