#pragma once

#include <Eigen/Dense>

#include <functional>

namespace circreg {

/// Derivative-free simplex minimizer (Lagarias et al. variant with
/// reflection, expansion, inside/outside contraction and shrink).
struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Stop when max f - min f over the simplex falls below this.
    double tolerance = 1e-6;
    /// 0 returns the start point without building a simplex.
    int max_iterations = 400;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes `objective` from `start`; the initial simplex is start plus
/// steps(i) along each coordinate i. Returns the best point ever evaluated.
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                      const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                                      const NelderMeadOptions& options = {});

} // namespace circreg
