#include "circreg/nelder_mead.hpp"

#include "circreg/errors.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace circreg {

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                      const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                                      const NelderMeadOptions& options) {
    const Eigen::Index k = start.size();
    if (k < 1 || steps.size() != k) {
        throw InvalidInput("nelder_mead: start and steps must be non-empty and of equal length");
    }
    if (!(options.tolerance > 0.0) || options.max_iterations < 0) {
        throw InvalidInput("nelder_mead: tolerance must be positive and iterations nonnegative");
    }

    NelderMeadResult best;
    auto evaluate = [&](const Eigen::VectorXd& x) {
        const double v = objective(x);
        ++best.evaluations;
        if (best.evaluations == 1 || v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    const double f0 = evaluate(start);
    if (options.max_iterations == 0) {
        return best;
    }

    std::vector<Eigen::VectorXd> vertex(static_cast<std::size_t>(k + 1), start);
    std::vector<double> value(static_cast<std::size_t>(k + 1), f0);
    for (Eigen::Index i = 0; i < k; ++i) {
        auto& v = vertex[static_cast<std::size_t>(i + 1)];
        v(i) += steps(i);
        value[static_cast<std::size_t>(i + 1)] = evaluate(v);
    }

    std::vector<std::size_t> order(vertex.size());
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t lo = order.front();
        const std::size_t hi = order.back();
        const std::size_t second = order[order.size() - 2];
        if (value[hi] - value[lo] < options.tolerance) {
            best.converged = true;
            break;
        }
        best.iterations = iter + 1;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
        for (std::size_t i = 0; i < vertex.size(); ++i) {
            if (i != hi) {
                centroid += vertex[i];
            }
        }
        centroid /= static_cast<double>(k);

        const Eigen::VectorXd reflected = centroid + options.reflection * (centroid - vertex[hi]);
        const double fr = evaluate(reflected);

        if (fr < value[lo]) {
            const Eigen::VectorXd expanded = centroid + options.expansion * (reflected - centroid);
            const double fe = evaluate(expanded);
            if (fe < fr) {
                vertex[hi] = expanded;
                value[hi] = fe;
            } else {
                vertex[hi] = reflected;
                value[hi] = fr;
            }
            continue;
        }
        if (fr < value[second]) {
            vertex[hi] = reflected;
            value[hi] = fr;
            continue;
        }

        bool accepted = false;
        if (fr < value[hi]) {
            const Eigen::VectorXd outside = centroid + options.contraction * (reflected - centroid);
            const double fc = evaluate(outside);
            if (fc <= fr) {
                vertex[hi] = outside;
                value[hi] = fc;
                accepted = true;
            }
        } else {
            const Eigen::VectorXd inside = centroid - options.contraction * (centroid - vertex[hi]);
            const double fcc = evaluate(inside);
            if (fcc < value[hi]) {
                vertex[hi] = inside;
                value[hi] = fcc;
                accepted = true;
            }
        }
        if (accepted) {
            continue;
        }

        for (std::size_t i = 0; i < vertex.size(); ++i) {
            if (i == lo) {
                continue;
            }
            vertex[i] = vertex[lo] + options.shrink * (vertex[i] - vertex[lo]);
            value[i] = evaluate(vertex[i]);
        }
    }
    return best;
}

} // namespace circreg
