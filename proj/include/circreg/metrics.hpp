#pragma once

#include "circreg/angle.hpp"

#include <optional>
#include <span>
#include <vector>

namespace circreg {

/// An estimate that may be undefined (unstable fit or cancelled direction).
using MaybeAngle = std::optional<Angle>;

struct CaseResult {
    double value = 0.0;         ///< mean of 1 - cos(truth - estimate)
    std::size_t undefined = 0;  ///< estimates charged the maximal loss 2
};

/// Circular average squared error over paired truth/estimate values.
CaseResult metric_case(const AngleSeries& truth, std::span<const MaybeAngle> estimates);
CaseResult metric_case(const AngleSeries& truth, const AngleSeries& estimates);

struct PointwiseMetrics {
    double cb = 0.0;   ///< mean sin(estimate - truth)
    double cvar = 0.0; ///< mean 1 - cos(estimate - circular mean of estimates)
    double cmse = 0.0; ///< mean 1 - cos(truth - estimate)
    std::size_t used = 0;
    std::size_t excluded = 0;  ///< undefined replicate estimates
    bool undefined = false;    ///< no replicate produced an estimate
};

/// Monte-Carlo bias / variance / mean squared error at one point.
PointwiseMetrics metric_pointwise(std::span<const MaybeAngle> replicate_estimates, Angle truth);

} // namespace circreg
