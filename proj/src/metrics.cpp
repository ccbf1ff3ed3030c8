#include "circreg/metrics.hpp"

#include "circreg/errors.hpp"

#include <cmath>

namespace circreg {

CaseResult metric_case(const AngleSeries& truth, std::span<const MaybeAngle> estimates) {
    if (truth.size() != estimates.size()) {
        throw InvalidInput("metric_case: truth and estimates differ in length");
    }
    if (truth.empty()) {
        throw InvalidInput("metric_case: empty input");
    }
    CaseResult r;
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (estimates[i]) {
            sum += angular_loss(truth[i], *estimates[i]);
        } else {
            sum += 2.0;
            ++r.undefined;
        }
    }
    r.value = sum / static_cast<double>(truth.size());
    return r;
}

CaseResult metric_case(const AngleSeries& truth, const AngleSeries& estimates) {
    std::vector<MaybeAngle> est(estimates.begin(), estimates.end());
    return metric_case(truth, est);
}

PointwiseMetrics metric_pointwise(std::span<const MaybeAngle> replicate_estimates, Angle truth) {
    PointwiseMetrics m;
    AngleSeries defined;
    for (const MaybeAngle& e : replicate_estimates) {
        if (e) {
            defined.push_back(*e);
        } else {
            ++m.excluded;
        }
    }
    m.used = defined.size();
    if (defined.empty()) {
        m.undefined = true;
        m.cb = m.cvar = m.cmse = std::nan("");
        return m;
    }
    const DirectionStats centre = circ_mean_and_resultant(defined);
    double sb = 0.0;
    double sv = 0.0;
    double sm = 0.0;
    for (Angle e : defined) {
        sb += std::sin(e.value() - truth.value());
        sm += angular_loss(truth, e);
        // A cancelled circular mean leaves sum cos(e - mu) = 0 for every mu.
        sv += centre.undefined ? 1.0 : angular_loss(e, centre.mean_direction);
    }
    const auto k = static_cast<double>(defined.size());
    m.cb = sb / k;
    m.cvar = sv / k;
    m.cmse = sm / k;
    return m;
}

} // namespace circreg
