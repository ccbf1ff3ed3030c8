#pragma once

#include "circreg/angle.hpp"
#include "circreg/random.hpp"

#include <cstddef>

namespace circreg {

/// i.i.d. draws from vM(mu, kappa) by the Best-Fisher rejection sampler.
/// kappa = 0 gives the circular uniform; kappa = +inf gives the point mass at mu.
AngleSeries sample_von_mises(Angle mu, double kappa, std::size_t count, RandomStream& rng);

/// Moments of eps ~ vM(0, kappa) used by the asymptotic formulas.
struct VonMisesMoments {
    double ell;       ///< E cos eps = I1/I0
    double sigma1_sq; ///< Var sin eps = (1 - I2/I0) / 2
    double sigma2_sq; ///< Var cos eps = (1 + I2/I0) / 2 - ell^2
    double sigma12;   ///< E sin eps cos eps = 0 by symmetry
};

/// Ratio I_order(kappa) / I_0(kappa) of modified Bessel functions.
double bessel_ratio(int order, double kappa);

VonMisesMoments von_mises_moments(double kappa);

} // namespace circreg
