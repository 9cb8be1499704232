#pragma once

#include "phqs/power_sums.hpp"

#include <array>
#include <optional>

namespace phqs::reconstruct {

// First three photocount moments: <n>, <dn^2>, <dn^3>. Estimates can go
// negative under statistical noise; they are reported as-is and interpreted
// by the classifier.
struct PhotonMoments {
    double n = 0.0;
    double dn2 = 0.0;
    double dn3 = 0.0;
    std::optional<std::array<double, 3>> se;
};

// Centered moments of a classical intensity distribution.
struct IntensityMoments {
    double i = 0.0;
    double di2 = 0.0;
    double di3 = 0.0;

    void validate() const;  // i, di2 >= 0 and the Stieltjes bound di3 >= -3*i*di2
};

// Photocount moments from the even quadrature cumulants:
//   <n>     = C2 - 1/2
//   <dn^2>  = (2/3) C4 + C2^2 - 1/4
//   <dn^3>  = (2/5) C6 + 4 C4 C2 + 2 C2^3 - C2/2
PhotonMoments photon_moments(const stats::CumulantSet& c);

// Narrow-band semi-classical model: <n> = <i>, <dn^2> = <i> + <di^2>,
// <dn^3> = <i> + 3<di^2> + <di^3>.
PhotonMoments semiclassical_moments(const IntensityMoments& im);

// Beam-splitter attenuation: <i> -> eta <i>, <di^k> -> eta^k <di^k>.
IntensityMoments attenuate(const IntensityMoments& im, double eta);

// First-order propagation through the reconstruction formulas treating
// (C2, C4, C6) as independent. Requires SEs on the input.
PhotonMoments propagate_errors(const stats::CumulantSet& c);

} // namespace phqs::reconstruct
