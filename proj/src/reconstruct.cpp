#include "phqs/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

namespace phqs::reconstruct {

void IntensityMoments::validate() const {
    if (!(i >= 0.0)) throw std::invalid_argument("intensity mean must be >= 0");
    if (!(di2 >= 0.0)) throw std::invalid_argument("intensity variance must be >= 0");
    if (!(di3 >= -3.0 * i * di2))
        throw std::invalid_argument("intensity skewness violates the Stieltjes bound");
}

PhotonMoments photon_moments(const stats::CumulantSet& cs) {
    const double c2 = cs.c[1], c4 = cs.c[3], c6 = cs.c[5];
    PhotonMoments pm;
    pm.n = c2 - 0.5;
    pm.dn2 = (2.0 / 3.0) * c4 + c2 * c2 - 0.25;
    pm.dn3 = (2.0 / 5.0) * c6 + 4.0 * c4 * c2 + 2.0 * c2 * c2 * c2 - 0.5 * c2;
    if (cs.se) pm.se = propagate_errors(cs).se;
    return pm;
}

PhotonMoments semiclassical_moments(const IntensityMoments& im) {
    im.validate();
    PhotonMoments pm;
    pm.n = im.i;
    pm.dn2 = im.i + im.di2;
    pm.dn3 = im.i + 3.0 * im.di2 + im.di3;
    return pm;
}

IntensityMoments attenuate(const IntensityMoments& im, double eta) {
    im.validate();
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("attenuation must be within [0, 1]");
    return IntensityMoments{im.i * eta, im.di2 * eta * eta, im.di3 * eta * eta * eta};
}

PhotonMoments propagate_errors(const stats::CumulantSet& cs) {
    if (!cs.se)
        throw std::invalid_argument("propagate_errors: input has no standard errors");
    const double c2 = cs.c[1], c4 = cs.c[3];
    const double se2 = (*cs.se)[1], se4 = (*cs.se)[3], se6 = (*cs.se)[5];
    PhotonMoments pm;
    pm.n = c2 - 0.5;
    pm.dn2 = (2.0 / 3.0) * c4 + c2 * c2 - 0.25;
    pm.dn3 = (2.0 / 5.0) * cs.c[5] + 4.0 * c4 * c2 + 2.0 * c2 * c2 * c2 - 0.5 * c2;
    const double ddn3_dc2 = 4.0 * c4 + 6.0 * c2 * c2 - 0.5;
    pm.se = std::array<double, 3>{
        se2,
        std::hypot((2.0 / 3.0) * se4, 2.0 * c2 * se2),
        std::sqrt(std::pow((2.0 / 5.0) * se6, 2) + std::pow(4.0 * c2 * se4, 2) +
                  std::pow(ddn3_dc2 * se2, 2)),
    };
    return pm;
}

} // namespace phqs::reconstruct
