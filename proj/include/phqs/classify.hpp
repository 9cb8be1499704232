#pragma once

#include "phqs/reconstruct.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phqs::classify {

enum class Verdict {
    ClassicalCompatible,
    SubPoissonNonclassical,
    SuperPoissonBeyondClassicalLimit,
    Indeterminate,
};

std::string to_string(Verdict v);

// One classical-bound check: margin > 0 means the bound holds. margin_se is
// the margin in standard-error units when SEs are available.
struct BoundCheck {
    bool violated = false;
    double margin = 0.0;
    std::optional<double> margin_se;
};

struct ClassicalityReport {
    double fano = 0.0;      // NaN when <n> <= 0
    double mandel_q = 0.0;  // fano - 1
    double g2 = 0.0;        // 1 + Q/<n>, NaN when <n> <= 0
    BoundCheck subpoisson;  // <dn^2> >= <n>
    BoundCheck stieltjes;   // <dn^3> >= <n> + 3(<dn^2> - <n>)(1 - <n>)
    Verdict verdict = Verdict::Indeterminate;
};

// Number of standard errors a bound must be violated by before the verdict
// escalates beyond ClassicalCompatible.
inline constexpr double kVerdictSigma = 5.0;

// <dn^2>/<n>; NaN for <n> <= 0 (the Indeterminate marker).
double fano(const reconstruct::PhotonMoments& pm);

ClassicalityReport classical_bounds(const reconstruct::PhotonMoments& pm);

// Reference curves in the (<n>, <dn^2>) plane: the coherent/Poisson floor
// dn2 = n and the squeezed-vacuum line dn2 = 2n(n+1).
struct RegionPoint {
    double n = 0.0;
    double dn2_coherent = 0.0;
    double dn2_squeezed = 0.0;
};

std::vector<RegionPoint> region_curves(const std::vector<double>& n_grid);

} // namespace phqs::classify
