#include "phqs/classify.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace phqs::classify {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ClassicalCompatible: return "ClassicalCompatible";
        case Verdict::SubPoissonNonclassical: return "SubPoissonNonclassical";
        case Verdict::SuperPoissonBeyondClassicalLimit:
            return "SuperPoissonBeyondClassicalLimit";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    throw std::invalid_argument("unknown verdict");
}

double fano(const reconstruct::PhotonMoments& pm) {
    if (!(pm.n > 0.0)) return kNaN;
    return pm.dn2 / pm.n;
}

ClassicalityReport classical_bounds(const reconstruct::PhotonMoments& pm) {
    ClassicalityReport rep;
    rep.fano = fano(pm);
    rep.mandel_q = rep.fano - 1.0;
    rep.g2 = pm.n > 0.0 ? 1.0 + rep.mandel_q / pm.n : kNaN;

    // Sub-Poisson bound: classical intensity fluctuations force dn2 >= n.
    rep.subpoisson.margin = pm.dn2 - pm.n;
    // Stieltjes skewness bound on dn3.
    const double stieltjes_floor = pm.n + 3.0 * (pm.dn2 - pm.n) * (1.0 - pm.n);
    rep.stieltjes.margin = pm.dn3 - stieltjes_floor;

    // Inputs without SEs are taken as exact values (se = 0), so any negative
    // margin counts as a violation; noisy estimates must cross 5 SEs.
    double se_sub = 0.0, se_st = 0.0;
    if (pm.se) {
        const double se_n = (*pm.se)[0], se_dn2 = (*pm.se)[1], se_dn3 = (*pm.se)[2];
        se_sub = std::hypot(se_dn2, se_n);
        // derivatives of the Stieltjes margin w.r.t. (n, dn2)
        const double dn = -1.0 + 3.0 * (1.0 - pm.n) + 3.0 * (pm.dn2 - pm.n);
        const double ddn2 = -3.0 * (1.0 - pm.n);
        se_st = std::sqrt(se_dn3 * se_dn3 + ddn2 * ddn2 * se_dn2 * se_dn2 +
                          dn * dn * se_n * se_n);
        if (se_sub > 0.0) rep.subpoisson.margin_se = rep.subpoisson.margin / se_sub;
        if (se_st > 0.0) rep.stieltjes.margin_se = rep.stieltjes.margin / se_st;
    }
    // slack absorbs rounding of exactly-on-the-boundary inputs
    const double slack =
        1e-12 * (1.0 + std::abs(pm.n) + std::abs(pm.dn2) + std::abs(pm.dn3));
    rep.subpoisson.violated = rep.subpoisson.margin < -(kVerdictSigma * se_sub + slack);
    rep.stieltjes.violated = rep.stieltjes.margin < -(kVerdictSigma * se_st + slack);
    if (rep.subpoisson.violated)
        rep.verdict = Verdict::SubPoissonNonclassical;
    else if (rep.stieltjes.violated)
        rep.verdict = Verdict::SuperPoissonBeyondClassicalLimit;
    else
        rep.verdict = Verdict::ClassicalCompatible;
    return rep;
}

std::vector<RegionPoint> region_curves(const std::vector<double>& n_grid) {
    std::vector<RegionPoint> out;
    out.reserve(n_grid.size());
    for (double n : n_grid) {
        if (!(n >= 0.0)) throw std::invalid_argument("region_curves: n must be >= 0");
        out.push_back({n, n, 2.0 * n * (n + 1.0)});
    }
    return out;
}

} // namespace phqs::classify
