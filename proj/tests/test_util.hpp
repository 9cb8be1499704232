#pragma once

#include "phqs/power_sums.hpp"
#include "phqs/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace phqs::testutil {

// Independent integrator for test-side oracles (recursive adaptive Simpson).
// `force` levels of bisection are mandatory before the convergence check is
// trusted, so symmetric or periodic integrands cannot alias to a false early
// exit.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double eps, int depth, int force) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || (force <= 0 && std::abs(left + right - whole) <= 15.0 * eps))
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1,
                                force - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1,
                                force - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-11) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, 48, 7);
}

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
    const double lambda = d * std::sqrt(double(n) * m / double(n + m));
    double p = 0.0;
    for (int k = 1; k <= 200; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

// Batch-means cumulants of a freshly sampled stream.
inline stats::CumulantSet sampled_cumulants(const states::StateConfig& cfg,
                                            std::uint64_t count,
                                            std::uint64_t batches = 100) {
    const std::vector<double> xs = states::sample(cfg, count);
    stats::BatchOptions opts;
    opts.batches = batches;
    return stats::batch_statistics(xs, opts);
}

inline bool within_se(double value, double target, double se, double nsig = 5.0,
                      double floor = 1e-12) {
    return std::abs(value - target) <= nsig * std::max(se, floor);
}

} // namespace phqs::testutil
