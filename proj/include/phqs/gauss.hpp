#pragma once

#include <cmath>
#include <vector>

namespace phqs {

// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on P_n).
struct QuadRule {
    std::vector<double> x, w;
};

inline QuadRule make_gauss_legendre(int n) {
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

// Cached rules for the orders used internally.
inline const QuadRule& gauss_legendre(int n) {
    static const QuadRule r96 = make_gauss_legendre(96);
    static const QuadRule r128 = make_gauss_legendre(128);
    static const QuadRule r192 = make_gauss_legendre(192);
    static const QuadRule r384 = make_gauss_legendre(384);
    if (n <= 96) return r96;
    if (n <= 128) return r128;
    if (n <= 192) return r192;
    return r384;
}

} // namespace phqs
