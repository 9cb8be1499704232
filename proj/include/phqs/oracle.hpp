#pragma once

#include "phqs/power_sums.hpp"
#include "phqs/states.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace phqs::oracle {

// Truncated number-basis probability vector p(0..n_trunc).
struct PhotonDistribution {
    std::vector<double> p;

    int n_trunc() const { return int(p.size()) - 1; }
    // Checks positivity, normalization and the truncation-tail criterion.
    void validate(double tail_tol = 1e-12, double norm_tol = 1e-9) const;
};

// Pure state amplitudes in the truncated number basis.
struct FockVector {
    Eigen::VectorXcd amp;

    int n_trunc() const { return int(amp.size()) - 1; }
    void validate(double norm_tol = 1e-9) const;
};

inline constexpr int kDefaultTrunc = 256;
inline constexpr double kTailTol = 1e-12;

// Exact number distributions (noiseless configs only). Coherent -> Poisson,
// thermal -> Bose-Einstein, Fock -> delta, squeezed -> even-n distribution
// from the truncated squeeze operator applied to vacuum (cross-checked
// against the closed form), modulated -> mixed Poisson over the waveform.
PhotonDistribution number_distribution(const states::StateConfig& cfg,
                                       int n_trunc = kDefaultTrunc);

// Raw moments <n^l> for l = 0..lmax.
std::vector<double> number_moments(const PhotonDistribution& p, int lmax);

// Falling-factorial moment <n(n-1)...(n-i+1)>.
double falling_factorial_moment(const PhotonDistribution& p, int i);

struct PhotonStats {
    double n = 0.0;
    double dn2 = 0.0;
    double dn3 = 0.0;
};

// Central moments (<n>, <dn^2>, <dn^3>) directly from p.
PhotonStats central_number_moments(const PhotonDistribution& p);

// Phase-averaged even quadrature moment <X^{2k}>, k in {1,2,3}, via the
// closed-form expansion in falling-factorial number moments.
double quadrature_even_moment(const PhotonDistribution& p, int k);

// The same moment by explicit enumeration of all (2k choose k) orderings of
// k raising and k lowering operators as truncated matrices. Independent of
// quadrature_even_moment; validates its coefficients. *truncation_warning
// (when non-null) is set if boundary matrix elements could contribute more
// than 1e-10.
double bruteforce_symmetric_sum(const PhotonDistribution& p, int k,
                                bool* truncation_warning = nullptr);

// Cumulants of the phase-averaged quadrature distribution from its even
// moments (odd moments vanish by symmetry).
stats::CumulantSet cumulants_from_distribution(const PhotonDistribution& p);

// Log characteristic function of the phase-averaged quadrature measurement.
// Closed forms exist for thermal and coherent states; the coherent form is
// real only below the first zero of the Bessel factor.
double cgf(const states::StateConfig& cfg, double lambda);

// k-th cumulant (k <= 6) by central finite differences of the CGF with two
// Richardson levels.
double cumulant_via_cgf(const states::StateConfig& cfg, int k);

// Pure-state amplitudes for coherent / squeezed / Fock configs.
FockVector state_vector(const states::StateConfig& cfg, int n_trunc = kDefaultTrunc);

// Glauber displacement by r*exp(i*theta): matrix exponential of the
// truncated generator r e^{i theta} a^dag - r e^{-i theta} a.
FockVector displace(const FockVector& psi, double r, double theta);

// Photon mean and variance of the displaced state computed two ways:
// direct expectations on the displaced vector, and the covariance-based
// transform evaluated on the undisplaced state.
struct DisplacedStats {
    double n_direct = 0.0;
    double dn2_direct = 0.0;
    double n_transform = 0.0;
    double dn2_transform = 0.0;

    double max_difference() const;
};

DisplacedStats displaced_stats(const states::StateConfig& cfg, double r, double theta,
                               int n_trunc = 96);

// Full pipeline identity check: p(n) -> exact even quadrature moments ->
// cumulants -> photocount moments must reproduce the direct central moments
// of p(n).
struct RoundtripReport {
    PhotonStats reconstructed;
    PhotonStats direct;
    double max_abs_error = 0.0;
};

RoundtripReport roundtrip(const states::StateConfig& cfg, int n_trunc = kDefaultTrunc);

// Exact even quadrature moments (M2, M4, M6) of the semi-classical
// narrow-band model for a given intensity distribution: Gaussian-mixture
// moments of sqrt(2i) cos(theta) plus the vacuum ersatz.
std::array<double, 3> semiclassical_quadrature_moments(double i_mean, double di2,
                                                       double di3);

} // namespace phqs::oracle
