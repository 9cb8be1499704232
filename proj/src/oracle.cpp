#include "phqs/oracle.hpp"

#include "phqs/gauss.hpp"
#include "phqs/reconstruct.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace phqs::oracle {

using states::StateConfig;
using states::StateKind;
using SpMat = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kBesselJ0FirstZero = 2.404825557695773;

double log_poisson(int n, double mean) {
    return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

// Closed-form squeezed-vacuum number distribution (even n only).
double squeezed_pmf(int n, double r) {
    if (n % 2 != 0) return 0.0;
    if (r == 0.0) return n == 0 ? 1.0 : 0.0;
    const int m = n / 2;
    const double lt = std::log(std::abs(std::tanh(r)));
    const double lp = std::lgamma(2.0 * m + 1.0) - 2.0 * (m * std::log(2.0) + std::lgamma(m + 1.0)) +
                      2.0 * m * lt - std::log(std::cosh(r));
    return std::exp(lp);
}

double pmf(const StateConfig& cfg, int n) {
    switch (cfg.kind) {
        case StateKind::Coherent:
            if (cfg.alpha2 == 0.0) return n == 0 ? 1.0 : 0.0;
            return std::exp(log_poisson(n, cfg.alpha2));
        case StateKind::Thermal:
            if (cfg.nbar == 0.0) return n == 0 ? 1.0 : 0.0;
            return std::exp(n * std::log(cfg.nbar) - (n + 1.0) * std::log(cfg.nbar + 1.0));
        case StateKind::Fock:
            return n == cfg.fock_n ? 1.0 : 0.0;
        case StateKind::SqueezedVacuum:
            return squeezed_pmf(n, cfg.squeeze_r);
        case StateKind::ModulatedCoherent: {
            if (cfg.ibar == 0.0) return n == 0 ? 1.0 : 0.0;
            // mixed Poisson over the intensity waveform
            double acc = 0.0;
            switch (cfg.scheme) {
                case states::ModScheme::Square:
                    return 0.5 * ((n == 0 ? 1.0 : 0.0) +
                                  std::exp(log_poisson(n, 2.0 * cfg.ibar)));
                case states::ModScheme::Triangular: {
                    // intensity uniform on [0, 2*ibar]
                    const QuadRule& q = gauss_legendre(128);
                    for (std::size_t j = 0; j < q.x.size(); ++j) {
                        const double i = cfg.ibar * (q.x[j] + 1.0);
                        acc += q.w[j] * (i > 0.0 ? std::exp(log_poisson(n, i))
                                                 : (n == 0 ? 1.0 : 0.0));
                    }
                    return acc * 0.5;
                }
                case states::ModScheme::Sinusoidal: {
                    // periodic analytic integrand: the trapezoid rule over a
                    // full modulation period converges spectrally
                    const int m = 512;
                    for (int j = 0; j < m; ++j) {
                        const double i =
                            cfg.ibar * (1.0 + std::cos(2.0 * kPi * (j + 0.5) / m));
                        acc += i > 0.0 ? std::exp(log_poisson(n, i)) : (n == 0 ? 1.0 : 0.0);
                    }
                    return acc / m;
                }
            }
            throw std::invalid_argument("unknown modulation scheme");
        }
        case StateKind::Background:
            throw std::invalid_argument("background stream has no number distribution");
    }
    throw std::invalid_argument("unknown state kind");
}

int suggest_trunc(const StateConfig& cfg, int from, double tol) {
    for (int n = from; n < (1 << 20); ++n) {
        if (pmf(cfg, n) < tol) return n;
    }
    throw std::invalid_argument("no feasible truncation below 2^20");
}

SpMat lowering(int dim) {
    SpMat a(dim, dim);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(dim);
    for (int n = 1; n < dim; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

} // namespace

void PhotonDistribution::validate(double tail_tol, double norm_tol) const {
    if (p.empty()) throw std::invalid_argument("empty photon distribution");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= -1e-12))
            throw std::invalid_argument("photon distribution has a negative entry");
        total += v;
    }
    if (p.back() >= tail_tol)
        throw std::invalid_argument("truncation tail mass " + std::to_string(p.back()) +
                                    " exceeds " + std::to_string(tail_tol));
    if (std::abs(total - 1.0) > norm_tol)
        throw std::invalid_argument("photon distribution sums to " + std::to_string(total));
}

void FockVector::validate(double norm_tol) const {
    if (amp.size() == 0) throw std::invalid_argument("empty state vector");
    const double n = amp.norm();
    if (std::abs(n - 1.0) > norm_tol)
        throw std::invalid_argument("state vector norm " + std::to_string(n) +
                                    " deviates from 1");
}

PhotonDistribution number_distribution(const StateConfig& cfg, int n_trunc) {
    cfg.validate();
    if (cfg.noise_photons != 0.0)
        throw std::invalid_argument("number_distribution requires a noiseless config");
    if (n_trunc < 1) throw std::invalid_argument("n_trunc must be >= 1");

    PhotonDistribution out;
    out.p.resize(n_trunc + 1);

    if (cfg.kind == StateKind::SqueezedVacuum && cfg.squeeze_r != 0.0) {
        // matrix construction: exp((r/2)(a^2 - a^dag^2)) applied to vacuum
        const int dim = n_trunc + 1;
        SpMat a = lowering(dim);
        Eigen::MatrixXd gen =
            0.5 * cfg.squeeze_r *
            (Eigen::MatrixXd(a * a) - Eigen::MatrixXd(SpMat(a.transpose()) * SpMat(a.transpose())));
        Eigen::VectorXd vac = Eigen::VectorXd::Zero(dim);
        vac(0) = 1.0;
        Eigen::VectorXd psi = gen.exp() * vac;
        for (int n = 0; n <= n_trunc; ++n) out.p[n] = psi(n) * psi(n);
        // cross-check against the closed form
        for (int n = 0; n <= n_trunc; ++n) {
            if (std::abs(out.p[n] - squeezed_pmf(n, cfg.squeeze_r)) > 1e-10)
                throw std::runtime_error(
                    "squeeze operator construction disagrees with closed form at n = " +
                    std::to_string(n));
        }
    } else {
        for (int n = 0; n <= n_trunc; ++n) out.p[n] = pmf(cfg, n);
    }

    if (cfg.kind == StateKind::Fock && n_trunc <= cfg.fock_n)
        throw std::invalid_argument("truncation too small; suggest n_trunc >= " +
                                    std::to_string(cfg.fock_n + 1));
    if (out.p.back() >= kTailTol)
        throw std::invalid_argument(
            "truncation tail criterion unmet; suggest n_trunc >= " +
            std::to_string(suggest_trunc(cfg, n_trunc + 1, kTailTol)));
    out.validate();
    return out;
}

std::vector<double> number_moments(const PhotonDistribution& p, int lmax) {
    if (lmax < 0) throw std::invalid_argument("lmax must be >= 0");
    std::vector<double> mom(lmax + 1, 0.0);
    for (int n = 0; n < int(p.p.size()); ++n) {
        double pw = p.p[n];
        mom[0] += pw;
        for (int l = 1; l <= lmax; ++l) {
            pw *= n;
            mom[l] += pw;
        }
    }
    return mom;
}

double falling_factorial_moment(const PhotonDistribution& p, int i) {
    if (i < 0) throw std::invalid_argument("order must be >= 0");
    double acc = 0.0;
    for (int n = 0; n < int(p.p.size()); ++n) {
        double f = 1.0;
        for (int j = 0; j < i; ++j) f *= double(n - j);
        acc += p.p[n] * f;
    }
    return acc;
}

PhotonStats central_number_moments(const PhotonDistribution& p) {
    const auto mom = number_moments(p, 3);
    PhotonStats st;
    st.n = mom[1];
    st.dn2 = mom[2] - mom[1] * mom[1];
    st.dn3 = mom[3] - 3.0 * mom[2] * mom[1] + 2.0 * mom[1] * mom[1] * mom[1];
    return st;
}

double quadrature_even_moment(const PhotonDistribution& p, int k) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("quadrature_even_moment supports k in {1,2,3}");
    double acc = 0.0;
    const double fact2k = std::tgamma(2.0 * k + 1.0);
    for (int i = 0; i <= k; ++i) {
        const double coef = std::pow(0.5, k - i) * fact2k /
                            (std::tgamma(i + 1.0) * std::tgamma(i + 1.0) *
                             std::tgamma(k - i + 1.0));
        acc += coef * falling_factorial_moment(p, i);
    }
    return std::pow(0.5, k) * acc;
}

double bruteforce_symmetric_sum(const PhotonDistribution& p, int k,
                                bool* truncation_warning) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("bruteforce_symmetric_sum supports k in {1,2,3}");
    const int dim = p.n_trunc() + 1;
    const SpMat a = lowering(dim);
    const SpMat adag = SpMat(a.transpose());

    // all distinct orderings of k lowering and k raising operators
    std::vector<int> word(2 * k, 0);
    std::fill(word.begin() + k, word.end(), 1);
    std::sort(word.begin(), word.end());

    double acc = 0.0;
    double boundary = 0.0;  // contribution from levels a word can push past the cut
    const int edge = std::max(0, dim - 2 * k);
    do {
        SpMat prod = word[0] ? adag : a;
        for (std::size_t j = 1; j < word.size(); ++j)
            prod = SpMat(prod * (word[j] ? adag : a));
        for (int n = 0; n < dim; ++n) {
            const double w = prod.coeff(n, n);
            if (w == 0.0) continue;
            acc += p.p[n] * w;
            if (n >= edge) boundary += p.p[n] * std::abs(w);
        }
    } while (std::next_permutation(word.begin(), word.end()));

    if (truncation_warning) *truncation_warning = std::pow(0.5, k) * boundary > 1e-10;
    return std::pow(0.5, k) * acc;
}

stats::CumulantSet cumulants_from_distribution(const PhotonDistribution& p) {
    const double m2 = quadrature_even_moment(p, 1);
    const double m4 = quadrature_even_moment(p, 2);
    const double m6 = quadrature_even_moment(p, 3);
    stats::CentralMoments cm;
    cm.count = 0;  // exact, not sampled
    cm.mean = 0.0; // phase averaging zeroes odd moments
    cm.m2 = m2;
    cm.m4 = m4;
    cm.m6 = m6;
    return stats::cumulants(cm);
}

double cgf(const StateConfig& cfg, double lambda) {
    if (cfg.noise_photons != 0.0)
        throw std::invalid_argument("cgf closed forms are for noiseless states");
    switch (cfg.kind) {
        case StateKind::Thermal:
            return -(cfg.nbar + 0.5) * lambda * lambda / 2.0;
        case StateKind::Coherent: {
            const double z = std::sqrt(2.0 * cfg.alpha2) * std::abs(lambda);
            if (z >= kBesselJ0FirstZero)
                throw std::domain_error(
                    "coherent CGF undefined at |lambda| >= first Bessel zero");
            return -lambda * lambda / 4.0 + std::log(std::cyl_bessel_j(0.0, z));
        }
        default:
            throw std::invalid_argument("cgf closed forms exist for thermal and coherent only");
    }
}

namespace {

long double cgf_ld(const StateConfig& cfg, long double lambda) {
    switch (cfg.kind) {
        case StateKind::Thermal:
            return -(cfg.nbar + 0.5L) * lambda * lambda / 2.0L;
        case StateKind::Coherent: {
            const long double z = sqrtl(2.0L * cfg.alpha2) * fabsl(lambda);
            if (z >= kBesselJ0FirstZero)
                throw std::domain_error(
                    "coherent CGF undefined at |lambda| >= first Bessel zero");
            return -lambda * lambda / 4.0L + logl(std::cyl_bessel_jl(0.0L, z));
        }
        default:
            throw std::invalid_argument("cgf closed forms exist for thermal and coherent only");
    }
}

} // namespace

double cumulant_via_cgf(const StateConfig& cfg, int k) {
    if (k < 1 || k > 6) throw std::invalid_argument("cumulant order must be in [1, 6]");
    if (cfg.noise_photons != 0.0)
        throw std::invalid_argument("cgf closed forms are for noiseless states");

    struct Stencil {
        std::vector<int> offsets;
        std::vector<long double> coefs;
    };
    static const Stencil stencils[6] = {
        {{-1, 1}, {-0.5L, 0.5L}},
        {{-1, 0, 1}, {1, -2, 1}},
        {{-2, -1, 1, 2}, {-0.5L, 1, -1, 0.5L}},
        {{-2, -1, 0, 1, 2}, {1, -4, 6, -4, 1}},
        {{-3, -2, -1, 1, 2, 3}, {-0.5L, 2, -2.5L, 2.5L, -2, 0.5L}},
        {{-3, -2, -1, 0, 1, 2, 3}, {1, -6, 15, -20, 15, -6, 1}},
    };
    const Stencil& st = stencils[k - 1];

    const long double h0 =
        cfg.kind == StateKind::Coherent ? 0.05L / (1.0L + sqrtl(cfg.alpha2)) : 0.05L;

    auto derivative = [&](long double h) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < st.offsets.size(); ++i)
            acc += st.coefs[i] * cgf_ld(cfg, st.offsets[i] * h);
        return acc / powl(h, k);
    };
    // two Richardson levels over steps (h, 2h, 4h)
    auto richardson = [&](long double h) {
        const long double d1 = derivative(h);
        const long double d2 = derivative(2.0L * h);
        const long double d4 = derivative(4.0L * h);
        const long double r1a = (4.0L * d1 - d2) / 3.0L;
        const long double r1b = (4.0L * d2 - d4) / 3.0L;
        return (16.0L * r1a - r1b) / 15.0L;
    };

    // Halving the base step estimates the coarse value's error; under the
    // O(h^6) model the fine value is another factor 2^6 better.
    const double sign = (k % 2 == 0 && (k / 2) % 2 == 1) ? -1.0 : 1.0;
    std::string last_error;
    for (long double h : {h0, 0.5L * h0, 2.0L * h0}) {
        const long double fine = richardson(0.5L * h);
        const long double coarse = richardson(h);
        const long double err = fabsl(fine - coarse) / 63.0L;
        if (err <= 1e-6L * std::max(1.0L, fabsl(fine)))
            return sign * double(fine);
        last_error = std::to_string(double(err));
    }
    throw std::runtime_error("cumulant_via_cgf failed to converge below 1e-6 (error " +
                             last_error + ")");
}

FockVector state_vector(const StateConfig& cfg, int n_trunc) {
    cfg.validate();
    if (cfg.noise_photons != 0.0)
        throw std::invalid_argument("state_vector requires a noiseless config");
    FockVector psi;
    psi.amp = Eigen::VectorXcd::Zero(n_trunc + 1);
    switch (cfg.kind) {
        case StateKind::Coherent: {
            if (cfg.alpha2 == 0.0) {
                psi.amp(0) = 1.0;
                break;
            }
            const double la = 0.5 * std::log(cfg.alpha2);
            for (int n = 0; n <= n_trunc; ++n)
                psi.amp(n) = std::exp(-0.5 * cfg.alpha2 + n * la - 0.5 * std::lgamma(n + 1.0));
            break;
        }
        case StateKind::SqueezedVacuum: {
            const double r = cfg.squeeze_r;
            if (r == 0.0) {
                psi.amp(0) = 1.0;
                break;
            }
            const double lt = std::log(std::abs(std::tanh(r)));
            const double msign = std::tanh(r) > 0.0 ? -1.0 : 1.0;
            for (int m = 0; 2 * m <= n_trunc; ++m) {
                const double lc = -0.5 * std::log(std::cosh(r)) + m * lt +
                                  0.5 * std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) -
                                  std::lgamma(m + 1.0);
                psi.amp(2 * m) = std::pow(msign, m) * std::exp(lc);
            }
            break;
        }
        case StateKind::Fock:
            if (cfg.fock_n > n_trunc)
                throw std::invalid_argument("truncation below the Fock level");
            psi.amp(cfg.fock_n) = 1.0;
            break;
        default:
            throw std::invalid_argument("state_vector supports coherent, squeezed and Fock");
    }
    psi.validate();
    return psi;
}

FockVector displace(const FockVector& psi, double r, double theta) {
    psi.validate();
    if (r == 0.0) return psi;
    const int dim = int(psi.amp.size());
    const Complex beta = std::polar(r, theta);
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        const double root = std::sqrt(n + 1.0);
        gen(n + 1, n) += beta * root;          // a^dag
        gen(n, n + 1) -= std::conj(beta) * root;  // -a
    }
    FockVector out;
    out.amp = gen.exp() * psi.amp;
    // tail-mass criterion on the displaced state
    const int guard = std::max(2, dim / 16);
    double tail = 0.0;
    for (int n = dim - guard; n < dim; ++n) tail += std::norm(out.amp(n));
    if (tail > 1e-10)
        throw std::runtime_error("displaced state spills outside the truncation (tail " +
                                 std::to_string(tail) + ")");
    out.validate();
    return out;
}

namespace {

struct QuadratureExpectations {
    double n_mean, n2_mean, x_mean, x2_mean, cov_nx;
};

// Exact expectations of n, n^2, X_theta, X_theta^2 and cov(n, X_theta) on a
// truncated pure state (the X overflow row is kept so nothing is lost).
QuadratureExpectations expectations(const FockVector& psi, double theta) {
    const int dim = int(psi.amp.size());
    const Complex eip = std::polar(1.0, theta);
    Eigen::VectorXcd xpsi = Eigen::VectorXcd::Zero(dim + 1);
    for (int n = 0; n <= dim; ++n) {
        Complex v = 0.0;
        if (n >= 1 && n - 1 < dim) v += eip * std::sqrt(double(n)) * psi.amp(n - 1);
        if (n + 1 < dim) v += std::conj(eip) * std::sqrt(n + 1.0) * psi.amp(n + 1);
        xpsi(n) = v / std::sqrt(2.0);
    }
    QuadratureExpectations e{};
    Complex x_mean = 0.0, nx = 0.0;
    for (int n = 0; n < dim; ++n) {
        const double pn = std::norm(psi.amp(n));
        e.n_mean += n * pn;
        e.n2_mean += double(n) * n * pn;
        x_mean += std::conj(psi.amp(n)) * xpsi(n);
        nx += std::conj(psi.amp(n)) * double(n) * xpsi(n);
    }
    e.x_mean = x_mean.real();
    e.x2_mean = xpsi.squaredNorm();
    // (<nX> + <Xn>)/2 - <n><X> for Hermitian operators
    e.cov_nx = nx.real() - e.n_mean * e.x_mean;
    return e;
}

} // namespace

double DisplacedStats::max_difference() const {
    return std::max(std::abs(n_direct - n_transform),
                    std::abs(dn2_direct - dn2_transform));
}

DisplacedStats displaced_stats(const StateConfig& cfg, double r, double theta,
                               int n_trunc) {
    const FockVector psi = state_vector(cfg, n_trunc);

    const FockVector moved = displace(psi, r, theta);
    const QuadratureExpectations d = expectations(moved, theta);

    const QuadratureExpectations u = expectations(psi, theta);
    const double dn2_u = u.n2_mean - u.n_mean * u.n_mean;
    const double dx2_u = u.x2_mean - u.x_mean * u.x_mean;

    DisplacedStats out;
    out.n_direct = d.n_mean;
    out.dn2_direct = d.n2_mean - d.n_mean * d.n_mean;
    out.n_transform = u.n_mean + std::sqrt(2.0) * r * u.x_mean + r * r;
    out.dn2_transform = dn2_u + 2.0 * r * r * dx2_u + 2.0 * std::sqrt(2.0) * r * u.cov_nx;
    return out;
}

RoundtripReport roundtrip(const StateConfig& cfg, int n_trunc) {
    const PhotonDistribution p = number_distribution(cfg, n_trunc);
    const stats::CumulantSet cs = cumulants_from_distribution(p);
    const reconstruct::PhotonMoments pm = reconstruct::photon_moments(cs);
    RoundtripReport rep;
    rep.reconstructed = {pm.n, pm.dn2, pm.dn3};
    rep.direct = central_number_moments(p);
    rep.max_abs_error = std::max({std::abs(rep.reconstructed.n - rep.direct.n),
                                  std::abs(rep.reconstructed.dn2 - rep.direct.dn2),
                                  std::abs(rep.reconstructed.dn3 - rep.direct.dn3)});
    return rep;
}

std::array<double, 3> semiclassical_quadrature_moments(double i_mean, double di2,
                                                       double di3) {
    const double ei2 = di2 + i_mean * i_mean;
    const double ei3 = di3 + 3.0 * i_mean * di2 + i_mean * i_mean * i_mean;
    // X = sqrt(2i) cos(theta) + vacuum ersatz of variance 1/2
    const double m2 = i_mean + 0.5;
    const double m4 = 1.5 * ei2 + 3.0 * i_mean + 0.75;
    const double m6 = 2.5 * ei3 + 11.25 * ei2 + 11.25 * i_mean + 1.875;
    return {m2, m4, m6};
}

} // namespace phqs::oracle
