#include "phqs/states.hpp"

#include "phqs/gauss.hpp"
#include "phqs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phqs::states {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kTwoPi = 2.0 * kPi;

double gauss_pdf(double x, double var) {
    return std::exp(-x * x / (2.0 * var)) / std::sqrt(kTwoPi * var);
}

const QuadRule& gl_rule(int n) { return gauss_legendre(n); }

// (1/pi) Int_0^pi N(x; A cos(t), V) dt  -- the phase-averaged displaced Gaussian
double cos_mixture_pdf(double x, double amplitude, double var) {
    if (amplitude == 0.0) return gauss_pdf(x, var);
    const double ratio = amplitude / std::sqrt(var);
    const QuadRule& q = gl_rule(ratio > 12.0 ? 384 : (ratio > 6.0 ? 192 : 96));
    double acc = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double theta = 0.5 * kPi * (q.x[i] + 1.0);
        acc += q.w[i] * gauss_pdf(x - amplitude * std::cos(theta), var);
    }
    return acc * 0.5;  // (pi/2) panel scale divided by the 1/pi average
}

double squeezed_pdf(double x, double r, double var_noise) {
    const double c2r = std::cosh(2.0 * r), s2r = std::sinh(2.0 * r);
    const QuadRule& q = gl_rule(96);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double phi = 0.5 * kPi * (q.x[i] + 1.0);  // phi = 2*theta over a period
        const double v = 0.5 * (c2r + s2r * std::cos(phi)) + var_noise;
        acc += q.w[i] * gauss_pdf(x, v);
    }
    return acc * 0.5;
}

double fock_noise_pdf(int n, double x, double v) {
    // convolution of |psi_n|^2 with N(0, v) over the state's support
    const double reach = std::sqrt(2.0 * n + 1.0) + 9.0;
    const QuadRule& q = gl_rule(384);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) {
        const double y = reach * q.x[i];
        acc += q.w[i] * fock_density(n, y) * gauss_pdf(x - y, v);
    }
    return acc * reach;
}

double modulated_pdf(const StateConfig& cfg, double x, double var) {
    if (cfg.ibar == 0.0) return gauss_pdf(x, var);
    const double a_max = 2.0 * std::sqrt(cfg.ibar);  // amplitude at peak intensity
    const QuadRule& q = gl_rule(96);
    double acc = 0.0;
    switch (cfg.scheme) {
        case ModScheme::Triangular:
            // intensity uniform on [0, 2*ibar]; substitute amplitude A = sqrt(2i)
            for (std::size_t i = 0; i < q.x.size(); ++i) {
                const double a = 0.5 * a_max * (q.x[i] + 1.0);
                acc += q.w[i] * a * cos_mixture_pdf(x, a, var);
            }
            return acc * (0.5 * a_max) / (2.0 * cfg.ibar);
        case ModScheme::Sinusoidal:
            // A(u) = a_max |cos(psi)| with psi uniform on [0, pi/2]
            for (std::size_t i = 0; i < q.x.size(); ++i) {
                const double psi = 0.25 * kPi * (q.x[i] + 1.0);
                acc += q.w[i] * cos_mixture_pdf(x, a_max * std::cos(psi), var);
            }
            return acc * 0.5;
        case ModScheme::Square:
            return 0.5 * gauss_pdf(x, var) + 0.5 * cos_mixture_pdf(x, a_max, var);
    }
    throw std::invalid_argument("unknown modulation scheme");
}

} // namespace

std::string to_string(StateKind k) {
    switch (k) {
        case StateKind::Coherent: return "coherent";
        case StateKind::Thermal: return "thermal";
        case StateKind::SqueezedVacuum: return "squeezed";
        case StateKind::Fock: return "fock";
        case StateKind::ModulatedCoherent: return "modulated";
        case StateKind::Background: return "background";
    }
    throw std::invalid_argument("unknown state kind");
}

std::string to_string(ModScheme s) {
    switch (s) {
        case ModScheme::Triangular: return "triangular";
        case ModScheme::Sinusoidal: return "sinusoidal";
        case ModScheme::Square: return "square";
    }
    throw std::invalid_argument("unknown modulation scheme");
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "coherent") return StateKind::Coherent;
    if (s == "thermal") return StateKind::Thermal;
    if (s == "squeezed") return StateKind::SqueezedVacuum;
    if (s == "fock") return StateKind::Fock;
    if (s == "modulated") return StateKind::ModulatedCoherent;
    if (s == "background") return StateKind::Background;
    throw std::invalid_argument("unknown state kind: " + s);
}

ModScheme mod_scheme_from_string(const std::string& s) {
    if (s == "triangular") return ModScheme::Triangular;
    if (s == "sinusoidal") return ModScheme::Sinusoidal;
    if (s == "square") return ModScheme::Square;
    throw std::invalid_argument("unknown modulation scheme: " + s);
}

void StateConfig::validate() const {
    if (!(noise_photons >= 0.0) || !std::isfinite(noise_photons))
        throw std::invalid_argument("noise_photons must be finite and >= 0");
    switch (kind) {
        case StateKind::Coherent:
            if (!(alpha2 >= 0.0) || !std::isfinite(alpha2))
                throw std::invalid_argument("coherent alpha2 must be finite and >= 0");
            break;
        case StateKind::Thermal:
            if (!(nbar >= 0.0) || !std::isfinite(nbar))
                throw std::invalid_argument("thermal nbar must be finite and >= 0");
            break;
        case StateKind::SqueezedVacuum:
            if (!std::isfinite(squeeze_r))
                throw std::invalid_argument("squeeze parameter must be finite");
            break;
        case StateKind::Fock:
            if (fock_n < 0 || fock_n > kMaxFock)
                throw std::invalid_argument("fock n must be in [0, " +
                                            std::to_string(kMaxFock) + "]");
            break;
        case StateKind::ModulatedCoherent:
            if (!(ibar >= 0.0) || !std::isfinite(ibar))
                throw std::invalid_argument("modulated ibar must be finite and >= 0");
            break;
        case StateKind::Background:
            break;
    }
}

double StateConfig::mean_photons() const {
    switch (kind) {
        case StateKind::Coherent: return alpha2;
        case StateKind::Thermal: return nbar;
        case StateKind::SqueezedVacuum: {
            const double s = std::sinh(squeeze_r);
            return s * s;
        }
        case StateKind::Fock: return double(fock_n);
        case StateKind::ModulatedCoherent: return ibar;
        case StateKind::Background:
            throw std::invalid_argument("background stream has no photon statistics");
    }
    throw std::invalid_argument("unknown state kind");
}

double StateConfig::quadrature_variance() const {
    if (kind == StateKind::Background) return noise_photons;
    return mean_photons() + 0.5 + noise_photons;
}

double intensity_waveform(ModScheme scheme, double u, double ibar) {
    if (!(ibar >= 0.0)) throw std::invalid_argument("ibar must be >= 0");
    switch (scheme) {
        case ModScheme::Triangular:
            return 2.0 * ibar * (1.0 - std::abs(2.0 * u - 1.0));
        case ModScheme::Sinusoidal:
            return ibar * (1.0 + std::cos(kTwoPi * u));
        case ModScheme::Square:
            return u < 0.5 ? 0.0 : 2.0 * ibar;
    }
    throw std::invalid_argument("unknown modulation scheme");
}

QuadratureSampler::QuadratureSampler(const StateConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (cfg_.kind == StateKind::Fock && cfg_.fock_n > 0) {
        // Gaussian rejection envelope: variance n+1 dominates the |psi_n|^2
        // tail; the prefactor is the numerical sup of the density ratio.
        const int n = cfg_.fock_n;
        env_var_ = n + 1.0;
        const double x_max = std::sqrt(2.0 * n + 1.0) + 10.0;
        double m = 0.0;
        for (double x = 0.0; x <= x_max; x += 1e-3)
            m = std::max(m, fock_density(n, x) / gauss_pdf(x, env_var_));
        env_scale_ = m * 1.02;
    }
}

double QuadratureSampler::sample_one(std::uint64_t index) const {
    SampleRng rng(cfg_.seed, index);
    double x = 0.0;
    switch (cfg_.kind) {
        case StateKind::Coherent: {
            if (cfg_.alpha2 > 0.0) {
                const double theta = kTwoPi * rng.next_unit();
                x = std::sqrt(2.0 * cfg_.alpha2) * std::cos(theta);
            }
            x += rng.next_gaussian() * std::sqrt(0.5);
            break;
        }
        case StateKind::Thermal:
            x = rng.next_gaussian() * std::sqrt(cfg_.nbar + 0.5);
            break;
        case StateKind::SqueezedVacuum: {
            const double theta = kTwoPi * rng.next_unit();
            const double c = std::cos(theta), s = std::sin(theta);
            const double v = 0.5 * (std::exp(2.0 * cfg_.squeeze_r) * c * c +
                                    std::exp(-2.0 * cfg_.squeeze_r) * s * s);
            x = rng.next_gaussian() * std::sqrt(v);
            break;
        }
        case StateKind::Fock: {
            if (cfg_.fock_n == 0) {
                x = rng.next_gaussian() * std::sqrt(0.5);
                break;
            }
            bool accepted = false;
            for (int tries = 0; tries < kFockRetryBudget; ++tries) {
                const double y = rng.next_gaussian() * std::sqrt(env_var_);
                const double u = rng.next_unit();
                if (u * env_scale_ * gauss_pdf(y, env_var_) <= fock_density(cfg_.fock_n, y)) {
                    x = y;
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                throw std::runtime_error("fock sampler: rejection budget exhausted");
            break;
        }
        case StateKind::ModulatedCoherent: {
            const double u = rng.next_unit();
            const double i = intensity_waveform(cfg_.scheme, u, cfg_.ibar);
            const double theta = kTwoPi * rng.next_unit();
            x = std::sqrt(2.0 * i) * std::cos(theta) + rng.next_gaussian() * std::sqrt(0.5);
            break;
        }
        case StateKind::Background:
            return cfg_.noise_photons > 0.0
                       ? rng.next_gaussian() * std::sqrt(cfg_.noise_photons)
                       : 0.0;
    }
    if (cfg_.noise_photons > 0.0)
        x += rng.next_gaussian() * std::sqrt(cfg_.noise_photons);
    return x;
}

void QuadratureSampler::generate(std::uint64_t first_index, std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = sample_one(first_index + i);
}

std::vector<double> QuadratureSampler::generate(std::uint64_t count) const {
    std::vector<double> out(count);
    generate(0, out);
    return out;
}

std::vector<double> sample(const StateConfig& cfg, std::uint64_t count) {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    return QuadratureSampler(cfg).generate(count);
}

double fock_density(int n, double x) {
    // squared harmonic-oscillator eigenfunctions via the stable normalized
    // recurrence; vacuum variance 1/2
    double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return p0 * p0;
    double p1 = std::sqrt(2.0) * x * p0;
    for (int k = 2; k <= n; ++k) {
        const double p2 = std::sqrt(2.0 / k) * x * p1 - std::sqrt((k - 1.0) / k) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1 * p1;
}

double pdf(const StateConfig& cfg, double x) {
    cfg.validate();
    const double v = cfg.noise_photons;
    switch (cfg.kind) {
        case StateKind::Background:
            if (v <= 0.0)
                throw std::invalid_argument("background pdf needs noise_photons > 0");
            return gauss_pdf(x, v);
        case StateKind::Thermal:
            return gauss_pdf(x, cfg.nbar + 0.5 + v);
        case StateKind::Coherent:
            return cos_mixture_pdf(x, std::sqrt(2.0 * cfg.alpha2), 0.5 + v);
        case StateKind::SqueezedVacuum:
            return squeezed_pdf(x, cfg.squeeze_r, v);
        case StateKind::Fock:
            return v > 0.0 ? fock_noise_pdf(cfg.fock_n, x, v)
                           : fock_density(cfg.fock_n, x);
        case StateKind::ModulatedCoherent:
            return modulated_pdf(cfg, x, 0.5 + v);
    }
    throw std::invalid_argument("unknown state kind");
}

} // namespace phqs::states
