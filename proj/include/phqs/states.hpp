#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phqs::states {

enum class StateKind {
    Coherent,          // mean photon number alpha2 = |alpha|^2
    Thermal,           // occupation nbar
    SqueezedVacuum,    // squeeze parameter r
    Fock,              // photon number n
    ModulatedCoherent, // coherent with slow intensity modulation, mean ibar
    Background,        // bare detection background G(0, noise_photons), no vacuum
};

enum class ModScheme { Triangular, Sinusoidal, Square };

std::string to_string(StateKind k);
std::string to_string(ModScheme s);
StateKind state_kind_from_string(const std::string& s);
ModScheme mod_scheme_from_string(const std::string& s);

// Source state description. Only the parameter matching `kind` is read; the
// additive Gaussian background (noise-referred, in photons) and the stream
// seed apply to every kind.
struct StateConfig {
    StateKind kind = StateKind::Coherent;
    double alpha2 = 0.0;
    double nbar = 0.0;
    double squeeze_r = 0.0;
    int fock_n = 0;
    double ibar = 0.0;
    ModScheme scheme = ModScheme::Triangular;
    double noise_photons = 0.0;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument

    // Analytic <n> of the noiseless state (Background has none and throws).
    double mean_photons() const;
    // Analytic C2 of the sampled quadrature, background included.
    double quadrature_variance() const;
};

inline constexpr int kMaxFock = 20;

// Slow intensity modulation waveforms, parameterized by the phase fraction
// u in [0,1). Each has time average ibar and variance alpha*ibar^2 with
// alpha = 1/3 (triangular), 1/2 (sinusoidal), 1 (square).
double intensity_waveform(ModScheme scheme, double u, double ibar);

// Phase-averaged quadrature sampler. Pure function of (config, sample
// index): disjoint index ranges can be generated in any order or in
// parallel and concatenate to the same stream.
class QuadratureSampler {
public:
    explicit QuadratureSampler(const StateConfig& cfg);

    void generate(std::uint64_t first_index, std::span<double> out) const;
    std::vector<double> generate(std::uint64_t count) const;

    const StateConfig& config() const { return cfg_; }

    static constexpr int kFockRetryBudget = 1000;

private:
    double sample_one(std::uint64_t index) const;

    StateConfig cfg_;
    // Fock rejection envelope: N(0, env_var) scaled by env_scale bounds |psi_n|^2.
    double env_var_ = 0.0;
    double env_scale_ = 0.0;
};

std::vector<double> sample(const StateConfig& cfg, std::uint64_t count);

// Normalized density of the phase-averaged quadrature distribution,
// background convolution included.
double pdf(const StateConfig& cfg, double x);

// |psi_n(x)|^2 for the n-th number state (vacuum-variance-1/2 units).
double fock_density(int n, double x);

} // namespace phqs::states
