#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace phqs::stats {

// Thrown when a non-finite value shows up in a sample stream.
struct stream_corruption_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One-pass, mergeable accumulator of raw power sums Σ(x-shift)^k, k = 1..6.
//
// The shift is a fixed reference chosen before accumulation (0 by default,
// or e.g. the first sample of a stream) that limits cancellation when the
// sixth moment is recentered. Accumulators with equal shifts merge by plain
// component-wise addition; unequal shifts are rebased first.
struct PowerSums {
    std::uint64_t count = 0;
    double shift = 0.0;
    std::array<double, 6> s{};  // s[k-1] = Σ (x - shift)^k
    bool compensated = false;   // Neumaier-compensated accumulation
    std::array<double, 6> comp{};

    PowerSums() = default;
    explicit PowerSums(double shift_, bool compensated_ = false)
        : shift(shift_), compensated(compensated_) {}

    void add(double x);
    void add(std::span<const double> xs);

    // Re-express the sums relative to a new shift (binomial transform).
    void rebase(double new_shift);
};

// Component-wise sum; b is rebased onto a's shift if they differ.
// An empty accumulator is the identity and adopts the other's shift.
PowerSums merge(const PowerSums& a, const PowerSums& b);

// Centered sample moments about the sample mean.
struct CentralMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, m5 = 0.0, m6 = 0.0;
};

// Requires count >= 2.
CentralMoments central_moments(const PowerSums& acc);

// Cumulants C1..C6 of one run, with optional batch-derived standard errors.
struct CumulantSet {
    std::uint64_t count = 0;
    std::array<double, 6> c{};                      // c[k-1] = C_k
    std::optional<std::array<double, 6>> se;        // present iff from batch statistics
    double shift = 0.0;                             // accumulation reference frame
};

// Plug-in moment-to-cumulant conversion (biased; negligible at N >= 1e6).
CumulantSet cumulants(const CentralMoments& cm);
CumulantSet cumulants(const PowerSums& acc);

// Cumulant additivity: removes an independently measured noise contribution.
// If both inputs carry standard errors the output SEs combine in quadrature;
// count is the smaller of the two. A negative resulting C2 signals
// inconsistent calibration; it is reported through *negative_c2 (when
// non-null), never as a failure.
CumulantSet subtract_noise(const CumulantSet& signal, const CumulantSet& noise,
                           bool* negative_c2 = nullptr);

struct BatchOptions {
    std::uint64_t batches = 100;
    double shift = 0.0;
    bool compensated = false;
};

// Streaming batch-means estimator: the stream (of known total length) is cut
// into `batches` contiguous equal batches; cumulants are averaged over
// batches and their spread gives the standard errors. Feed data through
// add() in order; any remainder beyond batches*batch_size is ignored.
class BatchAccumulator {
public:
    BatchAccumulator(std::uint64_t total_count, const BatchOptions& opts = {});

    void add(std::span<const double> xs);
    std::uint64_t consumed() const { return consumed_; }

    // Batch-mean cumulants and standard errors of the batch mean.
    CumulantSet finish() const;

    // Whole-stream accumulator over the samples used (all batches merged).
    PowerSums merged() const;

private:
    std::uint64_t batch_size_;
    std::uint64_t used_;       // batches * batch_size
    std::uint64_t consumed_ = 0;
    std::vector<PowerSums> batches_;
};

// One-shot batch statistics over an in-memory stream.
CumulantSet batch_statistics(std::span<const double> xs, const BatchOptions& opts = {});

// Chunked parallel accumulation (all chunks share one shift, merged in index
// order, so the result matches serial accumulation up to reassociation).
PowerSums accumulate_parallel(std::span<const double> xs, double shift = 0.0,
                              unsigned threads = 0);

} // namespace phqs::stats
