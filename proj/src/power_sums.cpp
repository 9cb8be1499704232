#include "phqs/power_sums.hpp"

#include "phqs/parallel.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

namespace phqs::stats {

namespace {

[[noreturn]] void throw_non_finite(double x) {
    throw stream_corruption_error("non-finite sample in stream: " + std::to_string(x));
}

inline void neumaier_add(double& sum, double& comp, double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
    else
        comp += (v - t) + sum;
    sum = t;
}

} // namespace

void PowerSums::add(double x) {
    if (!std::isfinite(x)) throw_non_finite(x);
    const double d = x - shift;
    const double d2 = d * d, d3 = d2 * d;
    if (compensated) {
        neumaier_add(s[0], comp[0], d);
        neumaier_add(s[1], comp[1], d2);
        neumaier_add(s[2], comp[2], d3);
        neumaier_add(s[3], comp[3], d2 * d2);
        neumaier_add(s[4], comp[4], d2 * d3);
        neumaier_add(s[5], comp[5], d3 * d3);
    } else {
        s[0] += d;
        s[1] += d2;
        s[2] += d3;
        s[3] += d2 * d2;
        s[4] += d2 * d3;
        s[5] += d3 * d3;
    }
    ++count;
}

void PowerSums::add(std::span<const double> xs) {
    if (compensated) {
        for (double x : xs) add(x);
        return;
    }
    // Hot path: local register accumulators, ~12 flops per sample.
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0;
    const double sh = shift;
    for (double x : xs) {
        if (!std::isfinite(x)) throw_non_finite(x);
        const double d = x - sh;
        const double d2 = d * d, d3 = d2 * d;
        a1 += d;
        a2 += d2;
        a3 += d3;
        a4 += d2 * d2;
        a5 += d2 * d3;
        a6 += d3 * d3;
    }
    s[0] += a1;
    s[1] += a2;
    s[2] += a3;
    s[3] += a4;
    s[4] += a5;
    s[5] += a6;
    count += xs.size();
}

void PowerSums::rebase(double new_shift) {
    if (new_shift == shift) return;
    const double d = shift - new_shift;  // (x - new) = (x - old) + d
    const double n = double(count);
    const double d2 = d * d, d3 = d2 * d, d4 = d2 * d2, d5 = d4 * d, d6 = d3 * d3;
    const double t1 = s[0], t2 = s[1], t3 = s[2], t4 = s[3], t5 = s[4], t6 = s[5];
    s[0] = t1 + n * d;
    s[1] = t2 + 2 * d * t1 + n * d2;
    s[2] = t3 + 3 * d * t2 + 3 * d2 * t1 + n * d3;
    s[3] = t4 + 4 * d * t3 + 6 * d2 * t2 + 4 * d3 * t1 + n * d4;
    s[4] = t5 + 5 * d * t4 + 10 * d2 * t3 + 10 * d3 * t2 + 5 * d4 * t1 + n * d5;
    s[5] = t6 + 6 * d * t5 + 15 * d2 * t4 + 20 * d3 * t3 + 15 * d4 * t2 + 6 * d5 * t1 + n * d6;
    shift = new_shift;
    comp = {};
}

PowerSums merge(const PowerSums& a, const PowerSums& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    if (a.count > std::numeric_limits<std::uint64_t>::max() - b.count)
        throw std::overflow_error("PowerSums merge: sample count overflow");
    PowerSums out = a;
    PowerSums rhs = b;
    rhs.rebase(a.shift);
    out.count += rhs.count;
    for (int k = 0; k < 6; ++k) {
        out.s[k] += rhs.s[k];
        out.comp[k] += rhs.comp[k];
    }
    return out;
}

CentralMoments central_moments(const PowerSums& acc) {
    if (acc.count < 2)
        throw std::invalid_argument("central_moments: need at least 2 samples");
    const double n = double(acc.count);
    auto raw = [&](int k) { return (acc.s[k - 1] + acc.comp[k - 1]) / n; };
    const double d = raw(1);  // mean in the shifted frame
    const double r2 = raw(2), r3 = raw(3), r4 = raw(4), r5 = raw(5), r6 = raw(6);
    const double d2 = d * d, d3 = d2 * d, d4 = d2 * d2, d5 = d4 * d, d6 = d3 * d3;
    CentralMoments cm;
    cm.count = acc.count;
    cm.mean = acc.shift + d;
    cm.m2 = r2 - d2;
    cm.m3 = r3 - 3 * d * r2 + 2 * d3;
    cm.m4 = r4 - 4 * d * r3 + 6 * d2 * r2 - 3 * d4;
    cm.m5 = r5 - 5 * d * r4 + 10 * d2 * r3 - 10 * d3 * r2 + 4 * d5;
    cm.m6 = r6 - 6 * d * r5 + 15 * d2 * r4 - 20 * d3 * r3 + 15 * d4 * r2 - 5 * d6;
    return cm;
}

CumulantSet cumulants(const CentralMoments& cm) {
    CumulantSet out;
    out.count = cm.count;
    const double m2 = cm.m2, m3 = cm.m3, m4 = cm.m4, m5 = cm.m5, m6 = cm.m6;
    out.c[0] = cm.mean;
    out.c[1] = m2;
    out.c[2] = m3;
    out.c[3] = m4 - 3 * m2 * m2;
    out.c[4] = m5 - 10 * m3 * m2;
    out.c[5] = m6 - 15 * m4 * m2 - 10 * m3 * m3 + 30 * m2 * m2 * m2;
    return out;
}

CumulantSet cumulants(const PowerSums& acc) {
    CumulantSet out = cumulants(central_moments(acc));
    out.shift = acc.shift;
    return out;
}

CumulantSet subtract_noise(const CumulantSet& signal, const CumulantSet& noise,
                           bool* negative_c2) {
    CumulantSet out;
    out.count = std::min(signal.count, noise.count);
    out.shift = signal.shift;
    for (int k = 0; k < 6; ++k) out.c[k] = signal.c[k] - noise.c[k];
    if (signal.se && noise.se) {
        std::array<double, 6> se{};
        for (int k = 0; k < 6; ++k) se[k] = std::hypot((*signal.se)[k], (*noise.se)[k]);
        out.se = se;
    }
    if (negative_c2) *negative_c2 = out.c[1] < 0.0;
    return out;
}

BatchAccumulator::BatchAccumulator(std::uint64_t total_count, const BatchOptions& opts) {
    if (opts.batches < 2)
        throw std::invalid_argument("batch_statistics: need at least 2 batches");
    if (total_count < 2 * opts.batches)
        throw std::invalid_argument("batch_statistics: stream shorter than 2 samples per batch");
    batch_size_ = total_count / opts.batches;
    used_ = batch_size_ * opts.batches;
    batches_.assign(opts.batches, PowerSums(opts.shift, opts.compensated));
}

void BatchAccumulator::add(std::span<const double> xs) {
    while (!xs.empty() && consumed_ < used_) {
        const std::uint64_t batch = consumed_ / batch_size_;
        const std::uint64_t room = (batch + 1) * batch_size_ - consumed_;
        const std::size_t take = std::size_t(std::min<std::uint64_t>(room, xs.size()));
        batches_[batch].add(xs.first(take));
        consumed_ += take;
        xs = xs.subspan(take);
    }
    consumed_ += xs.size();  // remainder beyond the last batch is dropped
}

CumulantSet BatchAccumulator::finish() const {
    if (consumed_ < used_)
        throw std::invalid_argument("batch_statistics: stream ended before declared count");
    const std::size_t nb = batches_.size();
    std::array<double, 6> mean{}, ssq{};
    std::vector<CumulantSet> per(nb);
    for (std::size_t b = 0; b < nb; ++b) per[b] = cumulants(batches_[b]);
    for (int k = 0; k < 6; ++k) {
        for (std::size_t b = 0; b < nb; ++b) mean[k] += per[b].c[k];
        mean[k] /= double(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const double d = per[b].c[k] - mean[k];
            ssq[k] += d * d;
        }
    }
    CumulantSet out;
    out.count = used_;
    out.shift = batches_.front().shift;
    out.c = mean;
    std::array<double, 6> se{};
    for (int k = 0; k < 6; ++k) se[k] = std::sqrt(ssq[k] / (double(nb) * double(nb - 1)));
    out.se = se;
    return out;
}

PowerSums BatchAccumulator::merged() const {
    PowerSums total = batches_.front();
    for (std::size_t b = 1; b < batches_.size(); ++b) total = merge(total, batches_[b]);
    return total;
}

CumulantSet batch_statistics(std::span<const double> xs, const BatchOptions& opts) {
    BatchAccumulator acc(xs.size(), opts);
    acc.add(xs);
    return acc.finish();
}

PowerSums accumulate_parallel(std::span<const double> xs, double shift, unsigned threads) {
    const unsigned nt = resolve_threads(threads);
    if (nt <= 1 || xs.size() < 1 << 16) {
        PowerSums acc(shift);
        acc.add(xs);
        return acc;
    }
    std::vector<PowerSums> parts(nt, PowerSums(shift));
    parallel_chunks(xs.size(), nt, [&](unsigned t, std::size_t lo, std::size_t hi) {
        parts[t].add(xs.subspan(lo, hi - lo));
    });
    PowerSums total = parts.front();
    for (unsigned t = 1; t < nt; ++t) total = merge(total, parts[t]);
    return total;
}

} // namespace phqs::stats
