#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "omni/core.hpp"
#include "omni/error.hpp"

namespace omni::stats {

inline double avg_success(const std::vector<double>& rates) {
    if (rates.empty()) throw PreconditionError("average over no tasks");
    return std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
}

// rate >= alpha by default; strict counts rate > alpha.
inline std::size_t count_learned(const std::vector<double>& rates, double alpha, bool strict = false) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in [0,1]");
    std::size_t n = 0;
    for (double r : rates) n += strict ? (r > alpha) : (r >= alpha);
    return n;
}

inline double median(std::vector<double> x) {
    if (x.empty()) throw PreconditionError("median of nothing");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

// Linear interpolation between order statistics.
inline double percentile(std::vector<double> x, double q) {
    if (x.empty()) throw PreconditionError("percentile of nothing");
    std::sort(x.begin(), x.end());
    const double pos = q * static_cast<double>(x.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (pos - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

struct Interval {
    double low = 0.0, high = 0.0, median = 0.0;
};

// Percentile bootstrap of the median.
inline Interval bootstrap_ci(const std::vector<double>& samples, Rng& rng, std::size_t iters = 1000,
                             double level = 0.95) {
    if (samples.empty()) throw PreconditionError("bootstrap needs at least one sample");
    if (!(level > 0.0 && level < 1.0)) throw PreconditionError("level must lie in (0,1)");
    if (iters < 1) throw PreconditionError("iters must be >= 1");
    std::vector<double> meds;
    meds.reserve(iters);
    std::vector<double> re(samples.size());
    for (std::size_t i = 0; i < iters; ++i) {
        for (auto& v : re) v = samples[uniform_index(rng, samples.size())];
        meds.push_back(median(re));
    }
    Interval out;
    out.median = median(samples);
    out.low = std::min(percentile(meds, (1.0 - level) / 2.0), out.median);
    out.high = std::max(percentile(meds, (1.0 + level) / 2.0), out.median);
    return out;
}

struct MwuResult {
    double u = 0.0;  // for the first sample
    double p = 1.0;  // two-sided
    bool exact = false;
};

namespace detail {
// Midranks (1-based) of the pooled sample and the tie-size correction sum.
inline std::vector<double> midranks(const std::vector<double>& pooled, double& tie_term) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });
    std::vector<double> rank(n);
    tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[idx[j + 1]] == pooled[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    return rank;
}
}  // namespace detail

inline constexpr std::size_t kExactLimit = 12;

enum class MwuMethod { automatic, exact, normal };

inline MwuResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b,
                                MwuMethod method = MwuMethod::automatic) {
    if (a.empty() || b.empty()) throw PreconditionError("Mann-Whitney needs two non-empty samples");
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    double tie_term = 0.0;
    const auto rank = detail::midranks(pooled, tie_term);
    const double base = static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;
    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += rank[i];
    MwuResult out;
    out.u = r1 - base;
    const double mean = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
    const double dev = std::abs(out.u - mean);

    if (method == MwuMethod::exact && n > 24) throw PreconditionError("exact p limited to 24 pooled samples");
    if (method == MwuMethod::exact || (method == MwuMethod::automatic && n <= kExactLimit)) {
        // every assignment of n1 pooled ranks to the first sample
        out.exact = true;
        std::size_t total = 0, extreme = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1u) r += rank[i];
            ++total;
            if (std::abs(r - base - mean) >= dev - 1e-9) ++extreme;
        }
        out.p = static_cast<double>(extreme) / static_cast<double>(total);
        return out;
    }
    const double nn = static_cast<double>(n);
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (var <= 0.0) return out;
    const double z = std::max(dev - 0.5, 0.0) / std::sqrt(var);
    out.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return out;
}

}  // namespace omni::stats
