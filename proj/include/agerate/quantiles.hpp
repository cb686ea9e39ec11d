#pragma once

#include "agerate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace agerate {

/// Quantile by linear interpolation between closest ranks on a sorted copy
/// (the numpy default). p in [0, 1].
inline double quantile_linear(std::span<const double> values, double p) {
    if (values.empty()) {
        throw ValidationError("quantile on empty input");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() == 1) {
        return sorted[0];
    }
    double h = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(h));
    auto hi = std::min(lo + 1, sorted.size() - 1);
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double median(std::span<const double> values) { return quantile_linear(values, 0.5); }

/// Nearest-rank (inclusive) percentile: value at position ceil(p/100 * n),
/// 1-based, on the sorted sample. Group sizes downstream depend on this
/// convention, so it is fixed here and documented in the README.
inline double percentile_nearest_rank(std::span<const double> values, double pct) {
    if (values.empty()) {
        throw ValidationError("percentile on empty input");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

/// Mid-ranks (average ranks for ties), 1-based.
inline std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

/// Sum of (t^3 - t) over tie groups; the shared tie-correction ingredient.
inline double tie_term(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) {
            ++j;
        }
        auto t = static_cast<double>(j - i + 1);
        total += t * t * t - t;
        i = j + 1;
    }
    return total;
}

inline double mean(std::span<const double> values) {
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

/// Pearson correlation; throws on zero variance.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("pearson: need two equally sized samples of length >= 2");
    }
    double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ZeroVarianceError("pearson: constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace agerate
