#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace sscl {

// Fixed-topology pairwise sum: the reduction tree depends only on the index
// range, so ensemble statistics are bitwise independent of worker layout.
inline double pairwise_sum(std::span<const double> v) {
    if (v.empty()) return 0.0;
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct MeanCI {
    double mean = 0.0;
    double ci_halfwidth = 0.0;  // 95% normal interval
    int n = 0;
};

inline MeanCI mean_ci(std::span<const double> v) {
    MeanCI r;
    r.n = static_cast<int>(v.size());
    if (v.empty()) return r;
    r.mean = pairwise_sum(v) / static_cast<double>(v.size());
    if (v.size() < 2) return r;
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        double d = v[i] - r.mean;
        sq[i] = d * d;
    }
    double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
    r.ci_halfwidth = 1.959963984540054 * std::sqrt(var / static_cast<double>(v.size()));
    return r;
}

// Spearman rank correlation; average ranks on ties.
inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman_rho: need two equal-length samples, n >= 2");
    auto ranks = [](std::span<const double> v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        size_t i = 0;
        while (i < idx.size()) {
            size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
            for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) mx += rx[i], my += ry[i];
    mx /= rx.size();
    my /= ry.size();
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need two equal-length samples, n >= 2");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace sscl
