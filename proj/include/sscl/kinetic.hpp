#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sscl/flux.hpp"
#include "sscl/grid.hpp"

namespace sscl {

// Uniform velocity-variable grid on [-N, N].
struct XiGrid {
    double N = 0.0;
    int n_bins = 0;
    std::vector<double> edges;  // n_bins + 1, symmetric about 0
    double bin_width = 0.0;

    double center(int j) const { return edges[static_cast<size_t>(j)] + 0.5 * bin_width; }

    // Bin index of a value; -1 below -N, n_bins at or above N.
    int bin_of(double u) const {
        if (u < -N) return -1;
        if (u >= N) return n_bins;
        int j = static_cast<int>((u + N) / bin_width);
        return std::clamp(j, 0, n_bins - 1);
    }
};

inline XiGrid make_xi_grid(double N, int n_bins) {
    if (!(N > 0.0)) throw std::invalid_argument("make_xi_grid: N > 0 required");
    if (n_bins < 8) throw std::invalid_argument("make_xi_grid: n_bins >= 8 required");
    XiGrid g;
    g.N = N;
    g.n_bins = n_bins;
    g.bin_width = 2.0 * N / n_bins;
    g.edges.resize(static_cast<size_t>(n_bins) + 1);
    for (int j = 0; j <= n_bins; ++j) g.edges[static_cast<size_t>(j)] = -N + j * g.bin_width;
    return g;
}

// f_+ = 1_{u > xi}; the conjugate is f_- = f_+ - 1.
inline int kinetic_function(double u, double xi) {
    if (!std::isfinite(u) || !std::isfinite(xi))
        throw std::invalid_argument("kinetic_function: non-finite input");
    return u > xi ? 1 : 0;
}

// Accumulated eps |grad u|^2 dx dt binned by the value of u; mass outside
// [-N, N] lands in the overflow buckets.
struct KineticHistogram {
    XiGrid xi;
    std::vector<double> mass;
    double overflow_hi = 0.0;
    double overflow_lo = 0.0;

    double total() const {
        double s = overflow_hi + overflow_lo;
        for (double m : mass) s += m;
        return s;
    }

    // Mass at or above the given value (including the high overflow bucket).
    double tail_above(double threshold) const {
        double s = overflow_hi;
        for (int j = 0; j < xi.n_bins; ++j)
            if (xi.center(j) > threshold) s += mass[static_cast<size_t>(j)];
        return s;
    }

    // Mass with |xi| >= R.
    double tail_outside(double R) const {
        double s = overflow_hi + overflow_lo;
        for (int j = 0; j < xi.n_bins; ++j)
            if (std::abs(xi.center(j)) >= R) s += mass[static_cast<size_t>(j)];
        return s;
    }

    void merge(const KineticHistogram& other) {
        for (size_t j = 0; j < mass.size(); ++j) mass[j] += other.mass[j];
        overflow_hi += other.overflow_hi;
        overflow_lo += other.overflow_lo;
    }
};

inline KineticHistogram make_histogram(const XiGrid& xi) {
    KineticHistogram h;
    h.xi = xi;
    h.mass.assign(static_cast<size_t>(xi.n_bins), 0.0);
    return h;
}

// Central differences in the interior, one-sided at boundary-adjacent cells.
inline void accumulate_defect(KineticHistogram& hist, const Field& u, double eps, double dt) {
    if (eps == 0.0) return;
    const int n = u.size();
    const double dx = u.grid->dx;
    for (int i = 0; i < n; ++i) {
        double grad;
        if (i == 0)
            grad = (u[1] - u[0]) / dx;
        else if (i == n - 1)
            grad = (u[n - 1] - u[n - 2]) / dx;
        else
            grad = (u[i + 1] - u[i - 1]) / (2.0 * dx);
        double m = eps * grad * grad * dx * dt;
        if (m == 0.0) continue;
        int j = hist.xi.bin_of(u[i]);
        if (j < 0)
            hist.overflow_lo += m;
        else if (j >= hist.xi.n_bins)
            hist.overflow_hi += m;
        else
            hist.mass[static_cast<size_t>(j)] += m;
    }
}

// mu_m(xi) = mean tail mass above xi over a path ensemble.
inline double mu_m(const std::vector<KineticHistogram>& ens, double xi) {
    if (ens.empty()) throw std::invalid_argument("mu_m: empty ensemble");
    double N = ens.front().xi.N;
    double q = std::clamp(xi, -N, N);  // out-of-range levels clamp (with the full/empty tail)
    double s = 0.0;
    for (const auto& h : ens) s += h.tail_above(q);
    return s / static_cast<double>(ens.size());
}

// mu_nu(xi) = mean time-quadrature of dx dt #{(t, x): u > xi}. Works on any
// range of trajectory-like objects exposing times and u_snapshots.
template <class TrajRange>
inline double mu_nu(const TrajRange& ens, double xi) {
    size_t count = 0;
    double s = 0.0;
    for (const auto& traj : ens) {
        ++count;
        double acc = 0.0;
        for (size_t k = 1; k < traj.times.size(); ++k) {
            double w = traj.times[k] - traj.times[k - 1];
            const Field& u = traj.u_snapshots[k];
            int hits = 0;
            for (double v : u.values)
                if (v > xi) ++hits;
            acc += w * u.grid->dx * hits;
        }
        s += acc;
    }
    if (count == 0) throw std::invalid_argument("mu_nu: empty ensemble");
    return s / static_cast<double>(count);
}

struct TailReport {
    std::vector<double> levels;
    std::vector<double> slope_pos;  // finite-difference slope of mu at +level
    std::vector<double> slope_neg;  // ... at -level
};

// Finite-difference slopes of a sampled nonincreasing tail function at the
// requested levels; the claim under test is that they vanish as xi grows.
inline TailReport tail_decay_report(const std::vector<std::pair<double, double>>& mu_samples,
                                    const std::vector<double>& levels) {
    if (mu_samples.size() < 2) throw std::invalid_argument("tail_decay_report: need >= 2 samples");
    auto slope_at = [&](double xi) {
        // nearest sample pair straddling xi
        size_t best = 0;
        for (size_t i = 0; i + 1 < mu_samples.size(); ++i)
            if (mu_samples[i].first <= xi) best = i;
        double dxi = mu_samples[best + 1].first - mu_samples[best].first;
        return (mu_samples[best + 1].second - mu_samples[best].second) / dxi;
    };
    TailReport r;
    r.levels = levels;
    for (double l : levels) {
        r.slope_pos.push_back(slope_at(std::abs(l)));
        r.slope_neg.push_back(slope_at(-std::abs(l)));
    }
    return r;
}

// Layer-averaged kinetic function near one boundary point: the discrete
// analog of the mollified traces f^{lambda,eps}.
struct BoundaryTrace {
    Side side = Side::Left;
    double layer_width = 0.0;
    XiGrid xi;
    std::vector<double> times;
    std::vector<std::vector<double>> f_bar;  // times x n_bins, values in [0, 1]
};

inline BoundaryTrace boundary_trace(const std::vector<double>& times,
                                    const std::vector<Field>& u_snapshots, Side side,
                                    double layer_width, const XiGrid& xi) {
    if (u_snapshots.empty()) throw std::invalid_argument("boundary_trace: no snapshots");
    const Grid& g = *u_snapshots.front().grid;
    if (layer_width < g.dx) throw std::invalid_argument("boundary_trace: layer_width >= dx required");
    int layer = std::min(g.n_cells, static_cast<int>(std::floor(layer_width / g.dx + 1e-12)));
    if (layer < 1) throw std::invalid_argument("boundary_trace: empty layer");
    BoundaryTrace tr;
    tr.side = side;
    tr.layer_width = layer_width;
    tr.xi = xi;
    tr.times = times;
    tr.f_bar.reserve(u_snapshots.size());
    for (const Field& u : u_snapshots) {
        std::vector<double> row(static_cast<size_t>(xi.n_bins), 0.0);
        for (int c = 0; c < layer; ++c) {
            int i = (side == Side::Left) ? c : g.n_cells - 1 - c;
            for (int j = 0; j < xi.n_bins; ++j)
                row[static_cast<size_t>(j)] += kinetic_function(u[i], xi.center(j));
        }
        for (double& v : row) v /= layer;
        tr.f_bar.push_back(std::move(row));
    }
    return tr;
}

// Truncated boundary defect densities evaluated at the xi-bin centers plus
// the endpoint xi = N (last column), where m_bar_plus vanishes identically.
struct DefectMeasure {
    Side side = Side::Left;
    double N = 0.0;
    std::vector<double> times;
    std::vector<double> xi_nodes;               // bin centers then N
    std::vector<std::vector<double>> m_bar_plus;   // times x xi_nodes
    std::vector<std::vector<double>> m_bar_minus;  // times x xi_nodes

    double min_plus() const {
        double m = 0.0;
        for (const auto& row : m_bar_plus)
            for (double v : row) m = std::min(m, v);
        return m;
    }
};

// m_bar_plus(xi) = M_N (u_b - xi)^+ - int_xi^N (-a(eta) n) f_bar_plus(eta) d eta,
// trapezoid quadrature on the trace's xi nodes; m_bar_minus from f_- = f_+ - 1
// integrated up from -N.
inline DefectMeasure defect_measure(const BoundaryTrace& trace, const BoundaryData& b,
                                    const FluxModel& flux, double N) {
    if (!(N > b.sup_norm))
        throw std::invalid_argument("defect_measure: requires N > sup|u_b|");
    if (std::abs(trace.xi.N - N) > 1e-12)
        throw std::invalid_argument("defect_measure: trace xi-grid must span [-N, N]");
    const double nrm = outward_normal(trace.side);
    const XiGrid& xi = trace.xi;
    const int nb = xi.n_bins;

    DefectMeasure d;
    d.side = trace.side;
    d.N = N;
    d.times = trace.times;
    for (int j = 0; j < nb; ++j) d.xi_nodes.push_back(xi.center(j));
    d.xi_nodes.push_back(N);

    const double MN = max_speed(flux, N);
    std::vector<double> speed(static_cast<size_t>(nb));  // -a(c_j) * n
    for (int j = 0; j < nb; ++j) speed[static_cast<size_t>(j)] = -flux.a(xi.center(j)) * nrm;

    for (size_t ti = 0; ti < trace.times.size(); ++ti) {
        double ub = b.value(trace.side, trace.times[ti]);
        const std::vector<double>& f = trace.f_bar[ti];
        std::vector<double> rowp(static_cast<size_t>(nb) + 1, 0.0);
        std::vector<double> rowm(static_cast<size_t>(nb) + 1, 0.0);
        // integral from c_j up to N of (-a n) f_+ : trapezoid between centers,
        // half-bin tail with the last value toward N.
        double acc = 0.5 * xi.bin_width * speed[static_cast<size_t>(nb - 1)] *
                     f[static_cast<size_t>(nb - 1)];
        rowp[static_cast<size_t>(nb)] = 0.0;  // (u_b - N)^+ = 0 and empty integral
        for (int j = nb - 1; j >= 0; --j) {
            if (j < nb - 1) {
                double fa = speed[static_cast<size_t>(j)] * f[static_cast<size_t>(j)];
                double fb = speed[static_cast<size_t>(j + 1)] * f[static_cast<size_t>(j + 1)];
                acc += 0.5 * xi.bin_width * (fa + fb);
            }
            double pos = std::max(ub - xi.center(j), 0.0);
            rowp[static_cast<size_t>(j)] = MN * pos - acc;
        }
        // integral from -N up to c_j of (a n)(1 - f_+) for m_bar_minus.
        double accm = 0.5 * xi.bin_width * (-speed[0]) * (1.0 - f[0]);
        for (int j = 0; j <= nb; ++j) {
            double xj = (j < nb) ? xi.center(j) : N;
            if (j > 0 && j < nb) {
                double fa = (-speed[static_cast<size_t>(j - 1)]) * (1.0 - f[static_cast<size_t>(j - 1)]);
                double fb = (-speed[static_cast<size_t>(j)]) * (1.0 - f[static_cast<size_t>(j)]);
                accm += 0.5 * xi.bin_width * (fa + fb);
            } else if (j == nb) {
                accm += 0.5 * xi.bin_width * (-speed[static_cast<size_t>(nb - 1)]) *
                        (1.0 - f[static_cast<size_t>(nb - 1)]);
            }
            rowm[static_cast<size_t>(j)] = MN * std::max(xj - ub, 0.0) + accm;
        }
        d.m_bar_plus.push_back(std::move(rowp));
        d.m_bar_minus.push_back(std::move(rowm));
    }
    return d;
}

// min over (t, xi) of M_N 1_{u_b > xi} + a(xi) n f_bar_plus; the discrete BLN
// inequality requires this to be >= -tol on converged runs.
inline double bln_check(const BoundaryTrace& trace, const BoundaryData& b,
                        const FluxModel& flux, double N) {
    if (!(N > b.sup_norm)) throw std::invalid_argument("bln_check: requires N > sup|u_b|");
    const double nrm = outward_normal(trace.side);
    const double MN = max_speed(flux, N);
    double worst = std::numeric_limits<double>::infinity();
    for (size_t ti = 0; ti < trace.times.size(); ++ti) {
        double ub = b.value(trace.side, trace.times[ti]);
        for (int j = 0; j < trace.xi.n_bins; ++j) {
            double xi = trace.xi.center(j);
            double v = MN * (ub > xi ? 1.0 : 0.0) +
                       flux.a(xi) * nrm * trace.f_bar[ti][static_cast<size_t>(j)];
            worst = std::min(worst, v);
        }
    }
    return worst;
}

}  // namespace sscl
