#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sscl/grid.hpp"

namespace sscl {

enum class FluxScheme { Godunov, EngquistOsher, LaxFriedrichs };

inline FluxScheme parse_flux_scheme(const std::string& s) {
    if (s == "godunov") return FluxScheme::Godunov;
    if (s == "engquist_osher" || s == "eo") return FluxScheme::EngquistOsher;
    if (s == "lax_friedrichs" || s == "lf") return FluxScheme::LaxFriedrichs;
    throw std::invalid_argument("unknown flux scheme: " + s);
}

// Flux law A with characteristic speed a = A'. Built-in models record the
// roots of a so Godunov extrema and Engquist-Osher sign splitting are exact.
struct FluxModel {
    std::string name;
    std::function<double(double)> A;
    std::function<double(double)> a;
    std::function<double(double)> a_prime;  // A''; may be empty
    bool convex = false;
    bool a_monotone = false;  // |a| attains its max at interval endpoints
    double a2_bound = 0.0;    // declared sup|A''| when a_prime is set
    std::vector<double> sonic_points;  // roots of a, ascending
};

inline FluxModel burgers_flux() {
    FluxModel m;
    m.name = "burgers";
    m.A = [](double u) { return 0.5 * u * u; };
    m.a = [](double u) { return u; };
    m.a_prime = [](double) { return 1.0; };
    m.convex = true;
    m.a_monotone = true;
    m.a2_bound = 1.0;
    m.sonic_points = {0.0};
    return m;
}

inline FluxModel linear_flux(double c) {
    FluxModel m;
    m.name = "linear";
    m.A = [c](double u) { return c * u; };
    m.a = [c](double) { return c; };
    m.a_prime = [](double) { return 0.0; };
    m.convex = true;
    m.a_monotone = true;
    m.a2_bound = 0.0;
    if (c == 0.0) m.sonic_points = {0.0};
    return m;
}

inline FluxModel cubic_flux() {
    FluxModel m;
    m.name = "cubic";
    m.A = [](double u) { return u * u * u / 3.0; };
    m.a = [](double u) { return u * u; };
    m.a_prime = [](double u) { return 2.0 * u; };
    m.convex = false;      // A is not convex, but a >= 0
    m.a_monotone = false;  // |a| is even in xi; max still at endpoints
    m.sonic_points = {0.0};
    return m;
}

// max |a| over [-N, N]. Closed form (endpoints + sonic points) when the model
// declares monotone a or lists all roots of a; dense sampling otherwise.
inline double max_speed(const FluxModel& m, double N) {
    if (!(N > 0.0)) throw std::invalid_argument("max_speed: N > 0 required");
    auto check = [&](double s) {
        if (!std::isfinite(s))
            throw std::runtime_error("max_speed: non-finite speed for flux " + m.name);
        return std::abs(s);
    };
    if (m.a_monotone) {
        return std::max(check(m.a(-N)), check(m.a(N)));
    }
    double best = std::max(check(m.a(-N)), check(m.a(N)));
    const int n = 100001;
    for (int i = 0; i < n; ++i) {
        double xi = -N + 2.0 * N * i / (n - 1);
        best = std::max(best, check(m.a(xi)));
    }
    return best;
}

// Truncation level N with the associated speed caps.
struct SpeedCap {
    double N = 0.0;
    double M_N = 0.0;  // max |a| on [-N, N]
    double M_b = 0.0;  // max |a| on the boundary-data range
};

inline SpeedCap make_speed_cap(const FluxModel& m, double N) {
    SpeedCap c;
    c.N = N;
    c.M_N = max_speed(m, N);
    return c;
}

inline double boundary_speed_cap(const FluxModel& m, const BoundaryData& b1,
                                 const BoundaryData& b2) {
    double r = std::max(b1.sup_norm, b2.sup_norm);
    if (r == 0.0) return 0.0;
    return max_speed(m, r);
}

namespace detail {

// Signed integral of |a| from p to q, split at the sonic points so each piece
// is |A(end) - A(start)| exactly.
inline double integral_abs_a(const FluxModel& m, double p, double q) {
    double sign = 1.0;
    if (p > q) {
        std::swap(p, q);
        sign = -1.0;
    }
    std::vector<double> nodes{p};
    for (double s : m.sonic_points)
        if (s > p && s < q) nodes.push_back(s);
    nodes.push_back(q);
    double total = 0.0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        total += std::abs(m.A(nodes[i + 1]) - m.A(nodes[i]));
    return sign * total;
}

inline double min_max_A(const FluxModel& m, double lo, double hi, bool want_min) {
    double best = want_min ? std::min(m.A(lo), m.A(hi)) : std::max(m.A(lo), m.A(hi));
    for (double s : m.sonic_points) {
        if (s > lo && s < hi) {
            double v = m.A(s);
            best = want_min ? std::min(best, v) : std::max(best, v);
        }
    }
    return best;
}

}  // namespace detail

// Monotone two-point numerical flux; consistent with A by construction.
inline double numerical_flux(const FluxModel& m, double u_left, double u_right,
                             FluxScheme scheme, double lf_speed = 0.0) {
    if (!std::isfinite(u_left) || !std::isfinite(u_right))
        throw std::invalid_argument("numerical_flux: non-finite state");
    switch (scheme) {
        case FluxScheme::Godunov:
            if (u_left <= u_right)
                return detail::min_max_A(m, u_left, u_right, /*want_min=*/true);
            return detail::min_max_A(m, u_right, u_left, /*want_min=*/false);
        case FluxScheme::EngquistOsher:
            return 0.5 * (m.A(u_left) + m.A(u_right)) -
                   0.5 * detail::integral_abs_a(m, u_left, u_right);
        case FluxScheme::LaxFriedrichs:
            if (!(lf_speed > 0.0) && u_left != u_right)
                throw std::invalid_argument("numerical_flux: Lax-Friedrichs needs a speed bound");
            return 0.5 * (m.A(u_left) + m.A(u_right)) - 0.5 * lf_speed * (u_right - u_left);
    }
    throw std::invalid_argument("numerical_flux: unknown scheme");
}

// Finite-difference consistency of a with A on a sampled xi-grid, and of the
// declared A'' bound when present.
inline void validate_flux(const FluxModel& m, double xi_lo, double xi_hi,
                          int n_samples = 257, double h = 1e-4, double C = 10.0) {
    for (int i = 0; i < n_samples; ++i) {
        double xi = xi_lo + (xi_hi - xi_lo) * i / (n_samples - 1);
        double fd = (m.A(xi + h) - m.A(xi - h)) / (2.0 * h);
        if (std::abs(fd - m.a(xi)) > C * h * h + 1e-9)
            throw std::runtime_error("validate_flux: a is inconsistent with A for " + m.name);
        if (m.a_prime && m.a2_bound > 0.0) {
            if (std::abs(m.a_prime(xi)) > m.a2_bound * (1.0 + 1e-12))
                throw std::runtime_error("validate_flux: |A''| exceeds declared bound for " + m.name);
        }
    }
}

}  // namespace sscl
