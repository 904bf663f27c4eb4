#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sscl/grid.hpp"

namespace sscl {

enum class LiftScheme { Implicit, Explicit };

struct LiftBounds {
    double sup_u = 0.0;
    double sup_grad = 0.0;
    double sup_dt = 0.0;
    double sup_eps_lap = 0.0;
};

// Discrete solution of d/dt w = eps w_xx with w(0) = 0 and Dirichlet data on
// the two boundary faces. Zero boundary data is stored compactly: the whole
// trajectory is identically zero and at() serves a shared zero vector.
struct LiftTrajectory {
    GridPtr grid;
    double eps = 0.0;
    double dt = 0.0;
    int n_steps = 0;
    bool zero = false;
    std::vector<std::vector<double>> fields;  // n_steps + 1 entries unless zero
    std::vector<double> b_left;               // boundary samples at each step time
    std::vector<double> b_right;
    LiftBounds bounds;

    const std::vector<double>& at(int step) const {
        if (zero) return zero_field_;
        return fields[static_cast<size_t>(step)];
    }

    std::vector<double> zero_field_;  // sized n_cells when zero
};

namespace detail {

// Thomas algorithm; diag/upper/lower are overwritten.
inline void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                              std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t n = diag.size();
    for (size_t i = 1; i < n; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace detail

inline LiftTrajectory solve_lift(const GridPtr& grid, const BoundaryData& b, double eps,
                                 double dt, int n_steps,
                                 LiftScheme scheme = LiftScheme::Implicit) {
    if (eps < 0.0) throw std::invalid_argument("solve_lift: eps >= 0 required");
    if (!(dt > 0.0) || n_steps < 1) throw std::invalid_argument("solve_lift: bad time grid");
    const int n = grid->n_cells;
    const double dx = grid->dx;
    const double r = eps * dt / (dx * dx);
    if (scheme == LiftScheme::Explicit && eps > 0.0 && dt > dx * dx / (2.0 * eps))
        throw std::invalid_argument("solve_lift: explicit scheme violates dt <= dx^2/(2 eps)");

    LiftTrajectory out;
    out.grid = grid;
    out.eps = eps;
    out.dt = dt;
    out.n_steps = n_steps;
    out.b_left.resize(static_cast<size_t>(n_steps) + 1);
    out.b_right.resize(static_cast<size_t>(n_steps) + 1);
    for (int s = 0; s <= n_steps; ++s) {
        out.b_left[static_cast<size_t>(s)] = b.value(Side::Left, s * dt);
        out.b_right[static_cast<size_t>(s)] = b.value(Side::Right, s * dt);
    }

    if (b.sup_norm == 0.0 || eps == 0.0) {
        // No data or no diffusion: the interior never leaves zero.
        out.zero = true;
        out.zero_field_.assign(static_cast<size_t>(n), 0.0);
        return out;
    }

    out.fields.assign(static_cast<size_t>(n_steps) + 1,
                      std::vector<double>(static_cast<size_t>(n), 0.0));
    std::vector<double> lower(static_cast<size_t>(n)), diag(static_cast<size_t>(n)),
        upper(static_cast<size_t>(n)), rhs(static_cast<size_t>(n));

    LiftBounds bd;
    for (int s = 0; s < n_steps; ++s) {
        const std::vector<double>& w = out.fields[static_cast<size_t>(s)];
        std::vector<double>& wn = out.fields[static_cast<size_t>(s) + 1];
        double bl = out.b_left[static_cast<size_t>(s) + 1];
        double br = out.b_right[static_cast<size_t>(s) + 1];
        if (scheme == LiftScheme::Implicit) {
            // Face-value Dirichlet via ghost cells 2b - w_0.
            for (int i = 0; i < n; ++i) {
                lower[static_cast<size_t>(i)] = -r;
                upper[static_cast<size_t>(i)] = -r;
                diag[static_cast<size_t>(i)] = 1.0 + 2.0 * r;
                rhs[static_cast<size_t>(i)] = w[static_cast<size_t>(i)];
            }
            diag[0] = 1.0 + 3.0 * r;
            diag[static_cast<size_t>(n - 1)] = 1.0 + 3.0 * r;
            rhs[0] += 2.0 * r * bl;
            rhs[static_cast<size_t>(n - 1)] += 2.0 * r * br;
            detail::solve_tridiagonal(lower, diag, upper, rhs);
            wn = rhs;
        } else {
            double bl0 = out.b_left[static_cast<size_t>(s)];
            double br0 = out.b_right[static_cast<size_t>(s)];
            for (int i = 0; i < n; ++i) {
                double wm = (i == 0) ? 2.0 * bl0 - w[0] : w[static_cast<size_t>(i - 1)];
                double wp = (i == n - 1) ? 2.0 * br0 - w[static_cast<size_t>(n - 1)]
                                         : w[static_cast<size_t>(i + 1)];
                wn[static_cast<size_t>(i)] =
                    w[static_cast<size_t>(i)] +
                    r * (wp - 2.0 * w[static_cast<size_t>(i)] + wm);
            }
        }
        for (int i = 0; i < n; ++i) {
            double v = wn[static_cast<size_t>(i)];
            if (!std::isfinite(v)) throw std::runtime_error("solve_lift: non-finite value");
            bd.sup_u = std::max(bd.sup_u, std::abs(v));
            bd.sup_dt = std::max(bd.sup_dt, std::abs(v - w[static_cast<size_t>(i)]) / dt);
        }
        for (int i = 0; i <= n; ++i) {
            double lo = (i == 0) ? bl : wn[static_cast<size_t>(i - 1)];
            double hi = (i == n) ? br : wn[static_cast<size_t>(i)];
            double h = (i == 0 || i == n) ? 0.5 * dx : dx;
            bd.sup_grad = std::max(bd.sup_grad, std::abs(hi - lo) / h);
        }
        for (int i = 0; i < n; ++i) {
            double wm = (i == 0) ? 2.0 * bl - wn[0] : wn[static_cast<size_t>(i - 1)];
            double wp = (i == n - 1) ? 2.0 * br - wn[static_cast<size_t>(n - 1)]
                                     : wn[static_cast<size_t>(i + 1)];
            double lap = (wp - 2.0 * wn[static_cast<size_t>(i)] + wm) / (dx * dx);
            bd.sup_eps_lap = std::max(bd.sup_eps_lap, std::abs(eps * lap));
        }
    }
    out.bounds = bd;
    return out;
}

}  // namespace sscl
