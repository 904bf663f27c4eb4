#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sscl/boundary_lift.hpp"
#include "sscl/flux.hpp"
#include "sscl/grid.hpp"
#include "sscl/kinetic.hpp"
#include "sscl/noise.hpp"

namespace sscl {

struct XiSpec {
    double N = 0.0;  // 0 means: pick 4 * max(sup|u0|, sup|u_b|, 1) at run time
    int n_bins = 256;
};

struct SolverConfig {
    double eps = 0.0;
    double cfl = 0.5;
    double t_end = 1.0;
    FluxScheme scheme = FluxScheme::Godunov;
    int K = 8;
    std::uint64_t seed = 0;
    int record_every = 1;
    XiSpec xi;
    bool direct_bc = false;  // impose u_b on u directly instead of the shifted v/lift split

    void validate() const {
        if (eps < 0.0) throw std::invalid_argument("SolverConfig: eps >= 0");
        if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SolverConfig: cfl in (0, 1]");
        if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end > 0");
        if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every >= 1");
        if (xi.n_bins < 8) throw std::invalid_argument("SolverConfig: xi n_bins >= 8");
    }
};

struct EnergyRecord {
    double lp2 = 0.0;   // dx sum v^2
    double lp4 = 0.0;   // dx sum v^4
    double diss2 = 0.0; // eps int int |grad v|^2, cumulative
    double diss4 = 0.0; // eps int int v^2 |grad v|^2, cumulative
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> u_snapshots;  // u = v + lift
    std::vector<Field> v_snapshots;
    KineticHistogram defect_hist;
    std::vector<EnergyRecord> energy;
    double sup_lp2 = 0.0;  // sup over all steps, not just snapshots
    double sup_lp4 = 0.0;
    double dt = 0.0;
    int n_steps = 0;
};

struct BlowUpError : std::runtime_error {
    int step;
    explicit BlowUpError(int s)
        : std::runtime_error("solver blow-up at step " + std::to_string(s)), step(s) {}
};

// Combined advective/diffusive stability step.
inline double cfl_dt(const Grid& grid, const SpeedCap& cap, double eps, double cfl) {
    if (cap.M_N <= 0.0 && eps <= 0.0)
        throw std::invalid_argument("cfl_dt: need M_N > 0 or eps > 0");
    const double tiny = 1e-300;
    double adv = grid.dx / std::max(cap.M_N, tiny);
    double dif = grid.dx * grid.dx / (2.0 * eps + tiny);
    return cfl * std::min(adv, dif);
}

// One explicit step of dv + div A(v + lift) dt = eps v_xx dt + noise, with
// v = 0 on the boundary faces and flux ghost states carrying the boundary
// datum (w = u_b outside the domain).
inline void step(std::vector<double>& v, const std::vector<double>& lift, double bl, double br,
                 double dt, const double* increments, const FluxModel& flux, FluxScheme scheme,
                 double lf_speed, const NoiseTable& noise, double eps, const Grid& grid,
                 std::vector<double>& w, std::vector<double>& fluxes, std::vector<double>& vnew,
                 std::vector<double>& sa, std::vector<double>& sb, int step_index) {
    const int n = grid.n_cells;
    const double dx = grid.dx;
    const double lam = dt / dx;
    const double mu = eps * dt / (dx * dx);

    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] + lift[static_cast<size_t>(i)];

    fluxes[0] = numerical_flux(flux, bl, w[0], scheme, lf_speed);
    for (int i = 1; i < n; ++i)
        fluxes[static_cast<size_t>(i)] =
            numerical_flux(flux, w[static_cast<size_t>(i - 1)], w[static_cast<size_t>(i)], scheme, lf_speed);
    fluxes[static_cast<size_t>(n)] = numerical_flux(flux, w[static_cast<size_t>(n - 1)], br, scheme, lf_speed);

    for (int i = 0; i < n; ++i) {
        double vm = (i == 0) ? -v[0] : v[static_cast<size_t>(i - 1)];
        double vp = (i == n - 1) ? -v[static_cast<size_t>(n - 1)] : v[static_cast<size_t>(i + 1)];
        vnew[static_cast<size_t>(i)] =
            v[static_cast<size_t>(i)] -
            lam * (fluxes[static_cast<size_t>(i + 1)] - fluxes[static_cast<size_t>(i)]) +
            mu * (vp - 2.0 * v[static_cast<size_t>(i)] + vm);
    }
    if (noise.K > 0) noise.apply(w.data(), increments, vnew.data(), sa, sb);
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(vnew[static_cast<size_t>(i)])) throw BlowUpError(step_index);
    v.swap(vnew);
}

// Convenience single-step wrapper on Fields.
inline Field step(const Field& v, const Field& lift, double bl, double br, double dt,
                  const std::vector<double>& increments, const SolverConfig& cfg,
                  const FluxModel& flux, const NoiseModel& noise, double lf_speed = 0.0) {
    NoiseTable table = make_noise_table(noise, *v.grid);
    std::vector<double> w(v.values.size()), fluxes(v.values.size() + 1), vnew(v.values.size()),
        sa, sb;
    Field out = v;
    step(out.values, lift.values, bl, br, dt, increments.data(), flux, cfg.scheme, lf_speed,
         table, cfg.eps, *v.grid, w, fluxes, vnew, sa, sb, 0);
    return out;
}

inline EnergyRecord energy_functional(const Field& v, double grad_sq_accum, int p, double eps) {
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("energy_functional: p must be even, >= 2");
    EnergyRecord e;
    double s = 0.0;
    for (double x : v.values) s += std::pow(std::abs(x), p);
    s *= v.grid->dx;
    if (p == 2)
        e.lp2 = s, e.diss2 = eps * grad_sq_accum;
    else
        e.lp4 = s, e.diss4 = eps * grad_sq_accum;
    return e;
}

// Full viscous run: v(0) = u0, lift carries the boundary data, the kinetic
// histogram accumulates eps |grad u|^2 every step.
inline Trajectory run(const GridPtr& grid, const SolverConfig& cfg, const Field& u0,
                      const BoundaryData& b, const FluxModel& flux, const NoiseModel& noise,
                      const WienerPath& path, const LiftTrajectory* shared_lift = nullptr) {
    cfg.validate();
    if (!all_finite(u0)) throw std::invalid_argument("run: non-finite initial data");
    const int n = grid->n_cells;
    const double dx = grid->dx;
    const double dt = path.dt;
    const int n_steps = path.n_steps;

    double xi_N = cfg.xi.N;
    if (xi_N <= 0.0) {
        double s0 = 0.0;
        for (double v : u0.values) s0 = std::max(s0, std::abs(v));
        xi_N = 4.0 * std::max({s0, b.sup_norm, 1.0});
    }
    SpeedCap cap = make_speed_cap(flux, xi_N);
    double dt_max = cfl_dt(*grid, cap, cfg.eps, cfg.cfl);
    if (dt > dt_max * (1.0 + 1e-9))
        throw std::invalid_argument("run: path.dt violates the CFL bound");
    double lf_speed = cap.M_N;

    LiftTrajectory local_lift;
    const LiftTrajectory* lift = shared_lift;
    if (lift == nullptr) {
        local_lift = solve_lift(grid, b, cfg.direct_bc ? 0.0 : cfg.eps, dt, n_steps);
        lift = &local_lift;
    }
    if (lift->n_steps < n_steps || std::abs(lift->dt - dt) > 1e-12 * std::max(1.0, dt))
        throw std::invalid_argument("run: lift trajectory does not match the time grid");

    NoiseTable table = make_noise_table(noise, *grid);
    if (path.K != table.K)
        throw std::invalid_argument("run: path mode count != noise mode count");

    Trajectory traj;
    traj.dt = dt;
    traj.n_steps = n_steps;
    traj.defect_hist = make_histogram(make_xi_grid(xi_N, cfg.xi.n_bins));

    std::vector<double> v = u0.values;
    std::vector<double> w(static_cast<size_t>(n)), fluxes(static_cast<size_t>(n) + 1),
        vnew(static_cast<size_t>(n)), sa, sb;
    double diss2 = 0.0, diss4 = 0.0;

    Field u_buf = make_field(grid, 0.0);

    auto compose_u = [&](int s) {
        const std::vector<double>& lf = lift->at(std::min(s, lift->n_steps));
        for (int i = 0; i < n; ++i)
            u_buf.values[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] + lf[static_cast<size_t>(i)];
    };
    auto record = [&](int s) {
        compose_u(s);
        traj.times.push_back(s * dt);
        Field vf = make_field(grid, 0.0);
        vf.values = v;
        traj.u_snapshots.push_back(u_buf);
        traj.v_snapshots.push_back(std::move(vf));
        EnergyRecord e;
        for (int i = 0; i < n; ++i) {
            double x = v[static_cast<size_t>(i)];
            e.lp2 += x * x;
            e.lp4 += x * x * x * x;
        }
        e.lp2 *= dx;
        e.lp4 *= dx;
        e.diss2 = diss2;
        e.diss4 = diss4;
        traj.energy.push_back(e);
    };

    record(0);
    traj.sup_lp2 = traj.energy[0].lp2;
    traj.sup_lp4 = traj.energy[0].lp4;

    for (int s = 0; s < n_steps; ++s) {
        double bl = lift->b_left[static_cast<size_t>(s)];
        double br = lift->b_right[static_cast<size_t>(s)];
        if (cfg.direct_bc) {
            // direct mode: v carries u itself; diffusion ghost = 2b - u
            const double lam = dt / dx, mu = cfg.eps * dt / (dx * dx);
            fluxes[0] = numerical_flux(flux, bl, v[0], cfg.scheme, lf_speed);
            for (int i = 1; i < n; ++i)
                fluxes[static_cast<size_t>(i)] = numerical_flux(
                    flux, v[static_cast<size_t>(i - 1)], v[static_cast<size_t>(i)], cfg.scheme, lf_speed);
            fluxes[static_cast<size_t>(n)] =
                numerical_flux(flux, v[static_cast<size_t>(n - 1)], br, cfg.scheme, lf_speed);
            for (int i = 0; i < n; ++i) {
                double vm = (i == 0) ? 2.0 * bl - v[0] : v[static_cast<size_t>(i - 1)];
                double vp = (i == n - 1) ? 2.0 * br - v[static_cast<size_t>(n - 1)]
                                         : v[static_cast<size_t>(i + 1)];
                vnew[static_cast<size_t>(i)] =
                    v[static_cast<size_t>(i)] -
                    lam * (fluxes[static_cast<size_t>(i + 1)] - fluxes[static_cast<size_t>(i)]) +
                    mu * (vp - 2.0 * v[static_cast<size_t>(i)] + vm);
            }
            if (table.K > 0) table.apply(v.data(), path.step(s), vnew.data(), sa, sb);
            for (int i = 0; i < n; ++i)
                if (!std::isfinite(vnew[static_cast<size_t>(i)])) throw BlowUpError(s);
            v.swap(vnew);
        } else {
            step(v, lift->at(s), bl, br, dt, path.K > 0 ? path.step(s) : nullptr, flux,
                 cfg.scheme, lf_speed, table, cfg.eps, *grid, w, fluxes, vnew, sa, sb, s);
        }

        // per-step accumulations on the updated state
        if (cfg.eps > 0.0) {
            compose_u(s + 1);
            accumulate_defect(traj.defect_hist, u_buf, cfg.eps, dt);
            double g2 = 0.0, g4 = 0.0;
            for (int i = 0; i <= n; ++i) {
                double lo = (i == 0) ? -v[0] : v[static_cast<size_t>(i - 1)];
                double hi = (i == n) ? -v[static_cast<size_t>(n - 1)] : v[static_cast<size_t>(i)];
                double g = (hi - lo) / dx;
                double mid = 0.5 * (hi + lo);
                g2 += g * g;
                g4 += mid * mid * g * g;
            }
            diss2 += cfg.eps * g2 * dx * dt;
            diss4 += cfg.eps * g4 * dx * dt;
        }
        double l2 = 0.0, l4 = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = v[static_cast<size_t>(i)];
            l2 += x * x;
            l4 += x * x * x * x;
        }
        traj.sup_lp2 = std::max(traj.sup_lp2, l2 * dx);
        traj.sup_lp4 = std::max(traj.sup_lp4, l4 * dx);

        if ((s + 1) % cfg.record_every == 0 || s + 1 == n_steps) record(s + 1);
    }
    return traj;
}

}  // namespace sscl
