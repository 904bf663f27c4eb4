#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sscl/solver.hpp"

using namespace sscl;

namespace {

Trajectory run_deterministic_case(const GridPtr& g, SolverConfig cfg, const Field& u0,
                                  const BoundaryData& b, const FluxModel& flux) {
    SpeedCap cap = make_speed_cap(flux, cfg.xi.N > 0.0 ? cfg.xi.N : 4.0);
    double dt_max = cfl_dt(*g, cap, cfg.eps, cfg.cfl);
    int n_steps = static_cast<int>(std::ceil(cfg.t_end / dt_max));
    WienerPath path = sample_path(1, n_steps, cfg.t_end / n_steps, 0);
    return run(g, cfg, u0, b, flux, no_noise(), path);
}

}  // namespace

TEST_CASE("cfl_dt closed forms") {
    auto g1 = make_grid(0.0, 1.0, 100);  // dx = 0.01
    CHECK(cfl_dt(*g1, SpeedCap{1.0, 1.0, 0.0}, 0.0, 0.5) == Catch::Approx(0.005));
    CHECK(cfl_dt(*g1, SpeedCap{1.0, 0.0, 0.0}, 0.1, 1.0) == Catch::Approx(5e-4));
    auto g2 = make_grid(0.0, 1.0, 10);  // dx = 0.1
    CHECK(cfl_dt(*g2, SpeedCap{1.0, 2.0, 0.0}, 0.05, 1.0) == Catch::Approx(0.05));
    CHECK_THROWS_AS(cfl_dt(*g1, SpeedCap{1.0, 0.0, 0.0}, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
    auto g = make_grid(0.0, 1.0, 32);
    SolverConfig cfg;
    cfg.eps = 0.05;
    cfg.t_end = 0.3;
    cfg.xi.N = 2.0;
    Trajectory t = run_deterministic_case(g, cfg, make_field(g, 0.0),
                                          constant_boundary(0.0, 0.0), burgers_flux());
    for (double v : t.u_snapshots.back().values) CHECK(v == 0.0);
    CHECK(t.sup_lp2 == 0.0);
    CHECK(t.energy.back().diss2 == 0.0);
}

TEST_CASE("single upwind step matches the hand computation") {
    auto g = make_grid(0.0, 1.0, 4);  // dx = 0.25
    Field v = make_field(g, 0.0);
    v[0] = 1.0;
    v[1] = 2.0;
    v[2] = 3.0;
    v[3] = 4.0;
    SolverConfig cfg;
    cfg.eps = 0.0;
    double dt = 0.1;  // lambda = 0.4
    Field out = step(v, make_field(g, 0.0), 0.0, 0.0, dt, {}, cfg, linear_flux(1.0), no_noise());
    // Godunov reduces to upwinding for an increasing linear flux
    CHECK(out[0] == Catch::Approx(0.6));
    CHECK(out[1] == Catch::Approx(1.6));
    CHECK(out[2] == Catch::Approx(2.6));
    CHECK(out[3] == Catch::Approx(3.6));
}

TEST_CASE("Riemann shock travels at speed one half") {
    auto g = make_grid(-0.5, 0.5, 100);
    SolverConfig cfg;
    cfg.eps = 0.0;
    cfg.cfl = 0.4;
    cfg.t_end = 0.25;
    cfg.xi.N = 2.0;
    Field u0 = make_field(g, [](double x) { return x < 0.0 ? 1.0 : 0.0; });
    Trajectory t = run_deterministic_case(g, cfg, u0, constant_boundary(1.0, 0.0),
                                          burgers_flux());
    // total mass places the front for a 1/0 step profile
    double front = g->x_left + l1_norm(t.u_snapshots.back());
    CHECK(std::abs(front - 0.125) <= 2.0 * g->dx);
}

TEST_CASE("runs are bitwise deterministic for a fixed path") {
    auto g = make_grid(0.0, 1.0, 40);
    SolverConfig cfg;
    cfg.eps = 0.02;
    cfg.t_end = 0.1;
    cfg.K = 4;
    cfg.xi.N = 4.0;
    NoiseModel noise = linear_multiplicative_noise(0.25, 4);
    SpeedCap cap = make_speed_cap(burgers_flux(), cfg.xi.N);
    double dt_max = cfl_dt(*g, cap, cfg.eps, cfg.cfl);
    int n_steps = static_cast<int>(std::ceil(cfg.t_end / dt_max));
    WienerPath path = sample_path(77, n_steps, cfg.t_end / n_steps, 4);
    Field u0 = make_field(g, [](double x) { return std::sin(2.0 * 3.141592653589793 * x); });
    BoundaryData b = constant_boundary(0.2, -0.1);
    Trajectory t1 = run(g, cfg, u0, b, burgers_flux(), noise, path);
    Trajectory t2 = run(g, cfg, u0, b, burgers_flux(), noise, path);
    REQUIRE(t1.u_snapshots.size() == t2.u_snapshots.size());
    for (size_t s = 0; s < t1.u_snapshots.size(); ++s)
        CHECK(t1.u_snapshots[s].values == t2.u_snapshots[s].values);
    CHECK(t1.sup_lp2 == t2.sup_lp2);
}

TEST_CASE("one step conserves mass up to the boundary fluxes") {
    auto g = make_grid(0.0, 1.0, 16);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field v = make_field(g, 0.0);
    for (int i = 0; i < g->n_cells; ++i) v[i] = uni(gen);
    double bl = 0.4, br = -0.3, eps = 0.05, dt = 5e-4;
    SolverConfig cfg;
    cfg.eps = eps;
    Field out = step(v, make_field(g, 0.0), bl, br, dt, {}, cfg, burgers_flux(), no_noise());

    FluxModel flux = burgers_flux();
    double f_in = numerical_flux(flux, bl, v[0], FluxScheme::Godunov);
    double f_out = numerical_flux(flux, v[g->n_cells - 1], br, FluxScheme::Godunov);
    // the interior flux and diffusion differences telescope exactly
    double mass_before = 0.0, mass_after = 0.0;
    for (int i = 0; i < g->n_cells; ++i) {
        mass_before += v[i];
        mass_after += out[i];
    }
    mass_before *= g->dx;
    mass_after *= g->dx;
    double expected = mass_before - dt * (f_out - f_in) -
               (eps * dt / g->dx) * 2.0 * (v[0] + v[g->n_cells - 1]);
    CHECK(mass_after == Catch::Approx(expected).margin(1e-14));
}

TEST_CASE("monotone scheme preserves ordering of initial data") {
    auto g = make_grid(0.0, 1.0, 24);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    Field v1 = make_field(g, 0.0), v2 = make_field(g, 0.0);
    for (int i = 0; i < g->n_cells; ++i) {
        v1[i] = uni(gen);
        v2[i] = v1[i] + bump(gen);
    }
    SolverConfig cfg;
    cfg.eps = 0.02;
    double dt = 0.5 * cfl_dt(*g, make_speed_cap(burgers_flux(), 2.0), cfg.eps, 1.0);
    Field lift = make_field(g, 0.0);
    for (int n = 0; n < 20; ++n) {
        v1 = step(v1, lift, 0.1, 0.1, dt, {}, cfg, burgers_flux(), no_noise(), 2.0);
        v2 = step(v2, lift, 0.1, 0.1, dt, {}, cfg, burgers_flux(), no_noise(), 2.0);
        for (int i = 0; i < g->n_cells; ++i) CHECK(v1[i] <= v2[i] + 1e-12);
    }
}

TEST_CASE("energy_functional closed forms") {
    auto g = make_grid(0.0, 1.0, 400);
    Field v = make_field(g, [](double x) { return x; });
    EnergyRecord e2 = energy_functional(v, 3.0, 2, 0.1);
    CHECK(e2.lp2 == Catch::Approx(1.0 / 3.0).margin(1e-4));
    CHECK(e2.diss2 == Catch::Approx(0.3));
    EnergyRecord e4 = energy_functional(v, 2.0, 4, 0.5);
    CHECK(e4.lp4 == Catch::Approx(0.2).margin(1e-4));
    CHECK(e4.diss4 == Catch::Approx(1.0));
    CHECK_THROWS_AS(energy_functional(v, 0.0, 3, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(energy_functional(v, 0.0, 0, 0.1), std::invalid_argument);
}

TEST_CASE("non-finite states raise BlowUpError") {
    auto g = make_grid(0.0, 1.0, 4);
    Field v = make_field(g, 1e160);  // A(v) overflows, flux differences become NaN
    SolverConfig cfg;
    cfg.eps = 0.0;
    CHECK_THROWS_AS(step(v, make_field(g, 0.0), 0.0, 0.0, 0.1, {}, cfg, burgers_flux(),
                         no_noise()),
                    BlowUpError);
}

TEST_CASE("run rejects a path that violates the CFL bound") {
    auto g = make_grid(0.0, 1.0, 50);
    SolverConfig cfg;
    cfg.eps = 0.05;
    cfg.t_end = 0.1;
    cfg.xi.N = 2.0;
    WienerPath path = sample_path(1, 10, 0.01, 0);  // dt far above the stability limit
    CHECK_THROWS_AS(run(g, cfg, make_field(g, 0.5), constant_boundary(0.0, 0.0), burgers_flux(),
                        no_noise(), path),
                    std::invalid_argument);
}

TEST_CASE("direct and shifted boundary treatments agree on a steady problem") {
    auto g = make_grid(0.0, 1.0, 100);
    SolverConfig cfg;
    cfg.eps = 0.05;
    cfg.t_end = 0.5;
    cfg.cfl = 0.4;
    cfg.xi.N = 2.0;
    Field u0 = make_field(g, 1.0);
    BoundaryData b = constant_boundary(1.0, 0.0);
    Trajectory shifted = run_deterministic_case(g, cfg, u0, b, burgers_flux());
    cfg.direct_bc = true;
    Trajectory direct = run_deterministic_case(g, cfg, u0, b, burgers_flux());
    CHECK(l1_distance(shifted.u_snapshots.back(), direct.u_snapshots.back()) <= 0.05);
}
