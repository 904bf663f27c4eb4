#include <catch2/catch_amalgamated.hpp>

#include "sscl/noise.hpp"

using namespace sscl;

namespace {
GridPtr unit_grid(int n) { return make_grid(0.0, 1.0, n); }
}  // namespace

TEST_CASE("sample_path determinism and degenerate cases") {
    WienerPath a = sample_path(42, 100, 0.01, 4);
    WienerPath b = sample_path(42, 100, 0.01, 4);
    CHECK(a.increments == b.increments);

    WienerPath other = sample_path(43, 100, 0.01, 4);
    CHECK(a.increments != other.increments);

    WienerPath det = sample_path(42, 100, 0.01, 0);
    CHECK(det.increments.empty());

    CHECK_THROWS_AS(sample_path(1, 10, -0.1, 2), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(1, 10, 0.01, -1), std::invalid_argument);
    CHECK_THROWS_AS(sample_path(1, 0, 0.01, 2), std::invalid_argument);
}

TEST_CASE("increment variance matches dt") {
    const double dt = 0.01;
    const int n_steps = 10000, K = 4;
    WienerPath p = sample_path(7, n_steps, dt, K);
    for (int k = 0; k < K; ++k) {
        double s = 0.0, s2 = 0.0;
        for (int n = 0; n < n_steps; ++n) {
            double v = p.step(n)[k];
            s += v;
            s2 += v * v;
        }
        double mean = s / n_steps;
        double var = s2 / n_steps - mean * mean;
        CHECK(var > 0.0095);
        CHECK(var < 0.0105);
    }
}

TEST_CASE("derived path seeds are distinct and stable") {
    CHECK(derive_path_seed(1, 0) != derive_path_seed(1, 1));
    CHECK(derive_path_seed(1, 0) != derive_path_seed(2, 0));
    CHECK(derive_path_seed(99, 17) == derive_path_seed(99, 17));
}

TEST_CASE("noise_increment spot values") {
    auto g = unit_grid(8);
    NoiseModel lin = linear_multiplicative_noise(0.5, 1);
    Field u = make_field(g, 2.0);
    Field out = noise_increment(lin, u, {0.1});
    for (double v : out.values) CHECK(v == Catch::Approx(0.1));  // 0.5 * 2 * 0.1

    Field zero = noise_increment(lin, u, {0.0});
    for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("additive noise output is independent of the state") {
    auto g = unit_grid(16);
    NoiseModel add = additive_noise({0.3, 0.4});
    Field u1 = make_field(g, -5.0), u2 = make_field(g, 7.0);
    std::vector<double> db{0.2, -0.1};
    Field o1 = noise_increment(add, u1, db);
    Field o2 = noise_increment(add, u2, db);
    CHECK(o1.values == o2.values);
}

TEST_CASE("linear multiplicative noise is linear in the state") {
    auto g = unit_grid(16);
    NoiseModel lin = linear_multiplicative_noise(0.25, 4);
    Field u = make_field(g, [](double x) { return std::sin(3.0 * x) + 0.2; });
    std::vector<double> db{0.05, -0.02, 0.01, 0.03};
    Field base = noise_increment(lin, u, db);
    double c = -2.5;
    Field cu = u;
    for (double& v : cu.values) v *= c;
    Field scaled = noise_increment(lin, cu, db);
    for (int i = 0; i < g->n_cells; ++i)
        CHECK(scaled[i] == Catch::Approx(c * base[i]).margin(1e-15));
}

TEST_CASE("g_squared values and growth bound") {
    NoiseModel lin = linear_multiplicative_noise(0.5, 1);
    CHECK(g_squared(lin, 0.3, 2.0) == Catch::Approx(1.0));

    // two additive modes evaluated where both basis functions are 1
    NoiseModel add = additive_noise({0.3, 0.4});
    double x = 0.5;  // sin(pi/2) = 1, sin(pi) = 0
    CHECK(g_squared(add, x, 0.0) == Catch::Approx(0.09));

    for (const NoiseModel& m : {lin, add, affine_multiplicative_noise(0.1, 0.2, 3)}) {
        for (double xi : {-3.0, -0.5, 0.0, 1.0, 4.0})
            for (double xx : {0.0, 0.25, 0.9})
                CHECK(g_squared(m, xx, xi) <= m.L * (1.0 + xi * xi));
    }
}

TEST_CASE("validate_bounds passes for the built-in models") {
    CHECK_NOTHROW(validate_bounds(linear_multiplicative_noise(0.25, 8), 0.0, 1.0, 5.0));
    CHECK_NOTHROW(validate_bounds(additive_noise({0.5, 0.25, 0.125}), 0.0, 1.0, 5.0));
    CHECK_NOTHROW(validate_bounds(affine_multiplicative_noise(0.1, 0.2, 4), 0.0, 1.0, 5.0));

    NoiseModel bad = linear_multiplicative_noise(1.0, 2);
    bad.L = 1e-6;
    CHECK_THROWS_AS(validate_bounds(bad, 0.0, 1.0, 5.0), std::runtime_error);
}

TEST_CASE("noise table agrees with the direct evaluation") {
    auto g = unit_grid(32);
    for (const NoiseModel& m : {linear_multiplicative_noise(0.25, 8), additive_noise({0.3, 0.2}),
                                affine_multiplicative_noise(0.1, 0.2, 4)}) {
        NoiseTable t = make_noise_table(m, *g);
        Field u = make_field(g, [](double x) { return 2.0 * std::cos(5.0 * x); });
        std::vector<double> db(static_cast<size_t>(m.K()));
        for (size_t k = 0; k < db.size(); ++k) db[k] = 0.01 * (static_cast<double>(k) - 1.5);
        Field direct = noise_increment(m, u, db);
        std::vector<double> out(static_cast<size_t>(g->n_cells), 0.0), sa, sb;
        t.apply(u.values.data(), db.data(), out.data(), sa, sb);
        for (int i = 0; i < g->n_cells; ++i)
            CHECK(out[static_cast<size_t>(i)] == Catch::Approx(direct[i]).margin(1e-14));
    }
}
