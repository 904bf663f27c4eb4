#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sscl/grid.hpp"

namespace sscl {

enum class NoiseKind { None, Additive, LinearMultiplicative, AffineMultiplicative, Custom };

inline NoiseKind parse_noise_kind(const std::string& s) {
    if (s == "none") return NoiseKind::None;
    if (s == "additive") return NoiseKind::Additive;
    if (s == "linear_multiplicative") return NoiseKind::LinearMultiplicative;
    if (s == "affine_multiplicative") return NoiseKind::AffineMultiplicative;
    if (s == "custom") return NoiseKind::Custom;
    throw std::invalid_argument("unknown noise kind: " + s);
}

// One noise coefficient g_k(x, xi) = spatial(x) * (alpha + beta * clip(xi)).
// The separable form keeps the per-step solver kernel free of per-cell
// function calls; custom models can still supply arbitrary spatial profiles.
struct NoiseMode {
    std::function<double(double)> spatial;
    double alpha = 0.0;
    double beta = 0.0;
};

struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    std::string name = "none";
    std::vector<NoiseMode> modes;
    double L = 0.0;                           // growth constant of the sampled bounds
    std::function<double(double)> modulus;    // r in the continuity bound
    double clip = 1e3;                        // Lipschitz clamp of xi (the Phi^eps choice)

    int K() const { return static_cast<int>(modes.size()); }

    double clamp_xi(double xi) const {
        return std::clamp(xi, -clip, clip);
    }

    double g(int k, double x, double xi) const {
        const NoiseMode& m = modes[static_cast<size_t>(k)];
        return m.spatial(x) * (m.alpha + m.beta * clamp_xi(xi));
    }
};

inline NoiseModel no_noise() {
    NoiseModel n;
    n.kind = NoiseKind::None;
    n.name = "none";
    n.L = 0.0;
    n.modulus = [](double s) { return s; };
    return n;
}

// g_k(x, xi) = sigma_k sin(k pi x), independent of xi.
inline NoiseModel additive_noise(std::vector<double> sigmas) {
    NoiseModel n;
    n.kind = NoiseKind::Additive;
    n.name = "additive";
    double L = 0.0;
    int k = 1;
    for (double s : sigmas) {
        NoiseMode m;
        double freq = k * M_PI;
        m.spatial = [s, freq](double x) { return s * std::sin(freq * x); };
        m.alpha = 1.0;
        m.beta = 0.0;
        n.modes.push_back(std::move(m));
        L += s * s * (1.0 + freq * freq);
        ++k;
    }
    n.L = std::max(L, 1e-12);
    n.modulus = [](double s) { return s; };
    return n;
}

// g_1 = sigma xi; higher modes add spatial structure with 1/k weights so the
// series bound sum g_k^2 <= L (1 + xi^2) stays explicit.
inline NoiseModel linear_multiplicative_noise(double sigma, int K) {
    if (K < 1) throw std::invalid_argument("linear_multiplicative_noise: K >= 1");
    NoiseModel n;
    n.kind = NoiseKind::LinearMultiplicative;
    n.name = "linear_multiplicative";
    for (int k = 1; k <= K; ++k) {
        NoiseMode m;
        if (k == 1) {
            m.spatial = [](double) { return 1.0; };
        } else {
            double freq = (k - 1) * M_PI;
            double w = 1.0 / k;
            m.spatial = [freq, w](double x) { return w * std::sin(freq * x); };
        }
        m.alpha = 0.0;
        m.beta = sigma;
        n.modes.push_back(std::move(m));
    }
    // Growth: sum g_k^2 <= sigma^2 (1 + pi^2/6) xi^2. The x-Lipschitz constant
    // carries the xi clamp, so L scales with clip^2; the bound stays valid
    // uniformly because g clamps xi internally.
    n.L = 2.0 * sigma * sigma *
          (1.0 + M_PI * M_PI / 6.0 + n.clip * n.clip * K * M_PI * M_PI);
    n.modulus = [](double s) { return s; };
    return n;
}

inline NoiseModel affine_multiplicative_noise(double alpha, double beta, int K) {
    if (K < 1) throw std::invalid_argument("affine_multiplicative_noise: K >= 1");
    NoiseModel n;
    n.kind = NoiseKind::AffineMultiplicative;
    n.name = "affine_multiplicative";
    for (int k = 1; k <= K; ++k) {
        NoiseMode m;
        double freq = k * M_PI;
        double w = 1.0 / k;
        m.spatial = [freq, w](double x) { return w * std::cos(freq * x); };
        m.alpha = alpha;
        m.beta = beta;
        n.modes.push_back(std::move(m));
    }
    double amp = std::abs(alpha) + std::abs(beta) * n.clip;
    n.L = 4.0 * (std::max(alpha * alpha, beta * beta) * (1.0 + M_PI * M_PI / 6.0) +
                 amp * amp * K * M_PI * M_PI);
    n.modulus = [](double s) { return s; };
    return n;
}

// G^2(x, xi) = sum_k g_k(x, xi)^2.
inline double g_squared(const NoiseModel& n, double x, double xi) {
    if (!std::isfinite(x) || !std::isfinite(xi))
        throw std::invalid_argument("g_squared: non-finite input");
    double s = 0.0;
    for (int k = 0; k < n.K(); ++k) {
        double g = n.g(k, x, xi);
        s += g * g;
    }
    return s;
}

// Sampled checks of the growth bound sum g_k^2 <= L (1 + xi^2) and the
// continuity bound in (x, xi) with modulus r.
inline void validate_bounds(const NoiseModel& n, double x_lo, double x_hi,
                            double xi_max, int n_samples = 33) {
    if (n.K() == 0) return;
    auto xs = [&](int i) { return x_lo + (x_hi - x_lo) * i / (n_samples - 1); };
    auto xis = [&](int i) { return -xi_max + 2.0 * xi_max * i / (n_samples - 1); };
    for (int i = 0; i < n_samples; ++i)
        for (int j = 0; j < n_samples; ++j) {
            double G2 = g_squared(n, xs(i), xis(j));
            if (G2 > n.L * (1.0 + xis(j) * xis(j)) * (1.0 + 1e-12))
                throw std::runtime_error("validate_bounds: growth bound violated for " + n.name);
        }
    const int q = 9;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            for (int p = 0; p < q; ++p)
                for (int r = 0; r < q; ++r) {
                    double x = x_lo + (x_hi - x_lo) * i / (q - 1);
                    double y = x_lo + (x_hi - x_lo) * j / (q - 1);
                    double xi = -xi_max + 2.0 * xi_max * p / (q - 1);
                    double ze = -xi_max + 2.0 * xi_max * r / (q - 1);
                    double s = 0.0;
                    for (int k = 0; k < n.K(); ++k) {
                        double d = n.g(k, x, xi) - n.g(k, y, ze);
                        s += d * d;
                    }
                    double dxy = x - y, dxz = std::abs(xi - ze);
                    double rhs = n.L * (dxy * dxy + dxz * n.modulus(dxz));
                    if (s > rhs * (1.0 + 1e-12) + 1e-14)
                        throw std::runtime_error("validate_bounds: continuity bound violated for " +
                                                 n.name);
                }
}

// x |-> sum_k g_k(x, u(x)) db_k at the cell centers.
inline Field noise_increment(const NoiseModel& n, const Field& u,
                             const std::vector<double>& step_increments) {
    if (static_cast<int>(step_increments.size()) != n.K())
        throw std::invalid_argument("noise_increment: increment count != K");
    Field out = make_field(u.grid, 0.0);
    for (int i = 0; i < u.size(); ++i) {
        double x = u.grid->cell_centers[static_cast<size_t>(i)];
        double s = 0.0;
        for (int k = 0; k < n.K(); ++k) s += n.g(k, x, u[i]) * step_increments[static_cast<size_t>(k)];
        if (!std::isfinite(s))
            throw std::runtime_error("noise_increment: non-finite noise value (blow-up)");
        out[i] = s;
    }
    return out;
}

// Spatial mode values tabulated once per grid; the hot loop is then two
// K-by-n reductions per step.
struct NoiseTable {
    int K = 0;
    int n_cells = 0;
    double clip = 1e3;
    std::vector<double> phi;    // K x n_cells, row-major
    std::vector<double> alpha;  // per mode
    std::vector<double> beta;

    // out_i += sum_k phi[k][i] (alpha_k + beta_k clip(u_i)) db_k
    void apply(const double* u, const double* db, double* out,
               std::vector<double>& scratch_a, std::vector<double>& scratch_b) const {
        scratch_a.assign(static_cast<size_t>(n_cells), 0.0);
        scratch_b.assign(static_cast<size_t>(n_cells), 0.0);
        for (int k = 0; k < K; ++k) {
            const double* row = phi.data() + static_cast<size_t>(k) * n_cells;
            double wa = alpha[static_cast<size_t>(k)] * db[k];
            double wb = beta[static_cast<size_t>(k)] * db[k];
            if (wa != 0.0)
                for (int i = 0; i < n_cells; ++i) scratch_a[static_cast<size_t>(i)] += wa * row[i];
            if (wb != 0.0)
                for (int i = 0; i < n_cells; ++i) scratch_b[static_cast<size_t>(i)] += wb * row[i];
        }
        for (int i = 0; i < n_cells; ++i) {
            double xi = std::clamp(u[i], -clip, clip);
            out[i] += scratch_a[static_cast<size_t>(i)] + scratch_b[static_cast<size_t>(i)] * xi;
        }
    }
};

inline NoiseTable make_noise_table(const NoiseModel& n, const Grid& grid) {
    NoiseTable t;
    t.K = n.K();
    t.n_cells = grid.n_cells;
    t.clip = n.clip;
    t.phi.resize(static_cast<size_t>(t.K) * grid.n_cells);
    t.alpha.resize(static_cast<size_t>(t.K));
    t.beta.resize(static_cast<size_t>(t.K));
    for (int k = 0; k < t.K; ++k) {
        t.alpha[static_cast<size_t>(k)] = n.modes[static_cast<size_t>(k)].alpha;
        t.beta[static_cast<size_t>(k)] = n.modes[static_cast<size_t>(k)].beta;
        for (int i = 0; i < grid.n_cells; ++i)
            t.phi[static_cast<size_t>(k) * grid.n_cells + i] =
                n.modes[static_cast<size_t>(k)].spatial(grid.cell_centers[static_cast<size_t>(i)]);
    }
    return t;
}

// --- seeded path generation -------------------------------------------------

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace rng

// Counter-based stream split: path i of a given master seed always sees the
// same increments, independent of worker layout.
inline std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    return rng::splitmix64(rng::splitmix64(master_seed) ^ rng::splitmix64(path_index + 0x51ed2701ULL));
}

// Brownian increments db_k ~ Normal(0, dt), n_steps x K.
struct WienerPath {
    std::uint64_t seed = 0;
    int n_steps = 0;
    double dt = 0.0;
    int K = 0;
    std::vector<double> increments;  // n_steps x K, row-major

    const double* step(int n) const { return increments.data() + static_cast<size_t>(n) * K; }
    std::vector<double> step_vector(int n) const {
        return std::vector<double>(step(n), step(n) + K);
    }
};

inline WienerPath sample_path(std::uint64_t seed, int n_steps, double dt, int K) {
    if (n_steps < 1) throw std::invalid_argument("sample_path: n_steps >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt > 0");
    if (K < 0) throw std::invalid_argument("sample_path: K >= 0");
    WienerPath p;
    p.seed = seed;
    p.n_steps = n_steps;
    p.dt = dt;
    p.K = K;
    if (K == 0) return p;
    p.increments.resize(static_cast<size_t>(n_steps) * K);
    std::mt19937_64 gen(rng::splitmix64(seed));
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    for (double& v : p.increments) v = normal(gen);
    return p;
}

}  // namespace sscl
