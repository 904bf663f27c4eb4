#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sscl {

// Uniform cell-centered partition of (x_left, x_right). The boundary is the
// two endpoints; outward normal is -1 on the left, +1 on the right.
struct Grid {
    double x_left = 0.0;
    double x_right = 1.0;
    int n_cells = 0;
    double dx = 0.0;
    std::vector<double> cell_centers;

    double length() const { return x_right - x_left; }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double x_left, double x_right, int n_cells) {
    if (!std::isfinite(x_left) || !std::isfinite(x_right))
        throw std::invalid_argument("make_grid: endpoints must be finite");
    if (!(x_left < x_right))
        throw std::invalid_argument("make_grid: requires x_left < x_right");
    if (n_cells < 2)
        throw std::invalid_argument("make_grid: requires n_cells >= 2");
    auto g = std::make_shared<Grid>();
    g->x_left = x_left;
    g->x_right = x_right;
    g->n_cells = n_cells;
    g->dx = (x_right - x_left) / n_cells;
    g->cell_centers.resize(n_cells);
    for (int i = 0; i < n_cells; ++i)
        g->cell_centers[i] = x_left + (i + 0.5) * g->dx;
    return g;
}

// Cell averages of a scalar function on the grid.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

inline Field make_field(GridPtr grid, double value = 0.0) {
    Field f;
    f.values.assign(static_cast<size_t>(grid->n_cells), value);
    f.grid = std::move(grid);
    return f;
}

inline Field make_field(GridPtr grid, const std::function<double(double)>& fn) {
    Field f = make_field(grid, 0.0);
    for (int i = 0; i < f.grid->n_cells; ++i)
        f.values[static_cast<size_t>(i)] = fn(f.grid->cell_centers[static_cast<size_t>(i)]);
    return f;
}

inline bool all_finite(const Field& f) {
    return std::all_of(f.values.begin(), f.values.end(),
                       [](double v) { return std::isfinite(v); });
}

// Midpoint quadrature of the L1 norm: dx * sum |v_i|.
inline double l1_norm(const Field& f) {
    double s = 0.0;
    for (double v : f.values) s += std::abs(v);
    return f.grid->dx * s;
}

inline double l1_distance(const Field& f, const Field& g) {
    if (f.size() != g.size())
        throw std::invalid_argument("l1_distance: size mismatch");
    double s = 0.0;
    for (int i = 0; i < f.size(); ++i) s += std::abs(f[i] - g[i]);
    return f.grid->dx * s;
}

enum class Side { Left, Right };

inline double outward_normal(Side s) { return s == Side::Left ? -1.0 : +1.0; }

// Dirichlet data at the two boundary points, sampled on a uniform time grid.
// Queries between samples interpolate linearly; queries past the last sample
// clamp to it.
struct BoundaryData {
    std::vector<double> left;
    std::vector<double> right;
    double sample_dt = 0.0;
    double sup_norm = 0.0;

    double value(Side side, double t) const {
        const std::vector<double>& s = (side == Side::Left) ? left : right;
        if (s.empty()) return 0.0;
        if (s.size() == 1 || sample_dt <= 0.0) return s.front();
        double pos = t / sample_dt;
        if (pos <= 0.0) return s.front();
        auto last = static_cast<double>(s.size() - 1);
        if (pos >= last) return s.back();
        auto k = static_cast<size_t>(pos);
        double w = pos - static_cast<double>(k);
        return (1.0 - w) * s[k] + w * s[k + 1];
    }
};

inline BoundaryData sample_boundary(const std::function<double(double)>& fl,
                                    const std::function<double(double)>& fr,
                                    double t_end, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("sample_boundary: n_samples >= 2");
    if (!(t_end > 0.0)) throw std::invalid_argument("sample_boundary: t_end > 0");
    BoundaryData b;
    b.sample_dt = t_end / (n_samples - 1);
    b.left.resize(static_cast<size_t>(n_samples));
    b.right.resize(static_cast<size_t>(n_samples));
    double sup = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        double t = k * b.sample_dt;
        double vl = fl(t), vr = fr(t);
        if (!std::isfinite(vl) || !std::isfinite(vr))
            throw std::invalid_argument("sample_boundary: non-finite boundary value");
        b.left[static_cast<size_t>(k)] = vl;
        b.right[static_cast<size_t>(k)] = vr;
        sup = std::max({sup, std::abs(vl), std::abs(vr)});
    }
    b.sup_norm = sup;
    return b;
}

inline BoundaryData constant_boundary(double bl, double br) {
    BoundaryData b;
    b.left = {bl};
    b.right = {br};
    b.sample_dt = 0.0;
    b.sup_norm = std::max(std::abs(bl), std::abs(br));
    return b;
}

}  // namespace sscl
