#include "nlcl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlcl {

GridSpec::GridSpec(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
    if (!(x_min < x_max)) {
        throw std::invalid_argument("GridSpec: x_min must be below x_max");
    }
    if (n_cells < 2) {
        throw std::invalid_argument("GridSpec: need at least two cells");
    }
}

CellField::CellField(GridSpec grid, std::vector<double> values, Extension ext)
    : grid_(grid), values_(std::move(values)), ext_(ext) {
    if (static_cast<int>(values_.size()) != grid_.n_cells()) {
        throw std::invalid_argument("CellField: value count does not match grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("CellField: non-finite value");
        }
    }
    if (!std::isfinite(ext_.left) || !std::isfinite(ext_.right)) {
        throw std::invalid_argument("CellField: non-finite extension");
    }
}

CellField CellField::constant(const GridSpec& grid, double value) {
    return CellField(grid, std::vector<double>(static_cast<size_t>(grid.n_cells()), value),
                     {value, value});
}

InterfaceField::InterfaceField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.n_cells() + 1) {
        throw std::invalid_argument("InterfaceField: need n_cells + 1 values");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("InterfaceField: non-finite value");
        }
    }
}

double InterfaceField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

double total_variation(const CellField& f) {
    const auto v = f.values();
    double tv = std::fabs(v.front() - f.extension().left);
    for (size_t j = 0; j + 1 < v.size(); ++j) {
        tv += std::fabs(v[j + 1] - v[j]);
    }
    tv += std::fabs(f.extension().right - v.back());
    return tv;
}

double total_variation(const InterfaceField& w, double left_limit, double right_limit) {
    const auto v = w.values();
    double tv = std::fabs(v.front() - left_limit);
    for (size_t k = 0; k + 1 < v.size(); ++k) {
        tv += std::fabs(v[k + 1] - v[k]);
    }
    tv += std::fabs(right_limit - v.back());
    return tv;
}

double l1_distance(const CellField& f, const CellField& g, Interval window) {
    if (!(f.grid() == g.grid())) {
        throw GridMismatch("l1_distance: fields live on different grids");
    }
    if (window.lo > window.hi) {
        throw InvalidInterval("l1_distance: window lo above hi");
    }
    const GridSpec& grid = f.grid();
    const double lo = std::max(window.lo, grid.x_min());
    const double hi = std::min(window.hi, grid.x_max());
    if (lo >= hi) return 0.0;

    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double a = std::max(lo, grid.interface(j));
        const double b = std::min(hi, grid.interface(j + 1));
        if (b <= a) continue;
        const double term = std::fabs(f[j] - g[j]) * (b - a);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double monotonicity_defect(const CellField& f, Direction dir) {
    return monotonicity_defect(f, dir, f.grid().domain());
}

double monotonicity_defect(const CellField& f, Direction dir, Interval window) {
    const GridSpec& grid = f.grid();
    double worst = 0.0;
    for (int j = 0; j + 1 < grid.n_cells(); ++j) {
        if (!window.contains(grid.center(j)) || !window.contains(grid.center(j + 1))) {
            continue;
        }
        const double rise = (dir == Direction::increasing) ? f[j] - f[j + 1] : f[j + 1] - f[j];
        worst = std::max(worst, rise);
    }
    return worst;
}

CellField coarsen(const CellField& f, int factor) {
    const GridSpec& fine = f.grid();
    if (factor < 1 || fine.n_cells() % factor != 0) {
        throw GridMismatch("coarsen: factor must divide the cell count");
    }
    GridSpec coarse(fine.x_min(), fine.x_max(), fine.n_cells() / factor);
    std::vector<double> out(static_cast<size_t>(coarse.n_cells()));
    for (int j = 0; j < coarse.n_cells(); ++j) {
        double s = 0.0;
        for (int m = 0; m < factor; ++m) s += f[j * factor + m];
        out[static_cast<size_t>(j)] = s / factor;
    }
    return CellField(coarse, std::move(out), f.extension());
}

}  // namespace nlcl
