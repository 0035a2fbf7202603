#pragma once

#include <span>
#include <vector>

#include "nlcl/errors.hpp"

namespace nlcl {

/// Closed interval [lo, hi] on the real line.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Uniform 1-D mesh on [x_min, x_max] with n_cells cells.
///
/// Cell j spans [interface(j), interface(j+1)] and has center
/// x_min + (j + 1/2) * dx. Interfaces and centers are reproduced exactly
/// from the three stored fields.
class GridSpec {
public:
    GridSpec(double x_min, double x_max, int n_cells);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n_cells() const { return n_cells_; }
    double dx() const { return (x_max_ - x_min_) / n_cells_; }

    double center(int j) const { return x_min_ + (j + 0.5) * dx(); }
    double interface(int k) const { return x_min_ + k * dx(); }
    Interval domain() const { return {x_min_, x_max_}; }

    bool operator==(const GridSpec&) const = default;

private:
    double x_min_;
    double x_max_;
    int n_cells_;
};

/// Constant values used when evaluating a field outside its grid.
struct Extension {
    double left = 0.0;
    double right = 0.0;
};

/// Piecewise-constant field of cell averages with constant extension
/// outside [x_min, x_max]. Immutable after construction.
class CellField {
public:
    CellField(GridSpec grid, std::vector<double> values, Extension ext);

    static CellField constant(const GridSpec& grid, double value);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const Extension& extension() const { return ext_; }
    double operator[](int j) const { return values_[static_cast<size_t>(j)]; }
    int size() const { return static_cast<int>(values_.size()); }

private:
    GridSpec grid_;
    std::vector<double> values_;
    Extension ext_;
};

/// Field with one value per cell interface (n_cells + 1 values).
class InterfaceField {
public:
    InterfaceField(GridSpec grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](int k) const { return values_[static_cast<size_t>(k)]; }
    int size() const { return static_cast<int>(values_.size()); }
    double max_abs() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

enum class Direction { increasing, decreasing };

/// Total variation of the extended function on the real line: interior
/// jumps plus the jumps to the extension values at both ends.
double total_variation(const CellField& f);

/// Total variation of an interface field, including the jumps to the
/// given far-field limits on both sides.
double total_variation(const InterfaceField& w, double left_limit, double right_limit);

/// L1 distance between two fields on the same grid, restricted to the
/// intersection of `window` with the grid domain (cells are weighted by
/// their overlap length).
double l1_distance(const CellField& f, const CellField& g, Interval window);

/// Worst violation of discrete monotonicity in the given direction;
/// zero iff the cell values are monotone that way.
double monotonicity_defect(const CellField& f, Direction dir);

/// Same, restricted to cells whose centers lie in `window`.
double monotonicity_defect(const CellField& f, Direction dir, Interval window);

/// Exact cell-average coarsening onto a grid with n_cells / factor cells.
CellField coarsen(const CellField& f, int factor);

}  // namespace nlcl
