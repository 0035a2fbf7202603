#pragma once

#include <string>
#include <vector>

#include "nlcl/grid.hpp"

namespace nlcl {

/// Initial datum q0 as a piecewise-linear profile with jumps, constant
/// outside its breakpoints. Rasterizes to exact cell averages.
class InitialDatum {
public:
    /// base outside [a, b], base + height inside.
    static InitialDatum box(double base, double height, double a, double b);
    /// q_l for x < x0, q_r for x > x0.
    static InitialDatum riemann(double q_l, double q_r, double x0);
    /// Linear transition from y0 at a to y1 at b, constant outside.
    static InitialDatum ramp(double y0, double y1, double a, double b);
    /// values[i] on (breaks[i-1], breaks[i]); one more value than breaks.
    static InitialDatum piecewise_constant(std::vector<double> breaks,
                                           std::vector<double> values);

    CellField rasterize(const GridSpec& grid) const;

    double eval(double x) const;
    Extension extension() const { return ext_; }
    double min_value() const;
    double max_value() const;
    const std::string& name() const { return name_; }

private:
    struct Node {
        double x;
        double left;   // limit from below
        double right;  // limit from above
    };

    InitialDatum(std::vector<Node> nodes, Extension ext, std::string name);

    std::vector<Node> nodes_;  // ascending x; profile linear between nodes
    Extension ext_;
    std::string name_;
};

}  // namespace nlcl
