#include "nlcl/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlcl {

InitialDatum::InitialDatum(std::vector<Node> nodes, Extension ext, std::string name)
    : nodes_(std::move(nodes)), ext_(ext), name_(std::move(name)) {
    if (nodes_.empty()) throw std::invalid_argument("InitialDatum: need at least one node");
    for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i].x < nodes_[i + 1].x)) {
            throw std::invalid_argument("InitialDatum: breakpoints must ascend");
        }
    }
    for (const Node& n : nodes_) {
        if (!std::isfinite(n.left) || !std::isfinite(n.right) || n.left < 0.0 || n.right < 0.0) {
            throw std::invalid_argument("InitialDatum: values must be finite and nonnegative");
        }
    }
}

InitialDatum InitialDatum::box(double base, double height, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("InitialDatum::box: need a < b");
    return InitialDatum({{a, base, base + height}, {b, base + height, base}}, {base, base},
                        "box");
}

InitialDatum InitialDatum::riemann(double q_l, double q_r, double x0) {
    return InitialDatum({{x0, q_l, q_r}}, {q_l, q_r}, "riemann");
}

InitialDatum InitialDatum::ramp(double y0, double y1, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("InitialDatum::ramp: need a < b");
    return InitialDatum({{a, y0, y0}, {b, y1, y1}}, {y0, y1}, "ramp");
}

InitialDatum InitialDatum::piecewise_constant(std::vector<double> breaks,
                                              std::vector<double> values) {
    if (values.size() != breaks.size() + 1) {
        throw std::invalid_argument("InitialDatum: need one more value than breakpoints");
    }
    std::vector<Node> nodes;
    for (size_t i = 0; i < breaks.size(); ++i) {
        nodes.push_back({breaks[i], values[i], values[i + 1]});
    }
    return InitialDatum(std::move(nodes), {values.front(), values.back()},
                        "piecewise_constant");
}

double InitialDatum::eval(double x) const {
    if (x < nodes_.front().x) return ext_.left;
    if (x >= nodes_.back().x) {
        return (x == nodes_.back().x) ? nodes_.back().right : ext_.right;
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                               [](double v, const Node& n) { return v < n.x; });
    const size_t i = static_cast<size_t>(it - nodes_.begin()) - 1;
    const Node& a = nodes_[i];
    const Node& b = nodes_[i + 1];
    const double t = (x - a.x) / (b.x - a.x);
    return a.right + t * (b.left - a.right);
}

CellField InitialDatum::rasterize(const GridSpec& grid) const {
    std::vector<double> out(static_cast<size_t>(grid.n_cells()));
    for (int j = 0; j < grid.n_cells(); ++j) {
        const double lo = grid.interface(j);
        const double hi = grid.interface(j + 1);
        // split the cell at interior breakpoints; each piece is linear, so
        // the midpoint rule integrates it exactly
        std::vector<double> cuts = {lo};
        for (const Node& n : nodes_) {
            if (n.x > lo && n.x < hi) cuts.push_back(n.x);
        }
        cuts.push_back(hi);
        if (cuts.size() == 2) {
            // break-free cell: the midpoint value is the exact average
            out[static_cast<size_t>(j)] = eval(0.5 * (lo + hi));
            continue;
        }
        double integral = 0.0;
        for (size_t p = 0; p + 1 < cuts.size(); ++p) {
            integral += eval(0.5 * (cuts[p] + cuts[p + 1])) * (cuts[p + 1] - cuts[p]);
        }
        out[static_cast<size_t>(j)] = integral / grid.dx();
    }
    return CellField(grid, std::move(out), ext_);
}

double InitialDatum::min_value() const {
    double m = std::min(ext_.left, ext_.right);
    for (const Node& n : nodes_) m = std::min({m, n.left, n.right});
    return m;
}

double InitialDatum::max_value() const {
    double m = std::max(ext_.left, ext_.right);
    for (const Node& n : nodes_) m = std::max({m, n.left, n.right});
    return m;
}

}  // namespace nlcl
