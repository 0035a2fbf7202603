#include "nlcl/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nlcl {

namespace {

constexpr int kRefine = 64;  // trapezoid substeps per node interval

}  // namespace

EntropyPair::EntropyPair(std::vector<double> nodes, std::vector<double> alpha,
                         std::vector<double> alpha_prime, std::vector<double> beta,
                         std::vector<double> beta_prime, EntropyKind kind)
    : nodes_(std::move(nodes)),
      alpha_(std::move(alpha)),
      alpha_prime_(std::move(alpha_prime)),
      beta_(std::move(beta)),
      beta_prime_(std::move(beta_prime)),
      kind_(kind) {
    if (nodes_.size() < 2 || alpha_.size() != nodes_.size() ||
        alpha_prime_.size() != nodes_.size() || beta_.size() != nodes_.size() ||
        beta_prime_.size() != nodes_.size()) {
        throw std::invalid_argument("EntropyPair: inconsistent table sizes");
    }
}

double EntropyPair::hermite(const std::vector<double>& val, const std::vector<double>& der,
                            double s) const {
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    const double h = (hi - lo) / static_cast<double>(nodes_.size() - 1);
    if (s <= lo) return val.front() + der.front() * (s - lo);
    if (s >= hi) return val.back() + der.back() * (s - hi);
    const size_t i = std::min(static_cast<size_t>((s - lo) / h), nodes_.size() - 2);
    const double t = (s - nodes_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * val[i] + (t3 - 2 * t2 + t) * h * der[i] +
           (-2 * t3 + 3 * t2) * val[i + 1] + (t3 - t2) * h * der[i + 1];
}

double EntropyPair::alpha(double s) const { return hermite(alpha_, alpha_prime_, s); }

double EntropyPair::alpha_prime(double s) const {
    // treat alpha' itself as the tabulated value with beta'-style slope
    // unavailable; piecewise-linear interpolation is enough here
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    const double h = (hi - lo) / static_cast<double>(nodes_.size() - 1);
    if (s <= lo) return alpha_prime_.front();
    if (s >= hi) return alpha_prime_.back();
    const size_t i = std::min(static_cast<size_t>((s - lo) / h), nodes_.size() - 2);
    const double t = (s - nodes_[i]) / h;
    return alpha_prime_[i] + t * (alpha_prime_[i + 1] - alpha_prime_[i]);
}

double EntropyPair::beta(double s) const { return hermite(beta_, beta_prime_, s); }

double EntropyPair::beta_prime(double s) const {
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    const double h = (hi - lo) / static_cast<double>(nodes_.size() - 1);
    if (s <= lo) return beta_prime_.front();
    if (s >= hi) return beta_prime_.back();
    const size_t i = std::min(static_cast<size_t>((s - lo) / h), nodes_.size() - 2);
    const double t = (s - nodes_[i]) / h;
    return beta_prime_[i] + t * (beta_prime_[i + 1] - beta_prime_[i]);
}

double EntropyPair::alpha_range() const {
    const auto [lo, hi] = std::minmax_element(alpha_.begin(), alpha_.end());
    return *hi - *lo;
}

double EntropyPair::beta_range() const {
    const auto [lo, hi] = std::minmax_element(beta_.begin(), beta_.end());
    return *hi - *lo;
}

EntropyPair build_entropy_pair(const VelocityModel& v, double q_lo, double q_hi, EntropyKind kind,
                               EntropyBuildOptions opts) {
    if (!(q_lo < q_hi)) {
        throw std::invalid_argument("build_entropy_pair: need q_lo < q_hi");
    }
    if (opts.nodes < 2) opts.nodes = 2;

    std::function<double(double)> alpha_second;
    switch (kind) {
        case EntropyKind::tailored: {
            if (q_lo <= 1e-14 && std::fabs(v.deriv(0.0)) > 1e-12) {
                throw EntropyUnboundedAtZero(
                    "build_entropy_pair: -V'(s)/s diverges at s = 0; use q_lo > 0");
            }
            alpha_second = [&v](double s) {
                if (std::fabs(s) <= 1e-14) return -v.deriv2(0.0);  // limit when V'(0) = 0
                return -v.deriv(s) / s;
            };
            break;
        }
        case EntropyKind::kruzkov_smoothed: {
            const double c = opts.kruzkov_center;
            const double w = opts.kruzkov_width;
            if (!(w > 0.0)) {
                throw std::invalid_argument("build_entropy_pair: kruzkov width must be positive");
            }
            alpha_second = [c, w](double s) { return 2.0 / w * cosine_bump((s - c) / w); };
            break;
        }
        case EntropyKind::custom: {
            if (!opts.custom_second) {
                throw std::invalid_argument("build_entropy_pair: custom kind needs alpha''");
            }
            alpha_second = opts.custom_second;
            break;
        }
    }

    // cumulative trapezoid integration on a refined grid; the node columns
    // are extracted at every kRefine-th point
    const int fine_n = (opts.nodes - 1) * kRefine;
    const double h = (q_hi - q_lo) / fine_n;

    std::vector<double> s_fine(static_cast<size_t>(fine_n) + 1);
    std::vector<double> app(static_cast<size_t>(fine_n) + 1);
    for (int i = 0; i <= fine_n; ++i) {
        s_fine[static_cast<size_t>(i)] = q_lo + h * i;
        app[static_cast<size_t>(i)] = alpha_second(s_fine[static_cast<size_t>(i)]);
        if (app[static_cast<size_t>(i)] < -1e-10) {
            throw std::invalid_argument("build_entropy_pair: alpha'' must be nonnegative");
        }
    }

    std::vector<double> ap(app.size(), 0.0), al(app.size(), 0.0);
    std::vector<double> bp(app.size(), 0.0), be(app.size(), 0.0);
    for (size_t i = 0; i < app.size(); ++i) {
        if (i > 0) {
            ap[i] = ap[i - 1] + 0.5 * h * (app[i - 1] + app[i]);
            al[i] = al[i - 1] + 0.5 * h * (ap[i - 1] + ap[i]);
        }
        const double s = s_fine[i];
        bp[i] = ap[i] * (v(s) + s * v.deriv(s));
        if (i > 0) be[i] = be[i - 1] + 0.5 * h * (bp[i - 1] + bp[i]);
    }

    std::vector<double> nodes(static_cast<size_t>(opts.nodes));
    std::vector<double> n_al(nodes.size()), n_ap(nodes.size()), n_be(nodes.size()),
        n_bp(nodes.size());
    for (int i = 0; i < opts.nodes; ++i) {
        const size_t fi = static_cast<size_t>(i) * kRefine;
        nodes[static_cast<size_t>(i)] = s_fine[fi];
        n_al[static_cast<size_t>(i)] = al[fi];
        n_ap[static_cast<size_t>(i)] = ap[fi];
        n_be[static_cast<size_t>(i)] = be[fi];
        n_bp[static_cast<size_t>(i)] = bp[fi];
    }
    return EntropyPair(std::move(nodes), std::move(n_al), std::move(n_ap), std::move(n_be),
                       std::move(n_bp), kind);
}

double cosine_bump(double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * u));
}

double BumpTestFunction::value(double t, double x) const {
    return cosine_bump((t - t_center) / r_t) * cosine_bump((x - x_center) / r_x);
}

std::vector<BumpTestFunction> TestFunctionFamily::generate(const Trajectory& traj) const {
    if (traj.snapshots().empty()) {
        throw TestFunctionOutOfWindow("TestFunctionFamily: trajectory has no snapshots");
    }
    const double t_last = traj.snapshots().back().time;
    const GridSpec& grid = traj.config().grid;

    std::vector<BumpTestFunction> out;
    for (double r : widths) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("TestFunctionFamily: widths must be positive");
        }
        // time supports may reach below zero (the initial-datum term covers
        // that) but must end by the last recorded time
        const double tc_hi = t_last - r;
        const double xc_lo = grid.x_min() + r;
        const double xc_hi = grid.x_max() - r;
        if (tc_hi < 0.0 || xc_lo > xc_hi) {
            throw TestFunctionOutOfWindow("TestFunctionFamily: width " + std::to_string(r) +
                                          " does not fit the recorded window");
        }
        for (int it = 0; it < t_count; ++it) {
            const double tc = (t_count == 1) ? 0.5 * tc_hi : tc_hi * it / (t_count - 1);
            for (int ix = 0; ix < x_count; ++ix) {
                const double xc =
                    (x_count == 1) ? 0.5 * (xc_lo + xc_hi)
                                   : xc_lo + (xc_hi - xc_lo) * ix / (x_count - 1);
                out.push_back({tc, xc, r, r});
            }
        }
    }
    return out;
}

double entropy_functional(const Trajectory& traj, const EntropyPair& pair,
                          const BumpTestFunction& phi) {
    return entropy_functional(
        traj, pair, [&phi](double t, double x) { return phi.value(t, x); },
        {phi.t_lo(), phi.t_hi()}, {phi.x_lo(), phi.x_hi()});
}

double entropy_functional(const Trajectory& traj, const EntropyPair& pair,
                          const std::function<double(double, double)>& phi, Interval t_support,
                          Interval x_support) {
    const auto& snaps = traj.snapshots();
    if (snaps.size() < 2) {
        throw TestFunctionOutOfWindow("entropy_functional: need at least two snapshots");
    }
    const GridSpec& grid = traj.config().grid;
    const double dx = grid.dx();

    if (t_support.hi > snaps.back().time + 1e-12) {
        throw TestFunctionOutOfWindow("entropy_functional: phi outlives the recorded window");
    }
    if (x_support.lo < grid.x_min() - 1e-12 || x_support.hi > grid.x_max() + 1e-12) {
        throw TestFunctionOutOfWindow("entropy_functional: phi exceeds the domain");
    }

    // cells overlapping the spatial support
    const int j_lo = std::max(0, static_cast<int>((x_support.lo - grid.x_min()) / dx) - 1);
    const int j_hi = std::min(grid.n_cells() - 1,
                              static_cast<int>((x_support.hi - grid.x_min()) / dx) + 1);

    double total = 0.0;
    for (size_t s = 0; s + 1 < snaps.size(); ++s) {
        const double t0 = snaps[s].time;
        const double t1 = snaps[s + 1].time;
        if (t1 < t_support.lo || t0 > t_support.hi) continue;
        const CellField& q = snaps[s].q;
        const double half_dt = 0.5 * (t1 - t0);
        for (int j = j_lo; j <= j_hi; ++j) {
            const double c = grid.center(j);
            const double xl = grid.interface(j);
            const double xr = grid.interface(j + 1);
            // d/dt integrated exactly in t, midpoint in x
            total += pair.alpha(q[j]) * dx * (phi(t1, c) - phi(t0, c));
            // d/dx integrated exactly in x, trapezoid in t
            total += pair.beta(q[j]) * half_dt *
                     (phi(t0, xr) + phi(t1, xr) - phi(t0, xl) - phi(t1, xl));
        }
    }

    // initial-datum term (phi vanishes at t = 0 unless its support dips
    // below zero, so adding it unconditionally is exact)
    const CellField& q0 = snaps.front().q;
    for (int j = j_lo; j <= j_hi; ++j) {
        total += pair.alpha(q0[j]) * dx * phi(0.0, grid.center(j));
    }
    return total;
}

double entropy_error_budget(const Trajectory& traj, const EntropyPair& pair) {
    const auto& snaps = traj.snapshots();
    double gap = 0.0;
    for (size_t s = 0; s + 1 < snaps.size(); ++s) {
        gap = std::max(gap, snaps[s + 1].time - snaps[s].time);
    }
    const double dx = traj.config().grid.dx();
    return 10.0 * (dx + gap) * (std::numbers::pi / 2.0) *
           (pair.alpha_range() + pair.beta_range());
}

EntropyResidualResult entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                       const TestFunctionFamily& family) {
    const auto phis = family.generate(traj);
    EntropyResidualResult res;
    res.per_phi.reserve(phis.size());
    res.worst = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < phis.size(); ++i) {
        const double e = entropy_functional(traj, pair, phis[i]);
        res.per_phi.push_back(e);
        if (e < res.worst) {
            res.worst = e;
            res.worst_index = static_cast<int>(i);
            res.worst_phi = phis[i];
        }
    }
    return res;
}

}  // namespace nlcl
