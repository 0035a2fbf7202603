#include "nlcl/local.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace nlcl {

namespace {

constexpr int kScanPoints = 512;
constexpr double kBisectTol = 1e-12;

double bisect_root(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > kBisectTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((glo <= 0.0) == (gm <= 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

int convexity_sign(const FluxModel& fm, double lo, double hi) {
    // +1 strictly convex, -1 strictly concave, 0 neither; isolated zeros of
    // f'' are tolerated
    const int probes = 1000;
    int pos = 0, neg = 0, zero = 0;
    for (int i = 0; i <= probes; ++i) {
        const double s = lo + (hi - lo) * i / probes;
        const double fs = fm.fsecond(s);
        if (fs > 1e-12) {
            ++pos;
        } else if (fs < -1e-12) {
            ++neg;
        } else {
            ++zero;
        }
    }
    if (pos == 0 && neg > 0 && zero <= 2) return -1;
    if (neg == 0 && pos > 0 && zero <= 2) return +1;
    return 0;
}

double invert_fprime(const FluxModel& fm, double xi, double q_lo, double q_hi) {
    // f' is strictly monotone between the two states of a rarefaction
    const bool increasing = fm.fprime(q_hi) > fm.fprime(q_lo);
    double lo = q_lo, hi = q_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool below = fm.fprime(mid) < xi;
        if (below == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> flux_critical_points(const FluxModel& fm, double lo, double hi) {
    std::vector<double> roots;
    if (!(lo < hi)) return roots;
    double prev_s = lo;
    double prev_g = fm.fprime(lo);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double s = lo + (hi - lo) * i / kScanPoints;
        const double g = fm.fprime(s);
        if ((prev_g <= 0.0) != (g <= 0.0)) {
            roots.push_back(bisect_root([&](double x) { return fm.fprime(x); }, prev_s, s));
        }
        prev_s = s;
        prev_g = g;
    }
    return roots;
}

double godunov_flux(const FluxModel& fm, double a, double b) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double best = fm.f(a);
    const double fb = fm.f(b);
    const bool minimize = a <= b;
    if (minimize ? fb < best : fb > best) best = fb;
    for (double r : flux_critical_points(fm, lo, hi)) {
        const double fr = fm.f(r);
        if (minimize ? fr < best : fr > best) best = fr;
    }
    return best;
}

RiemannSolution::RiemannSolution(FluxModel fm, double q_l, double q_r, WaveType structure,
                                 double shock_speed, double fan_lo, double fan_hi)
    : fm_(std::move(fm)),
      q_l_(q_l),
      q_r_(q_r),
      structure_(structure),
      shock_speed_(shock_speed),
      fan_lo_(fan_lo),
      fan_hi_(fan_hi) {}

double RiemannSolution::sample(double xi) const {
    switch (structure_) {
        case WaveType::constant:
            return q_l_;
        case WaveType::shock:
            return xi < shock_speed_ ? q_l_ : q_r_;
        case WaveType::rarefaction:
            if (xi <= fan_lo_) return q_l_;
            if (xi >= fan_hi_) return q_r_;
            return invert_fprime(fm_, xi, std::min(q_l_, q_r_), std::max(q_l_, q_r_));
    }
    return q_l_;
}

RiemannSolution exact_riemann(const FluxModel& fm, double q_l, double q_r) {
    if (q_l == q_r) {
        return RiemannSolution(fm, q_l, q_r, WaveType::constant, 0.0, 0.0, 0.0);
    }
    const double lo = std::min(q_l, q_r);
    const double hi = std::max(q_l, q_r);
    const int sign = convexity_sign(fm, lo, hi);
    if (sign == 0) {
        throw FluxNotGenuinelyNonlinear(
            "exact_riemann: flux is not strictly convex or concave between the states");
    }
    // concave flux: increasing jumps are shocks; convex flux: decreasing ones
    const bool shock = (sign < 0) ? (q_l < q_r) : (q_l > q_r);
    if (shock) {
        const double speed = (fm.f(q_r) - fm.f(q_l)) / (q_r - q_l);
        return RiemannSolution(fm, q_l, q_r, WaveType::shock, speed, 0.0, 0.0);
    }
    return RiemannSolution(fm, q_l, q_r, WaveType::rarefaction, 0.0, fm.fprime(q_l),
                           fm.fprime(q_r));
}

Trajectory godunov_simulate(const FluxModel& fm, const InitialDatum& datum, const GridSpec& grid,
                            double cfl, double t_end, std::vector<double> snapshot_times) {
    SolverConfig config;
    config.variant = ModelVariant::local;
    config.kernel.reset();
    config.velocity = fm.velocity();
    config.grid = grid;
    config.cfl = cfl;
    config.t_end = t_end;
    config.snapshot_times = std::move(snapshot_times);
    config.validate();

    const double dx = grid.dx();
    const int n = grid.n_cells();

    CellField q = datum.rasterize(grid);

    // states stay inside the initial range (monotone scheme), so the wave
    // speed bound and interior flux extrema can be frozen up front
    const double s_lo = std::min({datum.min_value(), q.extension().left, q.extension().right});
    const double s_hi = std::max({datum.max_value(), q.extension().left, q.extension().right});
    double speed = 1e-12;
    for (int i = 0; i <= 1000; ++i) {
        speed = std::max(speed, std::fabs(fm.fprime(s_lo + (s_hi - s_lo) * i / 1000)));
    }
    const std::vector<double> crits = flux_critical_points(fm, s_lo, s_hi);

    auto interface_flux = [&](double a, double b) {
        const bool minimize = a <= b;
        double best = fm.f(a);
        const double fb = fm.f(b);
        if (minimize ? fb < best : fb > best) best = fb;
        for (double r : crits) {
            if (r > std::min(a, b) && r < std::max(a, b)) {
                const double fr = fm.f(r);
                if (minimize ? fr < best : fr > best) best = fr;
            }
        }
        return best;
    };

    std::vector<double> snap_times = config.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end(),
                                 [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                     snap_times.end());

    auto decorate = [&](const CellField& state) { return model_velocity(config, state); };

    std::vector<Snapshot> snapshots;
    snapshots.push_back({0.0, q, decorate(q)});

    auto audit_row = [&](const CellField& state, double time, double dt, const StepAudit* prev,
                         double fl, double fr) {
        StepAudit a;
        a.time = time;
        a.dt = dt;
        const auto vals = state.values();
        a.min_q = *std::min_element(vals.begin(), vals.end());
        a.max_q = *std::max_element(vals.begin(), vals.end());
        a.defect_incr = monotonicity_defect(state, Direction::increasing);
        a.defect_decr = monotonicity_defect(state, Direction::decreasing);
        a.tv_q = total_variation(state);
        double mass = 0.0, comp = 0.0;
        for (double x : vals) {
            const double y = x * dx - comp;
            const double t2 = mass + y;
            comp = (t2 - mass) - y;
            mass = t2;
        }
        a.mass = mass;
        const VelocityModel& v = fm.velocity();
        a.tv_w = total_variation(decorate(state), v(state.extension().left),
                                 v(state.extension().right));
        if (prev) {
            a.flux_in_accum = prev->flux_in_accum + dt * fl;
            a.flux_out_accum = prev->flux_out_accum + dt * fr;
        }
        return a;
    };

    std::vector<StepAudit> audit;
    audit.push_back(audit_row(q, 0.0, 0.0, nullptr, 0.0, 0.0));

    size_t next_snap = 0;
    while (next_snap < snap_times.size() && snap_times[next_snap] <= 1e-14) ++next_snap;

    double t = 0.0;
    std::vector<double> work(static_cast<size_t>(n));
    while (t < t_end) {
        const double t_next = (next_snap < snap_times.size()) ? snap_times[next_snap] : t_end;
        const double gap = t_next - t;
        const double dt_raw = cfl * dx / speed;
        const bool hit = dt_raw >= gap;
        const double dt = hit ? gap : dt_raw;
        if (dt * speed / dx > 1.0 + 1e-12) {
            throw UnstableStep("godunov_simulate: dt violates the CFL contract");
        }
        const double lam = dt / dx;

        const double flux_left = interface_flux(q.extension().left, q[0]);
        double f_prev = flux_left;
        for (int j = 0; j < n; ++j) {
            const double f_next =
                (j + 1 < n) ? interface_flux(q[j], q[j + 1]) : interface_flux(q[j], q.extension().right);
            work[static_cast<size_t>(j)] = q[j] - lam * (f_next - f_prev);
            f_prev = f_next;
        }
        for (double x : work) {
            if (!std::isfinite(x)) {
                throw NonfiniteState("godunov_simulate: state became non-finite");
            }
        }
        q = CellField(grid, work, q.extension());
        t = hit ? t_next : t + dt;

        audit.push_back(audit_row(q, t, dt, &audit.back(), flux_left, f_prev));

        if (hit && next_snap < snap_times.size() && t == snap_times[next_snap]) {
            snapshots.push_back({t, q, decorate(q)});
            ++next_snap;
        }
    }

    return Trajectory(std::move(config), std::move(snapshots), std::move(audit));
}

}  // namespace nlcl
