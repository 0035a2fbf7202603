#include "nlcl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlcl/nonlocal.hpp"

namespace nlcl {

namespace {

constexpr double kSpeedFloor = 1e-30;
constexpr double kMassCutoff = 1e-18;

struct StepResult {
    std::vector<double> q;
    double flux_left;
    double flux_right;
};

StepResult step_impl(const CellField& q, const InterfaceField& w, double dt) {
    const GridSpec& grid = q.grid();
    const double dx = grid.dx();
    const int n = grid.n_cells();
    if (dt * w.max_abs() / dx > 1.0 + 1e-12) {
        throw UnstableStep("step: dt violates the CFL contract");
    }
    const double lam = dt / dx;
    std::vector<double> out(static_cast<size_t>(n));
    // upwind flux F_k = q_{k-1} W_k; inflow at the left boundary uses the
    // left extension value
    double flux_left = q.extension().left * w[0];
    double f_prev = flux_left;
    for (int j = 0; j < n; ++j) {
        const double f_next = q[j] * w[j + 1];
        out[static_cast<size_t>(j)] = q[j] - lam * (f_next - f_prev);
        f_prev = f_next;
    }
    return {std::move(out), flux_left, f_prev};
}

/// Precomputed speed evaluation for one (variant, kernel, grid) triple;
/// fills the interface array in a single right-to-left sweep for the
/// exponential family and reuses exact cell weights otherwise.
class SpeedPlan {
public:
    SpeedPlan(const SolverConfig& config) : config_(config) {
        const KernelSpec& kernel = *config.kernel;
        const double dx = config.grid.dx();
        if (kernel.family() == KernelFamily::exponential) {
            scan_ = true;
            decay_ = std::exp(-dx / kernel.eta());
        } else {
            scan_ = false;
            const int n = config.grid.n_cells();
            for (int m = 0; m < n; ++m) {
                weights_.push_back(kernel.cell_mass(m * dx, (m + 1) * dx));
                if (kernel.tail_mass((m + 1) * dx) <= kMassCutoff) break;
            }
        }
    }

    /// w gets the interface speeds; returns (max speed, TV of w including
    /// the jumps to the far-field limits V(ext)).
    std::pair<double, double> evaluate(std::span<const double> q, const Extension& ext,
                                       std::vector<double>& w) const {
        const VelocityModel& v = config_.velocity;
        const bool on_solution = config_.variant == ModelVariant::nonlocal_solution;
        const int n = static_cast<int>(q.size());
        w.resize(static_cast<size_t>(n) + 1);

        if (scan_) {
            // u + r (acc - u) keeps constant states exact fixed points
            double acc = on_solution ? ext.right : v(ext.right);
            w[static_cast<size_t>(n)] = on_solution ? v(acc) : acc;
            for (int k = n - 1; k >= 0; --k) {
                const double u = on_solution ? q[static_cast<size_t>(k)]
                                             : v(q[static_cast<size_t>(k)]);
                acc = u + decay_ * (acc - u);
                w[static_cast<size_t>(k)] = on_solution ? v(acc) : acc;
            }
        } else {
            const KernelSpec& kernel = *config_.kernel;
            const double dx = config_.grid.dx();
            const int m_reach = static_cast<int>(weights_.size());
            const double far_right = on_solution ? ext.right : v(ext.right);
            for (int k = 0; k <= n; ++k) {
                const int j_end = std::min(n, k + m_reach);
                double sum = 0.0, comp = 0.0;
                for (int j = k; j < j_end; ++j) {
                    const double cell = on_solution ? q[static_cast<size_t>(j)]
                                                    : v(q[static_cast<size_t>(j)]);
                    const double y = cell * weights_[static_cast<size_t>(j - k)] - comp;
                    const double t = sum + y;
                    comp = (t - sum) - y;
                    sum = t;
                }
                if (k + m_reach >= n) {
                    sum += far_right * kernel.tail_mass((n - k) * dx);
                }
                w[static_cast<size_t>(k)] = on_solution ? v(sum) : sum;
            }
        }

        double max_speed = 0.0;
        double tv = std::fabs(w.front() - v(ext.left));
        for (size_t k = 0; k + 1 < w.size(); ++k) {
            max_speed = std::max(max_speed, std::fabs(w[k]));
            tv += std::fabs(w[k + 1] - w[k]);
        }
        max_speed = std::max(max_speed, std::fabs(w.back()));
        tv += std::fabs(v(ext.right) - w.back());
        return {max_speed, tv};
    }

private:
    const SolverConfig& config_;
    bool scan_ = false;
    double decay_ = 0.0;
    std::vector<double> weights_;
};

}  // namespace

void SolverConfig::validate() const {
    if (!(cfl > 0.0) || cfl > 0.5) {
        throw std::invalid_argument("SolverConfig: cfl must lie in (0, 0.5]");
    }
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("SolverConfig: t_end must be positive");
    }
    for (double t : snapshot_times) {
        if (t < 0.0 || t > t_end + 1e-12) {
            throw std::invalid_argument("SolverConfig: snapshot times must lie in [0, t_end]");
        }
    }
    if (variant != ModelVariant::local) {
        if (!kernel.has_value()) {
            throw std::invalid_argument("SolverConfig: nonlocal variants need a kernel");
        }
        if (!kernel->normalized()) {
            throw KernelNotNormalized("SolverConfig: kernel mass is not one");
        }
    }
}

Trajectory::Trajectory(SolverConfig config, std::vector<Snapshot> snapshots,
                       std::vector<StepAudit> audit)
    : config_(std::move(config)), snapshots_(std::move(snapshots)), audit_(std::move(audit)) {
    for (size_t i = 0; i + 1 < snapshots_.size(); ++i) {
        if (!(snapshots_[i].time < snapshots_[i + 1].time)) {
            throw std::invalid_argument("Trajectory: snapshot times must strictly increase");
        }
    }
    if (!snapshots_.empty() && snapshots_.front().time != 0.0) {
        throw std::invalid_argument("Trajectory: first snapshot must be the initial state");
    }
}

const Snapshot& Trajectory::at_time(double t, double tol) const {
    for (const Snapshot& s : snapshots_) {
        if (std::fabs(s.time - t) <= tol) return s;
    }
    throw SnapshotMissing("Trajectory: no snapshot near t = " + std::to_string(t));
}

std::vector<Trajectory::MassLedgerRow> Trajectory::mass_ledger() const {
    std::vector<MassLedgerRow> rows;
    rows.reserve(audit_.size());
    for (const StepAudit& a : audit_) {
        rows.push_back({a.time, a.mass, a.flux_in_accum - a.flux_out_accum});
    }
    return rows;
}

double cfl_dt(const InterfaceField& w, double cfl, double dx) {
    return cfl * dx / std::max(w.max_abs(), kSpeedFloor);
}

CellField step(const CellField& q, const InterfaceField& w, double dt) {
    auto r = step_impl(q, w, dt);
    for (double x : r.q) {
        if (!std::isfinite(x)) {
            throw NonfiniteState("step: state became non-finite");
        }
    }
    return CellField(q.grid(), std::move(r.q), q.extension());
}

InterfaceField model_velocity(const SolverConfig& config, const CellField& q) {
    switch (config.variant) {
        case ModelVariant::nonlocal_velocity:
            if (config.kernel->family() == KernelFamily::exponential) {
                return nonlocal_velocity_exponential_scan(q, *config.kernel, config.velocity);
            }
            return nonlocal_velocity(q, *config.kernel, config.velocity);
        case ModelVariant::nonlocal_solution:
            if (config.kernel->family() == KernelFamily::exponential) {
                return nonlocal_solution_velocity_exponential_scan(q, *config.kernel,
                                                                   config.velocity);
            }
            return nonlocal_solution_velocity(q, *config.kernel, config.velocity);
        case ModelVariant::local: {
            // decorative interface speeds for the local model
            const VelocityModel& v = config.velocity;
            const int n = q.grid().n_cells();
            std::vector<double> w(static_cast<size_t>(n) + 1);
            w.front() = v(q.extension().left);
            for (int k = 1; k < n; ++k) w[static_cast<size_t>(k)] = v(0.5 * (q[k - 1] + q[k]));
            w.back() = v(q.extension().right);
            return InterfaceField(q.grid(), std::move(w));
        }
    }
    throw std::logic_error("model_velocity: unknown variant");
}

Trajectory simulate(const SolverConfig& config, const InitialDatum& datum) {
    config.validate();
    if (config.variant == ModelVariant::local) {
        throw std::invalid_argument("simulate: use godunov_simulate for the local model");
    }
    const VelocityModel& v = config.velocity;
    if (datum.max_value() > v.q_max() + 1e-12) {
        throw std::invalid_argument("simulate: datum exceeds the admissible density range");
    }

    const GridSpec& grid = config.grid;
    const double dx = grid.dx();
    const int n = grid.n_cells();

    std::vector<double> snap_times = config.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    snap_times.erase(std::unique(snap_times.begin(), snap_times.end(),
                                 [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                     snap_times.end());

    const CellField initial = datum.rasterize(grid);
    const Extension ext = initial.extension();
    std::vector<double> q(initial.values().begin(), initial.values().end());
    std::vector<double> q_next(q.size());
    std::vector<double> w;

    const SpeedPlan plan(config);
    auto [max_speed, tv_w] = plan.evaluate(q, ext, w);

    // single-pass state summary for the audit
    auto summarize = [&](std::span<const double> vals, double time, double dt, double tvw,
                         const StepAudit* prev, double fl, double fr) {
        StepAudit a;
        a.time = time;
        a.dt = dt;
        a.tv_w = tvw;
        a.min_q = vals.front();
        a.max_q = vals.front();
        a.defect_incr = 0.0;
        a.defect_decr = 0.0;
        a.tv_q = std::fabs(vals.front() - ext.left);
        double mass = 0.0, comp = 0.0;
        double prev_val = vals.front();
        for (size_t j = 0; j < vals.size(); ++j) {
            const double x = vals[j];
            a.min_q = std::min(a.min_q, x);
            a.max_q = std::max(a.max_q, x);
            if (j > 0) {
                a.defect_incr = std::max(a.defect_incr, prev_val - x);
                a.defect_decr = std::max(a.defect_decr, x - prev_val);
                a.tv_q += std::fabs(x - prev_val);
            }
            const double y = x * dx - comp;
            const double t = mass + y;
            comp = (t - mass) - y;
            mass = t;
            prev_val = x;
        }
        a.tv_q += std::fabs(ext.right - vals.back());
        a.mass = mass;
        if (prev) {
            a.flux_in_accum = prev->flux_in_accum + dt * fl;
            a.flux_out_accum = prev->flux_out_accum + dt * fr;
        }
        return a;
    };

    std::vector<Snapshot> snapshots;
    snapshots.push_back(
        {0.0, initial, InterfaceField(grid, std::vector<double>(w.begin(), w.end()))});

    std::vector<StepAudit> audit;
    audit.push_back(summarize(q, 0.0, 0.0, tv_w, nullptr, 0.0, 0.0));

    size_t next_snap = 0;
    while (next_snap < snap_times.size() && snap_times[next_snap] <= 1e-14) ++next_snap;

    double t = 0.0;
    const long max_steps = 200'000'000L;
    long steps = 0;
    while (t < config.t_end) {
        if (++steps > max_steps) {
            throw Error("simulate: step budget exhausted");
        }
        const double t_next =
            (next_snap < snap_times.size()) ? snap_times[next_snap] : config.t_end;
        const double gap = t_next - t;
        const double dt_raw = config.cfl * dx / std::max(max_speed, kSpeedFloor);
        const bool hit = dt_raw >= gap;
        const double dt = hit ? gap : dt_raw;

        // fused conservative update
        const double lam = dt / dx;
        const double flux_left = ext.left * w[0];
        double f_prev = flux_left;
        bool finite = true;
        for (int j = 0; j < n; ++j) {
            const double f_next = q[static_cast<size_t>(j)] * w[static_cast<size_t>(j) + 1];
            const double val = q[static_cast<size_t>(j)] - lam * (f_next - f_prev);
            q_next[static_cast<size_t>(j)] = val;
            finite = finite && std::isfinite(val);
            f_prev = f_next;
        }
        if (!finite) {
            throw NonfiniteState("simulate: state became non-finite at t = " +
                                 std::to_string(t));
        }
        q.swap(q_next);
        t = hit ? t_next : t + dt;

        std::tie(max_speed, tv_w) = plan.evaluate(q, ext, w);
        audit.push_back(summarize(q, t, dt, tv_w, &audit.back(), flux_left, f_prev));

        if (hit && next_snap < snap_times.size() && t == snap_times[next_snap]) {
            snapshots.push_back({t, CellField(grid, std::vector<double>(q.begin(), q.end()), ext),
                                 InterfaceField(grid, std::vector<double>(w.begin(), w.end()))});
            ++next_snap;
        }
    }

    return Trajectory(config, std::move(snapshots), std::move(audit));
}

}  // namespace nlcl
