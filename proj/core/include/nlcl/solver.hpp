#pragma once

#include <optional>
#include <vector>

#include "nlcl/grid.hpp"
#include "nlcl/initial_data.hpp"
#include "nlcl/kernel.hpp"
#include "nlcl/velocity.hpp"

namespace nlcl {

enum class ModelVariant { nonlocal_velocity, nonlocal_solution, local };

/// Parameters of one simulation run.
struct SolverConfig {
    ModelVariant variant = ModelVariant::nonlocal_velocity;
    std::optional<KernelSpec> kernel;  // absent for the local model
    VelocityModel velocity = VelocityModel::linear();
    GridSpec grid{-2.0, 2.0, 2000};
    double cfl = 0.5;
    double t_end = 0.5;
    std::vector<double> snapshot_times;  // t = 0 is always recorded

    void validate() const;  // throws std::invalid_argument
};

struct Snapshot {
    double time;
    CellField q;
    InterfaceField w;
};

/// Per-step record of the certified quantities. The entry at index 0
/// describes the initial state (dt = 0).
struct StepAudit {
    double time = 0.0;
    double dt = 0.0;
    double min_q = 0.0;
    double max_q = 0.0;
    double defect_incr = 0.0;  // monotonicity defect, increasing orientation
    double defect_decr = 0.0;
    double tv_q = 0.0;
    double tv_w = 0.0;
    double mass = 0.0;              // integral of q over the domain
    double flux_in_accum = 0.0;     // time-integrated inflow at x_min
    double flux_out_accum = 0.0;    // time-integrated outflow at x_max
};

/// Time-ordered run record: snapshots at the requested times plus the
/// per-step audit. Immutable once produced.
class Trajectory {
public:
    Trajectory(SolverConfig config, std::vector<Snapshot> snapshots,
               std::vector<StepAudit> audit);

    const SolverConfig& config() const { return config_; }
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }
    const std::vector<StepAudit>& audit() const { return audit_; }

    const Snapshot& at_time(double t, double tol = 1e-9) const;  // SnapshotMissing

    /// (time, total mass, accumulated net boundary flux) rows.
    struct MassLedgerRow {
        double time;
        double mass;
        double boundary_flux;  // accumulated inflow minus outflow
    };
    std::vector<MassLedgerRow> mass_ledger() const;

private:
    SolverConfig config_;
    std::vector<Snapshot> snapshots_;
    std::vector<StepAudit> audit_;
};

/// CFL-limited time increment: cfl * dx / max speed (with a tiny floor so
/// a frozen state yields a huge dt that the caller clamps to the next
/// snapshot time).
double cfl_dt(const InterfaceField& w, double cfl, double dx);

/// One conservative upwind step with interface speeds w >= 0; the upwind
/// cell is always the left one, and the left boundary inflow uses the
/// left extension value. Throws UnstableStep when dt violates the CFL
/// contract dt * max|w| / dx <= 1.
CellField step(const CellField& q, const InterfaceField& w, double dt);

/// Interface speed field of the configured model variant for state q.
InterfaceField model_velocity(const SolverConfig& config, const CellField& q);

/// Run the nonlocal dynamics (either variant) to t_end.
Trajectory simulate(const SolverConfig& config, const InitialDatum& datum);

}  // namespace nlcl
