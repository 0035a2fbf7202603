#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlcl/entropy.hpp"
#include "nlcl/solver.hpp"

namespace nlcl {

enum class FieldSelector { q, w };

struct TvSeries {
    std::vector<double> times;
    std::vector<double> values;
    /// ||V'|| on the initial range times |q0|_TV for field w; |q0|_TV for q.
    double declared_bound = 0.0;
};

/// Total variation of the requested field at each snapshot.
TvSeries tv_series(const Trajectory& traj, FieldSelector field);

enum class OleinikOrientation { upper, lower };

struct OleinikResult {
    double constant = 0.0;  // smallest C with slope <= C/t (resp. >= -C/t)
    bool verdict = false;
    double t_min = 0.0;
};

/// One-sided slope bound fit over snapshots with t >= t_min
/// (default 0.05 * t_end).
OleinikResult oleinik_check(const Trajectory& traj, OleinikOrientation orientation,
                            std::optional<double> t_min = std::nullopt);

struct ConvergenceRow {
    double eta;
    double l1_error;
};

/// L1 errors of the runs against the reference at the given time over the
/// window, sorted by eta descending. The reference may live on a finer
/// grid with an integer cell ratio; it is coarsened by exact averaging.
std::vector<ConvergenceRow> convergence_table(
    const std::vector<std::pair<double, const Trajectory*>>& runs, const Trajectory& reference,
    Interval window, double time);

struct DiagnosticsOptions {
    double tol_max_principle = 1e-10;
    double tol_nonnegative = 1e-12;
    double tol_conservation = 1e-10;
    double tol_tv_step = 1e-8;
    double tol_defect = 1e-12;

    /// Assert per-step TV(w) decay (valid under the velocity tv_bound
    /// condition; leave off otherwise).
    bool check_tv_decay = false;
    /// Assert per-step monotonicity preservation (for monotone data).
    bool check_monotone = false;
    /// Evaluate the entropy residual with the tailored pair.
    bool check_entropy = false;
    TestFunctionFamily entropy_family;
    /// Fit Oleinik constants.
    bool check_oleinik = false;
};

/// Certified-property summary of one run; verdicts are pure functions of
/// the stored numbers and tolerances.
struct DiagnosticsReport {
    // maximum principle and nonnegativity
    double observed_min = 0.0;
    double observed_max = 0.0;
    double declared_lo = 0.0;
    double declared_hi = 0.0;
    bool max_principle_ok = false;
    bool nonnegative_ok = false;

    // conservation
    double mass_drift = 0.0;  // worst |mass(t) - mass(0) - net boundary flux|
    bool conservation_ok = false;

    // total variation of the nonlocal velocity
    double tv_w_initial = 0.0;
    double tv_w_declared_bound = 0.0;
    bool tv_w_within_bound = false;
    double tv_w_max_step_increase = 0.0;
    bool tv_w_nonincreasing = false;
    bool tv_decay_checked = false;

    // monotonicity
    double defect_incr_max = 0.0;
    double defect_decr_max = 0.0;
    bool monotone_checked = false;
    bool monotone_preserved = false;

    // entropy
    bool entropy_checked = false;
    double entropy_worst = 0.0;
    double entropy_budget = 0.0;
    bool entropy_ok = false;

    // Oleinik
    bool oleinik_checked = false;
    double oleinik_upper_c = 0.0;
    double oleinik_lower_c = 0.0;

    // labelled L1 errors, filled by sweep drivers
    std::vector<std::pair<std::string, double>> l1_errors;

    bool all_pass() const;
    std::string to_json() const;
    /// Flat one-row-per-verdict table: check,value,threshold,verdict.
    std::string verdict_csv() const;
};

DiagnosticsReport diagnose(const Trajectory& traj, const DiagnosticsOptions& opts = {});

}  // namespace nlcl
