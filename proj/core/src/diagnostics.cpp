#include "nlcl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nlcl {

namespace {

double velocity_sup_deriv(const VelocityModel& v, double lo, double hi) {
    double m = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        m = std::max(m, std::fabs(v.deriv(lo + (hi - lo) * i / 1000)));
    }
    return m;
}

}  // namespace

TvSeries tv_series(const Trajectory& traj, FieldSelector field) {
    const VelocityModel& v = traj.config().velocity;
    TvSeries out;
    for (const Snapshot& s : traj.snapshots()) {
        out.times.push_back(s.time);
        if (field == FieldSelector::q) {
            out.values.push_back(total_variation(s.q));
        } else {
            out.values.push_back(total_variation(s.w, v(s.q.extension().left),
                                                 v(s.q.extension().right)));
        }
    }
    const Snapshot& init = traj.snapshots().front();
    const auto vals = init.q.values();
    const double lo = std::min({*std::min_element(vals.begin(), vals.end()),
                                init.q.extension().left, init.q.extension().right});
    const double hi = std::max({*std::max_element(vals.begin(), vals.end()),
                                init.q.extension().left, init.q.extension().right});
    const double tv0 = total_variation(init.q);
    out.declared_bound = (field == FieldSelector::q) ? tv0 : velocity_sup_deriv(v, lo, hi) * tv0;
    return out;
}

OleinikResult oleinik_check(const Trajectory& traj, OleinikOrientation orientation,
                            std::optional<double> t_min) {
    OleinikResult res;
    res.t_min = t_min.value_or(0.05 * traj.config().t_end);
    const double dx = traj.config().grid.dx();
    double c = 0.0;
    for (const Snapshot& s : traj.snapshots()) {
        if (s.time < res.t_min) continue;
        double extreme = 0.0;
        for (int j = 0; j + 1 < s.q.size(); ++j) {
            const double slope = (s.q[j + 1] - s.q[j]) / dx;
            if (orientation == OleinikOrientation::upper) {
                extreme = std::max(extreme, slope);
            } else {
                extreme = std::max(extreme, -slope);
            }
        }
        c = std::max(c, s.time * extreme);
    }
    res.constant = c;
    res.verdict = std::isfinite(c);
    return res;
}

std::vector<ConvergenceRow> convergence_table(
    const std::vector<std::pair<double, const Trajectory*>>& runs, const Trajectory& reference,
    Interval window, double time) {
    const Snapshot& ref_snap = reference.at_time(time);
    std::vector<ConvergenceRow> rows;
    for (const auto& [eta, traj] : runs) {
        const Snapshot& snap = traj->at_time(time);
        const GridSpec& run_grid = snap.q.grid();
        const GridSpec& ref_grid = ref_snap.q.grid();
        if (run_grid.x_min() != ref_grid.x_min() || run_grid.x_max() != ref_grid.x_max()) {
            throw GridMismatch("convergence_table: reference domain differs");
        }
        if (ref_grid.n_cells() % run_grid.n_cells() != 0) {
            throw GridMismatch("convergence_table: reference cells must be a multiple");
        }
        const int factor = ref_grid.n_cells() / run_grid.n_cells();
        const CellField ref_coarse = (factor == 1) ? ref_snap.q : coarsen(ref_snap.q, factor);
        rows.push_back({eta, l1_distance(snap.q, ref_coarse, window)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.eta > b.eta; });
    return rows;
}

bool DiagnosticsReport::all_pass() const {
    bool ok = max_principle_ok && nonnegative_ok && conservation_ok;
    if (tv_decay_checked) ok = ok && tv_w_nonincreasing && tv_w_within_bound;
    if (monotone_checked) ok = ok && monotone_preserved;
    if (entropy_checked) ok = ok && entropy_ok;
    return ok;
}

std::string DiagnosticsReport::to_json() const {
    nlohmann::json j;
    j["max_principle"] = {{"observed_min", observed_min},
                          {"observed_max", observed_max},
                          {"declared_lo", declared_lo},
                          {"declared_hi", declared_hi},
                          {"verdict", max_principle_ok}};
    j["nonnegative"] = {{"verdict", nonnegative_ok}};
    j["conservation"] = {{"mass_drift", mass_drift}, {"verdict", conservation_ok}};
    j["tv_w"] = {{"initial", tv_w_initial},
                 {"declared_bound", tv_w_declared_bound},
                 {"within_bound", tv_w_within_bound},
                 {"max_step_increase", tv_w_max_step_increase},
                 {"nonincreasing", tv_w_nonincreasing},
                 {"checked", tv_decay_checked}};
    j["monotonicity"] = {{"defect_incr_max", defect_incr_max},
                         {"defect_decr_max", defect_decr_max},
                         {"checked", monotone_checked},
                         {"preserved", monotone_preserved}};
    j["entropy"] = {{"checked", entropy_checked},
                    {"worst_residual", entropy_worst},
                    {"error_budget", entropy_budget},
                    {"verdict", entropy_ok}};
    j["oleinik"] = {{"checked", oleinik_checked},
                    {"upper_c", oleinik_upper_c},
                    {"lower_c", oleinik_lower_c}};
    nlohmann::json errs = nlohmann::json::object();
    for (const auto& [label, err] : l1_errors) errs[label] = err;
    j["l1_errors"] = errs;
    j["all_pass"] = all_pass();
    return j.dump(2);
}

std::string DiagnosticsReport::verdict_csv() const {
    std::ostringstream os;
    os << "check,value,threshold,verdict\n";
    auto row = [&os](const char* name, double value, double threshold, bool ok) {
        os << name << ',' << value << ',' << threshold << ',' << (ok ? "pass" : "fail") << '\n';
    };
    row("max_principle_min", observed_min, declared_lo, max_principle_ok);
    row("max_principle_max", observed_max, declared_hi, max_principle_ok);
    row("nonnegative", observed_min, 0.0, nonnegative_ok);
    row("conservation", mass_drift, 0.0, conservation_ok);
    if (tv_decay_checked) {
        row("tv_w_bound", tv_w_initial, tv_w_declared_bound, tv_w_within_bound);
        row("tv_w_decay", tv_w_max_step_increase, 0.0, tv_w_nonincreasing);
    }
    if (monotone_checked) {
        row("monotone", std::max(defect_incr_max, defect_decr_max), 0.0, monotone_preserved);
    }
    if (entropy_checked) {
        row("entropy", entropy_worst, -entropy_budget, entropy_ok);
    }
    return os.str();
}

DiagnosticsReport diagnose(const Trajectory& traj, const DiagnosticsOptions& opts) {
    DiagnosticsReport rep;
    const auto& audit = traj.audit();
    const Snapshot& init = traj.snapshots().front();

    const auto q0 = init.q.values();
    rep.declared_lo = std::min({*std::min_element(q0.begin(), q0.end()),
                                init.q.extension().left, init.q.extension().right});
    rep.declared_hi = std::max({*std::max_element(q0.begin(), q0.end()),
                                init.q.extension().left, init.q.extension().right});

    rep.observed_min = audit.front().min_q;
    rep.observed_max = audit.front().max_q;
    rep.mass_drift = 0.0;
    rep.tv_w_max_step_increase = -std::numeric_limits<double>::infinity();
    const double mass0 = audit.front().mass;
    for (size_t i = 0; i < audit.size(); ++i) {
        const StepAudit& a = audit[i];
        rep.observed_min = std::min(rep.observed_min, a.min_q);
        rep.observed_max = std::max(rep.observed_max, a.max_q);
        rep.mass_drift = std::max(
            rep.mass_drift, std::fabs(a.mass - mass0 - (a.flux_in_accum - a.flux_out_accum)));
        rep.defect_incr_max = std::max(rep.defect_incr_max, a.defect_incr);
        rep.defect_decr_max = std::max(rep.defect_decr_max, a.defect_decr);
        if (i > 0) {
            rep.tv_w_max_step_increase =
                std::max(rep.tv_w_max_step_increase, a.tv_w - audit[i - 1].tv_w);
        }
    }
    if (audit.size() < 2) rep.tv_w_max_step_increase = 0.0;

    rep.max_principle_ok = rep.observed_min >= rep.declared_lo - opts.tol_max_principle &&
                           rep.observed_max <= rep.declared_hi + opts.tol_max_principle;
    rep.nonnegative_ok = rep.observed_min >= -opts.tol_nonnegative;
    rep.conservation_ok = rep.mass_drift <= opts.tol_conservation;

    rep.tv_w_initial = audit.front().tv_w;
    const VelocityModel& v = traj.config().velocity;
    rep.tv_w_declared_bound =
        velocity_sup_deriv(v, rep.declared_lo, rep.declared_hi) * audit.front().tv_q;
    rep.tv_w_within_bound = rep.tv_w_initial <= rep.tv_w_declared_bound + 1e-12;
    rep.tv_w_nonincreasing = rep.tv_w_max_step_increase <= opts.tol_tv_step;
    rep.tv_decay_checked = opts.check_tv_decay;

    rep.monotone_checked = opts.check_monotone;
    if (opts.check_monotone) {
        const bool initially_incr = audit.front().defect_incr <= opts.tol_defect;
        const bool initially_decr = audit.front().defect_decr <= opts.tol_defect;
        if (initially_incr) {
            rep.monotone_preserved = rep.defect_incr_max <= opts.tol_defect;
        } else if (initially_decr) {
            rep.monotone_preserved = rep.defect_decr_max <= opts.tol_defect;
        } else {
            rep.monotone_preserved = false;  // datum was not monotone
        }
    }

    if (opts.check_entropy) {
        rep.entropy_checked = true;
        double lo = rep.declared_lo;
        double hi = rep.declared_hi;
        if (hi - lo < 1e-9) {  // constant data still need a usable table
            hi = lo + 0.1;
        }
        const EntropyPair pair = build_entropy_pair(v, lo, hi, EntropyKind::tailored);
        const auto res = entropy_residual(traj, pair, opts.entropy_family);
        rep.entropy_worst = res.worst;
        rep.entropy_budget = entropy_error_budget(traj, pair);
        rep.entropy_ok = rep.entropy_worst >= -rep.entropy_budget;
    }

    if (opts.check_oleinik) {
        rep.oleinik_checked = true;
        rep.oleinik_upper_c = oleinik_check(traj, OleinikOrientation::upper).constant;
        rep.oleinik_lower_c = oleinik_check(traj, OleinikOrientation::lower).constant;
    }
    return rep;
}

}  // namespace nlcl
