#include "nlcl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nlcl/csv.hpp"
#include "nlcl/local.hpp"

namespace nlcl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw ConfigError("config: " + what);
}

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        fail(std::string("missing numeric field '") + key + "'");
    }
    return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(std::string("field '") + key + "' must be numeric");
    return j[key].get<double>();
}

std::string require_string(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
        fail(std::string("missing string field '") + key + "'");
    }
    return j[key].get<std::string>();
}

std::vector<double> number_array(const json& j) {
    if (!j.is_array()) fail("expected a numeric array");
    std::vector<double> out;
    for (const auto& e : j) {
        if (!e.is_number()) fail("expected a numeric array");
        out.push_back(e.get<double>());
    }
    return out;
}

KernelSpec parse_kernel(const json& j) {
    const std::string family = require_string(j, "family");
    const double eta = require_number(j, "eta");
    if (family == "exponential") return KernelSpec::exponential(eta);
    if (family == "constant") return KernelSpec::constant(eta);
    if (family == "tabulated") {
        if (!j.contains("knots") || !j.contains("values")) {
            fail("tabulated kernel needs 'knots' and 'values'");
        }
        return KernelSpec::tabulated(eta, number_array(j["knots"]), number_array(j["values"]));
    }
    fail("unknown kernel family '" + family + "'");
}

VelocityModel parse_velocity(const json& j) {
    const std::string family = require_string(j, "family");
    if (family == "linear") return VelocityModel::linear();
    if (family == "quadratic") return VelocityModel::quadratic();
    if (family == "greenshields") {
        const int k = static_cast<int>(require_number(j, "k"));
        return VelocityModel::greenshields(k, number_or(j, "v_max", 1.0),
                                           number_or(j, "q_max", 1.0));
    }
    if (family == "polynomial") {
        if (!j.contains("coefficients")) fail("polynomial velocity needs 'coefficients'");
        return VelocityModel::polynomial(number_array(j["coefficients"]), "polynomial",
                                         number_or(j, "q_max", 1.0));
    }
    fail("unknown velocity family '" + family + "'");
}

InitialDatum parse_datum(const json& j) {
    const std::string family = require_string(j, "family");
    if (family == "box") {
        return InitialDatum::box(require_number(j, "base"), require_number(j, "height"),
                                 require_number(j, "a"), require_number(j, "b"));
    }
    if (family == "riemann") {
        return InitialDatum::riemann(require_number(j, "q_l"), require_number(j, "q_r"),
                                     require_number(j, "x0"));
    }
    if (family == "ramp") {
        return InitialDatum::ramp(require_number(j, "y0"), require_number(j, "y1"),
                                  require_number(j, "a"), require_number(j, "b"));
    }
    if (family == "piecewise_constant") {
        if (!j.contains("breaks") || !j.contains("values")) {
            fail("piecewise_constant datum needs 'breaks' and 'values'");
        }
        return InitialDatum::piecewise_constant(number_array(j["breaks"]),
                                                number_array(j["values"]));
    }
    fail("unknown datum family '" + family + "'");
}

GridSpec parse_grid(const json& j) {
    return GridSpec(require_number(j, "x_min"), require_number(j, "x_max"),
                    static_cast<int>(require_number(j, "n_cells")));
}

ModelVariant parse_variant(const std::string& name) {
    if (name == "nonlocal_velocity") return ModelVariant::nonlocal_velocity;
    if (name == "nonlocal_solution") return ModelVariant::nonlocal_solution;
    if (name == "local") return ModelVariant::local;
    fail("unknown variant '" + name + "'");
}

RunSpec parse_run(const json& j, int index) {
    RunSpec spec;
    spec.label = j.contains("label") ? require_string(j, "label")
                                     : ("run_" + std::to_string(index));
    spec.config.variant = parse_variant(require_string(j, "variant"));
    if (spec.config.variant != ModelVariant::local) {
        if (!j.contains("kernel")) fail("run '" + spec.label + "' needs a kernel");
        spec.config.kernel = parse_kernel(j["kernel"]);
    } else if (j.contains("kernel")) {
        fail("run '" + spec.label + "' is local and must not name a kernel");
    }
    if (!j.contains("velocity")) fail("run '" + spec.label + "' needs a velocity");
    spec.config.velocity = parse_velocity(j["velocity"]);
    if (!j.contains("datum")) fail("run '" + spec.label + "' needs a datum");
    spec.datum = parse_datum(j["datum"]);
    if (!j.contains("grid")) fail("run '" + spec.label + "' needs a grid");
    spec.config.grid = parse_grid(j["grid"]);
    spec.config.cfl = number_or(j, "cfl", 0.5);
    spec.config.t_end = require_number(j, "t_end");

    if (j.contains("snapshot_times")) {
        const json& st = j["snapshot_times"];
        if (st.is_array()) {
            spec.config.snapshot_times = number_array(st);
        } else if (st.is_object() && st.contains("count")) {
            const int count = static_cast<int>(require_number(st, "count"));
            if (count < 2) fail("snapshot count must be at least 2");
            for (int i = 0; i < count; ++i) {
                spec.config.snapshot_times.push_back(spec.config.t_end * i / (count - 1));
            }
        } else {
            fail("snapshot_times must be an array or {\"count\": N}");
        }
    } else {
        spec.config.snapshot_times = {0.0, spec.config.t_end};
    }

    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        spec.diagnostics.check_tv_decay = d.value("tv_decay", false);
        spec.diagnostics.check_monotone = d.value("monotone", false);
        spec.diagnostics.check_entropy = d.value("entropy", false);
        spec.diagnostics.check_oleinik = d.value("oleinik", false);
    }

    try {
        spec.config.validate();
    } catch (const std::exception& e) {
        fail("run '" + spec.label + "': " + e.what());
    }
    return spec;
}

Interval parse_interval(const json& j) {
    const auto v = number_array(j);
    if (v.size() != 2 || v[0] > v[1]) fail("interval must be [lo, hi]");
    return {v[0], v[1]};
}

/// Run up to `jobs` specs concurrently; results land in spec order.
std::vector<Trajectory> run_all(const std::vector<RunSpec>& specs, int jobs) {
    jobs = std::max(1, jobs);
    std::vector<std::optional<Trajectory>> slots(specs.size());
    size_t next = 0;
    while (next < specs.size()) {
        const size_t batch = std::min<size_t>(static_cast<size_t>(jobs), specs.size() - next);
        std::vector<std::future<Trajectory>> futures;
        for (size_t i = 0; i < batch; ++i) {
            const RunSpec& spec = specs[next + i];
            futures.push_back(
                std::async(std::launch::async, [&spec]() { return run_model(spec); }));
        }
        for (size_t i = 0; i < batch; ++i) {
            slots[next + i] = futures[i].get();
        }
        next += batch;
    }
    std::vector<Trajectory> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config_text(buf.str());
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    ExperimentConfig config;
    if (!j.contains("version") || !j["version"].is_number_integer() ||
        j["version"].get<int>() != 1) {
        fail("config requires \"version\": 1");
    }
    if (j.contains("output_dir")) config.output_dir = require_string(j, "output_dir");

    if (j.contains("runs")) {
        if (!j["runs"].is_array()) fail("'runs' must be an array");
        int index = 0;
        for (const auto& rj : j["runs"]) {
            config.runs.push_back(parse_run(rj, index++));
        }
    }
    std::vector<std::string> labels;
    for (const auto& r : config.runs) labels.push_back(r.label);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        fail("run labels must be unique");
    }

    if (j.contains("sweep")) {
        const json& sj = j["sweep"];
        SweepSpec sweep;
        if (!sj.contains("etas")) fail("sweep needs 'etas'");
        sweep.etas = number_array(sj["etas"]);
        if (sweep.etas.empty()) fail("sweep needs at least one eta");
        if (!sj.contains("base")) fail("sweep needs a 'base' run spec");
        sweep.base = parse_run(sj["base"], 0);
        if (sweep.base.config.variant == ModelVariant::local) {
            fail("sweep base must be a nonlocal variant");
        }
        if (sj.contains("reference")) {
            sweep.reference = parse_run(sj["reference"], 1);
        }
        if (sj.contains("window")) sweep.window = parse_interval(sj["window"]);
        sweep.time = number_or(sj, "time", sweep.base.config.t_end);
        config.sweep = std::move(sweep);
    }

    if (j.contains("compare")) {
        const json& cj = j["compare"];
        CompareSpec cmp;
        if (cj.contains("labels")) {
            for (const auto& l : cj["labels"]) {
                if (!l.is_string()) fail("compare labels must be strings");
                cmp.labels.push_back(l.get<std::string>());
            }
            for (const auto& want : cmp.labels) {
                const bool known = std::any_of(config.runs.begin(), config.runs.end(),
                                               [&](const RunSpec& r) { return r.label == want; });
                if (!known) fail("compare references unknown label '" + want + "'");
            }
        }
        cmp.slice_time = require_number(cj, "slice_time");
        if (cj.contains("monotonicity")) {
            const json& mj = cj["monotonicity"];
            if (mj.contains("window")) cmp.monotonicity_window = parse_interval(mj["window"]);
            if (mj.contains("direction")) {
                const std::string d = require_string(mj, "direction");
                if (d == "increasing") {
                    cmp.monotonicity_direction = Direction::increasing;
                } else if (d == "decreasing") {
                    cmp.monotonicity_direction = Direction::decreasing;
                } else {
                    fail("monotonicity direction must be increasing or decreasing");
                }
            }
        }
        config.compare = std::move(cmp);
    }
    return config;
}

Trajectory run_model(const RunSpec& spec) {
    if (spec.config.variant == ModelVariant::local) {
        return godunov_simulate(FluxModel(spec.config.velocity), spec.datum, spec.config.grid,
                                spec.config.cfl, spec.config.t_end,
                                spec.config.snapshot_times);
    }
    return simulate(spec.config, spec.datum);
}

int cmd_simulate(const ExperimentConfig& config, int jobs, std::ostream& err) {
    if (config.runs.empty()) {
        err << "simulate: config lists no runs\n";
        return 2;
    }
    try {
        const auto trajectories = run_all(config.runs, jobs);
        bool all_ok = true;
        for (size_t i = 0; i < config.runs.size(); ++i) {
            const RunSpec& spec = config.runs[i];
            const Trajectory& traj = trajectories[i];
            const DiagnosticsReport report = diagnose(traj, spec.diagnostics);
            const auto dir = config.output_dir / spec.label;
            std::filesystem::create_directories(dir);
            write_file_atomic(dir / "trajectory.csv", trajectory_csv(traj));
            write_file_atomic(dir / "heatmap.csv", heatmap_csv(traj));
            write_file_atomic(dir / "report.json", report.to_json() + "\n");
            write_file_atomic(dir / "verdicts.csv", report.verdict_csv());
            if (!report.all_pass()) {
                err << "simulate: verdicts failed for run '" << spec.label << "'\n";
                all_ok = false;
            }
        }
        return all_ok ? 0 : 1;
    } catch (const std::exception& e) {
        err << "simulate: " << e.what() << '\n';
        return 1;
    }
}

int cmd_converge(const ExperimentConfig& config, int jobs, std::ostream& err) {
    if (!config.sweep.has_value()) {
        err << "converge: config has no 'sweep' section\n";
        return 2;
    }
    const SweepSpec& sweep = *config.sweep;
    if (!sweep.reference.has_value()) {
        err << "converge: sweep needs a 'reference' run\n";
        return 2;
    }
    try {
        std::vector<RunSpec> specs;
        for (double eta : sweep.etas) {
            RunSpec spec = sweep.base;
            std::ostringstream label;
            label << "eta_" << format_double(eta);
            spec.label = label.str();
            const KernelSpec& base_kernel = *spec.config.kernel;
            switch (base_kernel.family()) {
                case KernelFamily::exponential:
                    spec.config.kernel = KernelSpec::exponential(eta);
                    break;
                case KernelFamily::constant:
                    spec.config.kernel = KernelSpec::constant(eta);
                    break;
                case KernelFamily::tabulated:
                    fail("sweep over tabulated kernels is not supported");
            }
            specs.push_back(std::move(spec));
        }

        std::vector<Trajectory> trajectories;
        std::vector<double> runtimes;
        for (const RunSpec& spec : specs) {
            const auto tic = std::chrono::steady_clock::now();
            trajectories.push_back(run_model(spec));
            const auto toc = std::chrono::steady_clock::now();
            runtimes.push_back(std::chrono::duration<double>(toc - tic).count());
        }
        (void)jobs;  // runs are timed individually, so they stay sequential

        const Trajectory reference = run_model(*sweep.reference);

        std::vector<std::pair<double, const Trajectory*>> rows;
        for (size_t i = 0; i < specs.size(); ++i) {
            rows.push_back({sweep.etas[i], &trajectories[i]});
        }
        const auto table = convergence_table(rows, reference, sweep.window, sweep.time);

        std::ostringstream csv;
        csv << "eta,l1_error,tv_w_max,runtime_s\n";
        bool decreasing = true;
        for (size_t i = 0; i < table.size(); ++i) {
            // recover the matching run index for tv/runtime columns
            size_t run_idx = 0;
            for (size_t k = 0; k < sweep.etas.size(); ++k) {
                if (sweep.etas[k] == table[i].eta) run_idx = k;
            }
            double tv_w_max = 0.0;
            for (const StepAudit& a : trajectories[run_idx].audit()) {
                tv_w_max = std::max(tv_w_max, a.tv_w);
            }
            csv << format_double(table[i].eta) << ',' << format_double(table[i].l1_error) << ','
                << format_double(tv_w_max) << ',' << format_double(runtimes[run_idx]) << '\n';
            if (i > 0 && !(table[i].l1_error < table[i - 1].l1_error)) decreasing = false;
        }
        std::filesystem::create_directories(config.output_dir);
        write_file_atomic(config.output_dir / "convergence.csv", csv.str());
        if (!decreasing) {
            err << "converge: errors do not decrease down the eta ladder\n";
            return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "converge: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "converge: " << e.what() << '\n';
        return 1;
    }
}

int cmd_compare(const ExperimentConfig& config, int jobs, std::ostream& err) {
    if (!config.compare.has_value()) {
        err << "compare: config has no 'compare' section\n";
        return 2;
    }
    const CompareSpec& cmp = *config.compare;
    std::vector<RunSpec> specs;
    for (const RunSpec& r : config.runs) {
        if (cmp.labels.empty() ||
            std::find(cmp.labels.begin(), cmp.labels.end(), r.label) != cmp.labels.end()) {
            specs.push_back(r);
        }
    }
    if (specs.empty()) {
        err << "compare: no runs selected\n";
        return 2;
    }
    for (const RunSpec& spec : specs) {
        if (!(spec.config.grid == specs.front().config.grid)) {
            err << "compare: all runs must share one grid\n";
            return 2;
        }
    }
    try {
        const auto trajectories = run_all(specs, jobs);

        const GridSpec& grid = specs.front().config.grid;
        std::ostringstream slices;
        slices << "x";
        for (const RunSpec& spec : specs) slices << ',' << spec.label;
        slices << '\n';
        std::vector<const Snapshot*> at;
        for (const Trajectory& traj : trajectories) {
            at.push_back(&traj.at_time(cmp.slice_time));
        }
        for (int j = 0; j < grid.n_cells(); ++j) {
            slices << format_double(grid.center(j));
            for (const Snapshot* s : at) slices << ',' << format_double(s->q[j]);
            slices << '\n';
        }

        const Interval window = cmp.monotonicity_window.value_or(grid.domain());
        std::ostringstream mono;
        mono << "t";
        for (const RunSpec& spec : specs) mono << ',' << spec.label;
        mono << '\n';
        const auto& lead_snaps = trajectories.front().snapshots();
        for (size_t si = 0; si < lead_snaps.size(); ++si) {
            mono << format_double(lead_snaps[si].time);
            for (const Trajectory& traj : trajectories) {
                const Snapshot& s = traj.at_time(lead_snaps[si].time);
                mono << ','
                     << format_double(monotonicity_defect(s.q, cmp.monotonicity_direction,
                                                          window));
            }
            mono << '\n';
        }

        std::filesystem::create_directories(config.output_dir);
        write_file_atomic(config.output_dir / "slices.csv", slices.str());
        write_file_atomic(config.output_dir / "monotonicity.csv", mono.str());
        return 0;
    } catch (const std::exception& e) {
        err << "compare: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace nlcl
