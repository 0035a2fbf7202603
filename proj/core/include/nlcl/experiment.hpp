#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlcl/diagnostics.hpp"
#include "nlcl/initial_data.hpp"
#include "nlcl/solver.hpp"

namespace nlcl {

/// One labelled model run as described in a config file.
struct RunSpec {
    std::string label;
    SolverConfig config;
    InitialDatum datum = InitialDatum::riemann(0.0, 0.0, 0.0);
    DiagnosticsOptions diagnostics;
};

struct SweepSpec {
    std::vector<double> etas;
    RunSpec base;                      // kernel reach replaced per eta
    std::optional<RunSpec> reference;  // convergence target, usually local
    Interval window{-2.0, 2.0};
    double time = 0.5;
};

struct CompareSpec {
    std::vector<std::string> labels;  // empty means every configured run
    double slice_time = 0.5;
    std::optional<Interval> monotonicity_window;
    Direction monotonicity_direction = Direction::decreasing;
};

struct ExperimentConfig {
    int version = 1;
    std::filesystem::path output_dir = "out";
    std::vector<RunSpec> runs;
    std::optional<SweepSpec> sweep;
    std::optional<CompareSpec> compare;
};

/// Parse and validate a config file; throws ConfigError on any problem.
ExperimentConfig parse_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config_text(const std::string& text);

/// Dispatch a run spec to the matching solver.
Trajectory run_model(const RunSpec& spec);

/// Exit codes: 0 success (and all enabled verdicts pass), 1 runtime
/// failure, 2 config error. Diagnostics go to `err`.
int cmd_simulate(const ExperimentConfig& config, int jobs, std::ostream& err);
int cmd_converge(const ExperimentConfig& config, int jobs, std::ostream& err);
int cmd_compare(const ExperimentConfig& config, int jobs, std::ostream& err);

}  // namespace nlcl
