#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlcl/errors.hpp"
#include "nlcl/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    int jobs = 1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--jobs", args.jobs, "concurrent runs")->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out_dir, "override the config output directory");
}

int dispatch(const std::string& command, const CommonArgs& args) {
    nlcl::ExperimentConfig config;
    try {
        config = nlcl::parse_experiment_config(args.config_path);
    } catch (const nlcl::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;

    if (command == "simulate") return nlcl::cmd_simulate(config, args.jobs, std::cerr);
    if (command == "converge") return nlcl::cmd_converge(config, args.jobs, std::cerr);
    return nlcl::cmd_compare(config, args.jobs, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume runs of conservation laws with nonlocal velocity"};
    app.require_subcommand(1);

    CommonArgs sim_args, conv_args, cmp_args;
    add_common(app.add_subcommand("simulate", "run configured specs and certify them"),
               sim_args);
    add_common(app.add_subcommand("converge", "eta sweep against a reference run"), conv_args);
    add_common(app.add_subcommand("compare", "overlay model variants at a slice time"),
               cmp_args);

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("simulate")) return dispatch("simulate", sim_args);
    if (app.got_subcommand("converge")) return dispatch("converge", conv_args);
    return dispatch("compare", cmp_args);
}
