#include "cyclometer/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using cyclometer::cli::RunConfig;

void add_run_flags(CLI::App* cmd, RunConfig& cfg, bool with_emit) {
    cmd->add_flag("--promote,!--no-promote", cfg.promote, "Run static promotion before lowering");
    cmd->add_flag("!--no-instrument", cfg.instrument, "Skip probe instrumentation");
    cmd->add_option("--mem", cfg.mem, "Initial memory contents (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--max-cycles", cfg.max_cycles, "Simulation cycle bound");
    cmd->add_option("--out-dir", cfg.out_dir, "Artifact directory (CYCLOMETER_OUT overrides)");
    if (with_emit) {
        cmd->add_option("--vcd", cfg.vcd, "Profile an existing trace; needs its .map.json sidecar")
            ->check(CLI::ExistingFile);
        cmd->add_option("--emit", cfg.emit, "Artifacts to produce")
            ->delimiter(',')
            ->check(CLI::IsMember(cyclometer::cli::kAllEmits));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclometer: cycle-level profiler for a Calyx-style IL"};
    app.require_subcommand(1);

    RunConfig profile_cfg;
    auto* profile = app.add_subcommand("profile", "Compile, simulate, reconstruct and visualize");
    profile->add_option("input", profile_cfg.input, "IL program")->check(CLI::ExistingFile);
    add_run_flags(profile, profile_cfg, true);

    RunConfig a, b;
    std::string b_input;
    bool b_promote = false, b_promote_set = false;
    auto* compare = app.add_subcommand("compare", "Profile two versions and report the difference");
    compare->add_option("a", a.input, "Baseline program")->required()->check(CLI::ExistingFile);
    compare->add_option("b", b_input, "Optimized program (defaults to the baseline)")->check(CLI::ExistingFile);
    add_run_flags(compare, a, false);
    compare->add_option("--mem-b", b.mem, "Memory contents for the second version")->check(CLI::ExistingFile);
    compare->add_flag("--promote-b,!--no-promote-b", b_promote, "Promotion setting for the second version")
        ->each([&](const std::string&) { b_promote_set = true; });

    RunConfig compile_cfg;
    auto* compile = app.add_subcommand("compile", "Emit the lowered program and its source map");
    compile->add_option("input", compile_cfg.input, "IL program")->required()->check(CLI::ExistingFile);
    add_run_flags(compile, compile_cfg, false);

    RunConfig sim_cfg;
    auto* simulate = app.add_subcommand("simulate", "Simulate and write the VCD trace");
    simulate->add_option("input", sim_cfg.input, "IL program")->required()->check(CLI::ExistingFile);
    add_run_flags(simulate, sim_cfg, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (profile->parsed()) {
            if (profile_cfg.input.empty() && !profile_cfg.vcd) throw cyclometer::cli::CliError("profile needs an input program or --vcd");
            return cyclometer::cli::cmd_profile(profile_cfg, std::cout);
        }
        if (compare->parsed()) {
            std::optional<std::string> mem_b = b.mem;
            b = a;
            if (!b_input.empty()) b.input = b_input;
            if (mem_b) b.mem = mem_b;
            if (b_promote_set) b.promote = b_promote;
            return cyclometer::cli::cmd_compare(a, b, std::cout);
        }
        if (compile->parsed()) return cyclometer::cli::cmd_compile(compile_cfg, std::cout);
        if (simulate->parsed()) return cyclometer::cli::cmd_simulate(sim_cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "cyclometer: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
