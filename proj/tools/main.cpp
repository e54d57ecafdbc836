#include "runner.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"spectral solver for time-fractional diffusion: forward "
                 "evolution and source recovery from the time-averaged state"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;

    auto add_mode = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("-o,--output-dir", output_dir,
                        "output directory (overrides config and environment)");
        return sub;
    };

    CLI::App* fwd = add_mode("forward", "evolve the state from phi and f");
    CLI::App* inv = add_mode("inverse", "recover f from the time-averaged state");
    CLI::App* rt = add_mode("roundtrip",
                            "solve forward from a known f, then recover it");

    double rho = 0.0, mu = 1.0, z = 0.0;
    CLI::App* ml = app.add_subcommand("ml-eval",
                                      "evaluate the two-parameter relaxation "
                                      "function E_{rho,mu}(z)");
    ml->add_option("--rho", rho, "first parameter, in (0, 1]")->required();
    ml->add_option("--mu", mu, "second parameter, positive");
    ml->add_option("--z", z, "argument")->required();

    bool quick = false;
    CLI::App* st = app.add_subcommand("selftest", "run the built-in checks");
    st->add_flag("--quick", quick, "skip the slower checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? cli::kExitOk : cli::kExitConfig;
    }

    cli::RunnerOptions opt{config_path, output_dir};
    if (fwd->parsed()) return cli::run_mode(cli::RunMode::forward, opt);
    if (inv->parsed()) return cli::run_mode(cli::RunMode::inverse, opt);
    if (rt->parsed()) return cli::run_mode(cli::RunMode::roundtrip, opt);
    if (ml->parsed()) return cli::run_ml_eval(rho, mu, z);
    if (st->parsed()) return cli::run_selftest(quick);
    return cli::kExitConfig;
}
