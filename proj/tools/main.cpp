#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Relaxed ENO/WENO schemes for degenerate reaction-diffusion equations", "relax-rd"};
    app.require_subcommand(1);

    std::string config;
    std::string out = ".";
    std::optional<int> threads;

    for (const char* name : {"run", "study", "oracle"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "run"     ? "Simulate and write snapshots"
                                             : std::string(name) == "study" ? "Convergence study, writes report.csv"
                                                                            : "Compare against the direct scheme");
        sub->add_option("--config", config, "Configuration file")->required();
        sub->add_option("--out", out, "Output directory");
        sub->add_option("--threads", threads, "Worker threads (default: RELAXRD_THREADS or 1)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : relaxrd::cli::kConfigError;
    }

    relaxrd::cli::CommandOptions opts;
    opts.out = out;
    try {
        opts.threads = relaxrd::cli::resolve_threads(threads, std::getenv("RELAXRD_THREADS"));
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return relaxrd::cli::kConfigError;
    }
    return relaxrd::cli::dispatch(app.get_subcommands().front()->get_name(), config, opts, std::cout, std::cerr);
}
