#include "commands.hpp"

#include "output.hpp"
#include "relaxrd/error.hpp"

#include <cstdlib>
#include <ostream>

namespace relaxrd::cli {

int resolve_threads(std::optional<int> flag, const char* env_value)
{
    if (flag) {
        if (*flag < 1) {
            throw ConfigError(0, "--threads must be at least 1");
        }
        return *flag;
    }
    if (env_value != nullptr && *env_value != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env_value, &end, 10);
        if (*end != '\0' || v < 1 || v > 4096) {
            throw ConfigError(0, std::string("RELAXRD_THREADS must be a positive integer, got '") + env_value + "'");
        }
        return static_cast<int>(v);
    }
    return 1;
}

namespace {

void need(bool ok, const std::string& key, const std::string& command)
{
    if (!ok) {
        throw ConfigError(0, "missing required key " + key + " for '" + command + "'");
    }
}

void prepare_out(const CommandOptions& opts)
{
    std::error_code ec;
    std::filesystem::create_directories(opts.out, ec);
    if (ec) {
        throw Error("cannot create output directory '" + opts.out.string() + "'");
    }
}

} // namespace

int run_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log)
{
    need(cfg.m > 0, "grid.m", "run");
    need(cfg.t_end > 0.0, "run.t_end", "run");
    const Problem problem = build_problem(cfg);
    const SchemeConfig scheme = build_scheme(cfg);
    const Mesh mesh = Mesh::make(problem, scheme, cfg.m, problem.dim == 2 ? (cfg.my > 0 ? cfg.my : cfg.m) : 0);
    prepare_out(opts);

    std::vector<Snapshot> snaps;
    try {
        snaps = run(problem, mesh, scheme, cfg.t_end, cfg.snapshots);
    } catch (const RunFault& fault) {
        write_atomic(opts.out / "fault_state.csv", snapshot_csv(fault.last_good(), problem, mesh));
        throw;
    }
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        write_atomic(opts.out / ("snap_" + std::to_string(i) + ".csv"), snapshot_csv(snaps[i], problem, mesh));
    }
    log << "wrote " << snaps.size() << " snapshot(s) to " << opts.out.string() << "\n";
    return kOk;
}

int study_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log)
{
    need(!cfg.m_list.empty(), "study.m_list", "study");
    need(cfg.t_end > 0.0, "run.t_end", "study");
    const Problem problem = build_problem(cfg);
    const SchemeConfig scheme = build_scheme(cfg);
    prepare_out(opts);
    const RunReport report = convergence_study(problem, scheme, cfg.m_list, cfg.t_end, cfg.reference, opts.threads);
    write_atomic(opts.out / "report.csv", report_csv(report));
    log << report_csv(report, false);
    return kOk;
}

int oracle_command(const RunConfig& cfg, const CommandOptions& opts, std::ostream& log)
{
    need(cfg.m > 0, "grid.m", "oracle");
    const Problem problem = build_problem(cfg);
    prepare_out(opts);
    const double gap = oracle_compare(problem, cfg.m, cfg.oracle_steps, cfg.phi);
    write_atomic(opts.out / "oracle.csv", "m,steps,max_difference\n" + std::to_string(cfg.m) + ","
                                               + std::to_string(cfg.oracle_steps) + "," + format_number(gap) + "\n");
    log << "max |relaxed - direct| after " << cfg.oracle_steps << " step(s) on m=" << cfg.m << ": "
        << format_number(gap) << "\n";
    return kOk;
}

int dispatch(const std::string& command, const std::string& config_path, const CommandOptions& opts,
             std::ostream& log, std::ostream& err)
{
    try {
        const RunConfig cfg = load_config(config_path);
        if (command == "run") {
            return run_command(cfg, opts, log);
        }
        if (command == "study") {
            return study_command(cfg, opts, log);
        }
        if (command == "oracle") {
            return oracle_command(cfg, opts, log);
        }
        err << "error: unknown command '" << command << "'\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const SolverFault& e) {
        err << "solver fault: " << e.what() << "\n";
        return kSolverFault;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFault;
    }
}

} // namespace relaxrd::cli
