#include "regulator/analysis.hpp"
#include "regulator/bound.hpp"
#include "regulator/deterministic.hpp"
#include "regulator/io.hpp"
#include "regulator/model.hpp"
#include "regulator/stochastic.hpp"
#include "regulator/traffic.hpp"
#include "regulator/workload.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace regulator;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

// Values from a JSON config file act as defaults; explicit command-line
// flags win. Merging happens before parsing by synthesizing missing flags.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;

    nlohmann::json cfg;
    {
        std::ifstream in(config_path);
        if (!in) throw io_error("cannot read " + config_path);
        try {
            in >> cfg;
        } catch (const nlohmann::json::exception& e) {
            throw io_error(config_path + ": " + e.what());
        }
    }
    std::vector<std::string> merged = args;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        merged.push_back(flag);
        merged.push_back(value.is_string() ? value.get<std::string>()
                                           : value.dump());
    }
    return merged;
}

void require_flag(bool present, const std::string& flag) {
    if (!present)
        throw CLI::RequiredError(flag);
}

RegulatorParams make_params(double rho, double lmax, const Trace& trace) {
    return RegulatorParams{rho, trace.capacity, lmax};
}

void warn_if_unstable(const Trace& trace, double rho) {
    if (trace.packets.size() < 2) return;
    const double rate = empirical_rate(trace);
    if (rate > rho)
        std::cerr << "warning: empirical input rate " << format_double(rate)
                  << " exceeds drain rate " << format_double(rho)
                  << "; delays will grow without bound\n";
}

int cmd_generate(std::uint64_t seed, int n, double lambda, int lmin, int lmax,
                 double capacity, const std::string& out) {
    const SourceConfig config{seed, n, lambda, lmin, lmax, capacity};
    const Trace trace = generate(config);
    write_trace(out, trace, config);
    if (!trace.packets.empty())
        std::cout << "packets " << trace.packets.size() << "\nrate "
                  << format_double(empirical_rate(trace)) << '\n';
    return 0;
}

int cmd_bound(const std::string& spec_path, double rho, double capacity,
              double lmax, int m_override, double t_last_override,
              const std::string& variant_override, const std::string& out) {
    BoundSpec spec = read_bound_spec(spec_path);
    if (m_override > 0) spec.m = m_override;
    if (t_last_override > 0) spec.t_last = t_last_override;
    if (!variant_override.empty())
        spec.variant = variant_override == "modified" ? FbarVariant::modified
                                                      : FbarVariant::full;
    if (!(rho > 0.0) || !(rho < capacity))
        throw config_error("need 0 < rho < capacity");
    const double d = delta(rho, capacity, lmax);
    if (spec.m <= 0) spec.m = m_max(spec.horizon, d);
    BoundGrid grid = build_grid(spec.horizon, spec.m, spec.t_last, d,
                                spec.variant, spec.spacing);
    grid = spec.variant == FbarVariant::modified
               ? build_fbar_modified(spec.f, grid)
               : build_fbar_full(spec.f, grid);
    write_grid(out, grid, spec);
    std::cout << "thresholds " << grid.size() << "\ndelta "
              << format_double(grid.delta) << "\nsigma_1 "
              << format_double(grid.bursts.front()) << '\n';
    return 0;
}

int cmd_shape(const std::string& trace_path, const std::string& alg,
              double sigma, const std::string& grid_path, double rho,
              double lmax, const std::string& prefix) {
    const Trace trace = read_trace(trace_path);
    const RegulatorParams params = make_params(rho, lmax, trace);
    warn_if_unstable(trace, rho);

    const std::string shaped_path = prefix + ".shaped.csv";
    const std::string path_path = prefix + ".path.csv";
    const std::string report_path = prefix + ".report.json";
    RunReport report;

    if (alg == "det") {
        if (sigma < 0.0)
            throw CLI::ValidationError("--sigma", "required for --alg det");
        const DetRun run = shape_deterministic(trace, sigma, params);
        write_shaped(shaped_path, run.packets);
        write_sample_path(path_path, run.output_path);
        report.delays = delay_stats(run.packets);
        const double cap = sigma + delta(rho, params.capacity, lmax);
        report.ccdf_gammas = linspace(0.0, cap, 33);
        report.ccdf_values = workload_ccdf(run.output_path, report.ccdf_gammas);
        write_report(report_path, report);
    } else {
        const GridFile gf = read_grid(grid_path);
        const double d = delta(rho, params.capacity, lmax);
        if (std::abs(gf.grid.delta - d) > 1e-9)
            throw config_error(
                "grid delta " + format_double(gf.grid.delta) +
                " does not match regulator margin " + format_double(d));
        const Algorithm a = alg == "basic"     ? Algorithm::basic
                            : alg == "checked" ? Algorithm::checked
                                               : Algorithm::fast;
        const StochRun run =
            shape_stochastic(trace, gf.grid, params, a, true);
        write_shaped(shaped_path, run.packets, run.states);
        write_sample_path(path_path, run.output_path);
        write_ledger_history(prefix + ".history.csv", run.ledger_history);
        report.delays = delay_stats(run.packets);
        report.thresholds = run.ledger.thresholds;
        for (std::size_t i = 0; i < run.ledger.durations.size(); ++i)
            report.final_ratios.push_back(
                overshoot_ratio(run.ledger, i, run.ledger.as_of));
        report.ccdf_gammas = run.ledger.thresholds;
        report.ccdf_values = workload_ccdf(run.output_path, report.ccdf_gammas);
        report.violations = verify_bound(
            run.output_path, gf.spec.f,
            linspace(gf.grid.thresholds.front(), gf.spec.horizon, 256));
        write_report(report_path, report);
    }
    std::cout << "mean_delay " << format_double(report.delays.mean)
              << "\nstd_delay " << format_double(report.delays.stddev) << '\n';
    return 0;
}

int cmd_verify(const std::string& path_path, const std::string& grid_path,
               double cap, double from, double from_fraction,
               std::size_t gammas) {
    const auto path = read_sample_path(path_path);
    if (path.empty()) throw io_error(path_path + ": empty sample path");

    if (cap >= 0.0) {
        std::size_t over = 0;
        for (const SamplePoint& p : path)
            if (p.w > cap + 1e-9) ++over;
        if (over > 0) {
            std::cout << over << " breakpoints exceed workload cap "
                      << format_double(cap) << '\n';
            return kExitViolation;
        }
        std::cout << "pass: workload stays within "
                  << format_double(cap) << '\n';
        return 0;
    }

    require_flag(!grid_path.empty(), "--grid");
    const GridFile gf = read_grid(grid_path);
    double from_time = from;
    if (from_fraction > 0.0) from_time = from_fraction * path.back().t;
    const auto violations =
        verify_bound(path, gf.spec.f,
                     linspace(gf.grid.thresholds.front(), gf.spec.horizon,
                              gammas),
                     from_time);
    if (violations.empty()) {
        std::cout << "pass: no overshoot ratio above the bound (from t="
                  << format_double(from_time) << ")\n";
        return 0;
    }
    std::cout << violations.size() << " violations\n";
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i)
        std::cout << "  t=" << format_double(violations[i].t)
                  << " gamma=" << format_double(violations[i].gamma)
                  << " o=" << format_double(violations[i].ratio)
                  << " bound=" << format_double(violations[i].bound) << '\n';
    return kExitViolation;
}

int cmd_stats(const std::string& shaped_path, const std::string& trace_path) {
    require_flag(!shaped_path.empty() || !trace_path.empty(), "--shaped");
    if (!shaped_path.empty()) {
        const auto packets = read_shaped(shaped_path);
        const DelayStats stats = delay_stats(packets);
        std::cout << "packets " << packets.size() << "\nmean_delay "
                  << format_double(stats.mean) << "\nstd_delay "
                  << format_double(stats.stddev) << '\n';
    }
    if (!trace_path.empty()) {
        const Trace trace = read_trace(trace_path);
        std::cout << "rate " << format_double(empirical_rate(trace)) << '\n';
        if (trace.packets.size() > 1) {
            const double span = trace.packets.back().arrival_start -
                                trace.packets.front().arrival_start;
            std::cout << "mean_interarrival "
                      << format_double(span /
                                       (trace.packets.size() - 1))
                      << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(sigma, rho) traffic regulator toolkit"};
    app.require_subcommand(1);

    std::string config_file;

    auto* gen = app.add_subcommand("generate", "synthesize a packet trace");
    std::uint64_t seed = 1;
    int n = -1, lmin = 5, lmax_len = 10;
    double lambda = 0.25, capacity = 1.0;
    std::string gen_out;
    gen->add_option("--config", config_file, "JSON file with flag defaults");
    gen->add_option("--seed", seed, "PRNG seed");
    gen->add_option("--n", n, "number of packets");
    gen->add_option("--lambda", lambda, "idle-time rate parameter");
    gen->add_option("--lmin", lmin, "minimum packet length");
    gen->add_option("--lmax", lmax_len, "maximum packet length");
    gen->add_option("--capacity", capacity, "link capacity");
    gen->add_option("--out", gen_out, "output trace CSV");

    auto* bound = app.add_subcommand("bound", "build a threshold grid");
    std::string spec_path, bound_out, variant_override;
    double rho = -1.0, reg_capacity = 1.0, reg_lmax = 10.0;
    double t_last_override = -1.0;
    int m_override = -1;
    bound->add_option("--config", config_file, "JSON file with flag defaults");
    bound->add_option("--spec", spec_path, "bound spec JSON");
    bound->add_option("--rho", rho, "drain rate");
    bound->add_option("--capacity", reg_capacity, "link capacity");
    bound->add_option("--lmax", reg_lmax, "maximum packet length");
    bound->add_option("--m", m_override, "threshold count override");
    bound->add_option("--t-last", t_last_override, "last threshold override");
    bound->add_option("--variant", variant_override,
                      "fbar variant override (full|modified)");
    bound->add_option("--out", bound_out, "output grid JSON");

    auto* shape = app.add_subcommand("shape", "run a regulator over a trace");
    std::string trace_path, alg, grid_path, prefix;
    double sigma = -1.0, shape_rho = -1.0, shape_lmax = 10.0;
    shape->add_option("--config", config_file, "JSON file with flag defaults");
    shape->add_option("--trace", trace_path, "input trace CSV");
    shape->add_option("--alg", alg, "det|basic|checked|fast")
        ->check(CLI::IsMember({"det", "basic", "checked", "fast"}));
    shape->add_option("--sigma", sigma, "burst budget (det only)");
    shape->add_option("--grid", grid_path, "grid JSON (stochastic only)");
    shape->add_option("--rho", shape_rho, "drain rate");
    shape->add_option("--lmax", shape_lmax, "maximum packet length");
    shape->add_option("--out-prefix", prefix, "output file prefix");

    auto* verify = app.add_subcommand("verify", "check a run against a bound");
    std::string verify_path, verify_grid;
    double cap = -1.0, from = 0.0, from_fraction = 0.0;
    std::size_t gammas = 256;
    verify->add_option("--config", config_file, "JSON file with flag defaults");
    verify->add_option("--path", verify_path, "sample-path CSV");
    verify->add_option("--grid", verify_grid, "grid JSON with the bound");
    verify->add_option("--cap", cap,
                       "fixed workload cap instead of a bound function");
    auto* from_opt = verify->add_option("--from", from,
                                        "ignore violations before this time");
    verify->add_option("--from-fraction", from_fraction,
                       "ignore violations in this leading fraction")
        ->excludes(from_opt);
    verify->add_option("--gammas", gammas, "bound sample count");

    auto* stats = app.add_subcommand("stats", "summarize run artifacts");
    std::string stats_shaped, stats_trace;
    stats->add_option("--config", config_file, "JSON file with flag defaults");
    stats->add_option("--shaped", stats_shaped, "shaped-run CSV");
    stats->add_option("--trace", stats_trace, "trace CSV");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = merge_config(args);
        // CLI11 consumes arguments in reverse order.
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (gen->parsed()) {
            require_flag(n >= 0, "--n");
            require_flag(!gen_out.empty(), "--out");
            return cmd_generate(seed, n, lambda, lmin, lmax_len, capacity,
                                gen_out);
        }
        if (bound->parsed()) {
            require_flag(!spec_path.empty(), "--spec");
            require_flag(rho > 0.0, "--rho");
            require_flag(!bound_out.empty(), "--out");
            return cmd_bound(spec_path, rho, reg_capacity, reg_lmax,
                             m_override, t_last_override, variant_override,
                             bound_out);
        }
        if (shape->parsed()) {
            require_flag(!trace_path.empty(), "--trace");
            require_flag(!alg.empty(), "--alg");
            require_flag(shape_rho > 0.0, "--rho");
            require_flag(!prefix.empty(), "--out-prefix");
            if (alg != "det") require_flag(!grid_path.empty(), "--grid");
            return cmd_shape(trace_path, alg, sigma, grid_path, shape_rho,
                             shape_lmax, prefix);
        }
        if (verify->parsed()) {
            require_flag(!verify_path.empty(), "--path");
            return cmd_verify(verify_path, verify_grid, cap, from,
                              from_fraction, gammas);
        }
        if (stats->parsed())
            return cmd_stats(stats_shaped, stats_trace);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
