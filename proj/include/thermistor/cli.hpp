#pragma once

// Subcommands of the `thermistor` tool, callable in-process.
//
// Exit codes: 0 success, 2 Picard iteration did not converge, 3 tube invalid or
// solution left the tube (also: identity suite failed), 4 configuration, parse,
// H1 or any other error.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "thermistor/config.hpp"
#include "thermistor/conformable.hpp"
#include "thermistor/error.hpp"
#include "thermistor/fixed_point.hpp"
#include "thermistor/format.hpp"
#include "thermistor/identities.hpp"
#include "thermistor/tube.hpp"

namespace thermistor::cli {

inline constexpr int kOk = 0;
inline constexpr int kNotConverged = 2;
inline constexpr int kTubeInvalid = 3;
inline constexpr int kError = 4;

struct Options {
    std::optional<std::string> config;
    std::string out_dir = ".";
    std::optional<std::size_t> grid_n;
    std::vector<double> alphas;            // --alpha; a single value overrides the config
    std::vector<std::size_t> grid_sizes;   // identities only
};

namespace detail {

inline RunConfig load(const Options& opt) {
    if (!opt.config) throw ConfigError("--config is required");
    RunConfig cfg = load_run_config(*opt.config);
    if (opt.grid_n) cfg.solve.grid_n = *opt.grid_n;
    if (opt.alphas.size() > 1) throw ConfigError("--alpha takes a single value for this command");
    if (opt.alphas.size() == 1) cfg.alpha = opt.alphas.front();
    try {
        (void)cfg.problem();
        cfg.solve.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

inline std::filesystem::path out_path(const Options& opt, const char* file) {
    std::filesystem::create_directories(opt.out_dir);
    return std::filesystem::path(opt.out_dir) / file;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string margins_text(const TubeReport& rep) {
    std::ostringstream os;
    os << "tube: " << (rep.valid ? "valid" : "INVALID") << " (tol " << format_double(rep.tol) << ")\n";
    for (const auto& c : rep.records()) {
        os << "  " << c.name << ": ";
        if (!c.applicable) {
            os << "not applicable\n";
            continue;
        }
        os << "margin " << format_double(c.margin) << " at node " << c.node << (c.ok ? " ok" : " VIOLATED")
           << '\n';
    }
    return os.str();
}

inline std::string solve_report_text(const RunConfig& cfg, const ThermistorProblem& p, const SolveReport& r) {
    std::ostringstream os;
    os << "problem: f(t,u) = " << p.description() << ", a = " << format_double(p.a())
       << ", T = " << format_double(p.T()) << ", lambda = " << format_double(p.lambda())
       << ", alpha = " << format_double(p.alpha().value()) << ", u_a = " << format_double(p.u_a())
       << ", nodes = " << cfg.solve.grid_n << '\n';
    os << margins_text(r.tube);
    os << "iterations: " << r.iterations << (r.converged ? " (converged)" : " (NOT converged)") << '\n';
    os << "final fixed-point step: " << format_double(r.final_fp_residual())
       << " (tol " << format_double(cfg.solve.tol_fp) << ")\n";
    os << "ode residual: " << format_double(r.ode_residual) << '\n';
    os << "truncated-problem residual: " << format_double(r.modified_residual) << '\n';
    os << "in tube: " << (r.member_of_tube ? "yes" : "NO") << " (max excess " << format_double(r.tube_excess)
       << ")\n";
    os << "bounds on [a,T]x[-" << format_double(r.bounds.R) << "," << format_double(r.bounds.R)
       << "]: A = " << format_double(r.bounds.A) << ", B = " << format_double(r.bounds.B)
       << ", G = " << format_double(r.bounds.G) << '\n';
    os << "u(T) = " << format_double(r.u.back()) << '\n';
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

inline std::string solution_csv(const ThermistorProblem& p, const Tube& tube, const SolveReport& r) {
    const GridFunction g = evaluate_g(p, r.u);
    const GridFunction du = conformable_derivative(r.u, p.alpha());
    std::string out = "t,u,v,M,g,residual\n";
    const Grid& grid = r.u.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_double(grid.node(i));
        for (double x : {r.u[i], tube.center()[i], tube.radius()[i], g[i], du[i] - g[i]}) {
            out += ',';
            out += format_double(x);
        }
        out += '\n';
    }
    return out;
}

inline int solve_exit_code(const SolveReport& r) {
    if (!r.converged) return kNotConverged;
    if (!r.tube.valid || !r.member_of_tube) return kTubeInvalid;
    return kOk;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

inline std::size_t thread_budget(std::size_t jobs) {
    std::size_t threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("THERMISTOR_THREADS")) {
        std::size_t v = 0;
        if (parse_size(env, v) && v > 0) threads = v;
    }
    return std::max<std::size_t>(1, std::min(threads, jobs));
}

}  // namespace detail

/// Verifies the tube, runs Picard iteration, writes solution.csv and report.txt.
inline int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const RunConfig cfg = detail::load(opt);
        const ThermistorProblem p = cfg.problem();
        const Tube tube = build_tube(cfg.tube, p, cfg.solve);
        const SolveReport r = picard_solve(p, tube, cfg.solve);
        const std::string report = detail::solve_report_text(cfg, p, r);
        detail::write_file(detail::out_path(opt, "solution.csv"), detail::solution_csv(p, tube, r));
        detail::write_file(detail::out_path(opt, "report.txt"), report);
        out << report;
        return detail::solve_exit_code(r);
    });
}

inline int cmd_verify_tube(const Options& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const RunConfig cfg = detail::load(opt);
        const ThermistorProblem p = cfg.problem();
        const Tube tube = build_tube(cfg.tube, p, cfg.solve);
        const TubeReport rep = verify_tube(tube, p);
        out << detail::margins_text(rep);
        return rep.valid ? kOk : kTubeInvalid;
    });
}

/// Convergence table of the conformable identities; writes identities.csv.
inline int cmd_identities(const Options& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const std::vector<double> alphas = opt.alphas.empty() ? std::vector<double>{0.3, 0.5, 0.7, 1.0} : opt.alphas;
        const std::vector<std::size_t> sizes =
            opt.grid_sizes.empty() ? std::vector<std::size_t>{101, 201, 401} : opt.grid_sizes;
        for (double a : alphas) (void)Alpha(a);
        const auto rows = run_identity_suite(alphas, sizes);
        std::string csv = "check,alpha,n,error,order,pass\n";
        for (const auto& r : rows) {
            csv += r.check + ',' + format_double(r.alpha) + ',' + std::to_string(r.n) + ',' +
                   format_double(r.error) + ',' + (r.order ? format_double(*r.order) : std::string()) + ',' +
                   (r.pass ? "1" : "0") + '\n';
        }
        detail::write_file(detail::out_path(opt, "identities.csv"), csv);
        out << csv;
        return all_pass(rows) ? kOk : kTubeInvalid;
    });
}

struct SweepRow {
    double lambda = 0.0;
    double alpha = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double ode_residual = 0.0;
    bool member = false;
    bool tube_valid = false;
};

/// Runs every (lambda, alpha) tuple of the config, in parallel, in lexicographic order.
inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    const std::vector<double> lambdas = cfg.sweep_lambda.value_or(std::vector<double>{cfg.lambda});
    const std::vector<double> alphas = cfg.sweep_alpha.value_or(std::vector<double>{cfg.alpha});
    if (!cfg.sweep_lambda && !cfg.sweep_alpha) throw ConfigError("sweep needs a [sweep] lambda or alpha list");
    if (lambdas.empty()) throw ConfigError("sweep lambda list is empty");
    if (alphas.empty()) throw ConfigError("sweep alpha list is empty");

    std::vector<SweepRow> rows;
    for (double l : lambdas)
        for (double a : alphas) rows.push_back(SweepRow{l, a});
    for (const auto& r : rows) {
        try {
            (void)cfg.problem_for(r.lambda, r.alpha);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("invalid sweep tuple: ") + e.what());
        }
    }

    std::vector<std::exception_ptr> failures(rows.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                SweepRow& row = rows[i];
                const ThermistorProblem p = cfg.problem_for(row.lambda, row.alpha);
                const Tube tube = build_tube(cfg.tube, p, cfg.solve);
                const SolveReport r = picard_solve(p, tube, cfg.solve);
                row.converged = r.converged;
                row.iterations = r.iterations;
                row.ode_residual = r.ode_residual;
                row.member = r.member_of_tube;
                row.tube_valid = r.tube.valid;
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const std::size_t threads = detail::thread_budget(rows.size());
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lambda,alpha,converged,iterations,ode_residual,member\n";
    for (const auto& r : rows) {
        out += format_double(r.lambda) + ',' + format_double(r.alpha) + ',' + (r.converged ? "1" : "0") + ',' +
               std::to_string(r.iterations) + ',' + format_double(r.ode_residual) + ',' + (r.member ? "1" : "0") +
               '\n';
    }
    return out;
}

inline int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (!opt.alphas.empty()) throw ConfigError("--alpha is not accepted by sweep; list alphas in [sweep]");
        const RunConfig cfg = detail::load(opt);
        const auto rows = run_sweep(cfg);
        const std::string csv = sweep_csv(rows);
        detail::write_file(detail::out_path(opt, "sweep.csv"), csv);
        out << csv;
        int code = kOk;
        for (const auto& r : rows) {
            if (!r.converged) return kNotConverged;
            if (!r.tube_valid || !r.member) code = kTubeInvalid;
        }
        return code;
    });
}

}  // namespace thermistor::cli
