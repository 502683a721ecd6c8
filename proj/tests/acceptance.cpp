// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "thermistor/cli.hpp"
#include "thermistor/thermistor.hpp"

using namespace thermistor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

GridFunction random_function(const Grid& grid, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    const double c0 = c(rng), c1 = c(rng), k = 1.0 + 4.0 * std::abs(c(rng));
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = scale * (c0 + c1 * std::sin(k * grid.node(i)) + 0.2 * c(rng));
    }
    return GridFunction(grid, std::move(v));
}

Grid random_grid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(0.2, 3.0), len(0.5, 4.0);
    std::uniform_int_distribution<std::size_t> n(3, 400);
    const double left = a(rng);
    return Grid(left, left + len(rng), n(rng));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome identities() {
    Outcome o;
    const auto start = Clock::now();
    for (double av : {0.3, 0.5, 0.7}) {
        const Alpha alpha(av);
        std::vector<double> errs;
        for (std::size_t n : {101, 201, 401}) {
            errs.push_back(roundtrip_error(alpha, n));
            const double c = constant_rule_error(alpha, n);
            o.require(c <= 1e-12, "constant rule " + num(c) + " at alpha " + num(av));
        }
        for (std::size_t k = 1; k < errs.size(); ++k) {
            const double order = std::log2(errs[k - 1] / errs[k]);
            o.require(order >= 1.8, "roundtrip order " + num(order) + " at alpha " + num(av));
            if (k + 1 == errs.size()) o.note("alpha " + num(av) + " order " + num(order));
        }
    }
    const double t = seconds_since(start);
    o.require(t < 1.0, "runtime " + num(t) + " s");
    return o;
}

Outcome linear_closed_form() {
    Outcome o;
    const auto start = Clock::now();
    const Alpha alpha(0.7);
    std::vector<double> res;
    for (std::size_t n : {101, 201, 401}) res.push_back(linear_sine_residual(alpha, n));
    for (std::size_t k = 1; k < res.size(); ++k) {
        const double order = std::log2(res[k - 1] / res[k]);
        o.require(order >= 1.8, "residual order " + num(order));
        if (k + 1 == res.size()) o.note("order " + num(order));
    }
    const double c = linear_constant_residual(alpha, 101);
    o.require(c <= 1e-10, "constant-solution residual " + num(c));
    o.note("constant residual " + num(c));
    const double t = seconds_since(start);
    o.require(t < 1.0, "runtime " + num(t) + " s");
    return o;
}

Outcome constant_source() {
    Outcome o;
    const auto start = Clock::now();
    const ThermistorProblem p(1.0, 2.0, 1.0, Alpha(0.5), 0.0, [](double, double) { return 1.0; });
    SolveOptions opts;
    opts.grid_n = 4001;
    const Grid grid = p.grid(opts.grid_n);
    const auto r = picard_solve(p, Tube(closed_form_center(p, grid), GridFunction::constant(grid, 0.5)), opts);
    o.require(r.converged, "not converged");
    o.require(r.iterations <= 3, std::to_string(r.iterations) + " iterations");
    const double err = std::abs(r.u.back() - 0.828427);
    o.require(err <= 1e-6, "|u(2) - 0.828427| = " + num(err));
    const double exact = 2.0 * (std::sqrt(2.0) - 1.0);
    const double oracle_err = std::abs(oracle_solve(p, opts).u.back() - exact);
    o.require(oracle_err <= 1e-8, "oracle off by " + num(oracle_err));
    const double t = seconds_since(start);
    o.require(t < 2.0, "runtime " + num(t) + " s");
    o.note(std::to_string(r.iterations) + " iteration(s), u(2) = " + format_double(r.u.back()));
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    const auto start = Clock::now();
    const ThermistorProblem p(1.0, 2.0, 1.0, Alpha(0.7), 0.1, [](double, double u) { return 2.0 + std::sin(u); });
    SolveOptions opts;
    opts.grid_n = 4001;
    opts.tol_fp = 1e-10;
    const auto oracle = oracle_solve(p, opts);
    o.require(oracle.converged, "oracle not converged");
    const Grid grid = p.grid(opts.grid_n);
    const auto r = picard_solve(p, Tube(oracle.u, GridFunction::constant(grid, 1.0)), opts);
    o.require(r.converged, "picard not converged");
    const double diff = sup_distance(r.u, oracle.u);
    o.require(diff <= 1e-5, "sup difference " + num(diff));
    const double t = seconds_since(start);
    o.require(t < 5.0, "runtime " + num(t) + " s");
    o.note("sup difference " + num(diff) + " after " + std::to_string(r.iterations) + " iterations");
    return o;
}

Outcome containment() {
    Outcome o;
    struct Candidate {
        std::string label;
        std::function<Tube(const ThermistorProblem&, const Grid&)> make;
    };
    struct Case {
        ThermistorProblem problem;
        std::vector<Candidate> tubes;
    };
    SolveOptions opts;
    opts.grid_n = 2001;
    auto oracle_center = [&opts](const ThermistorProblem& p, const Grid&) { return oracle_solve(p, opts).u; };
    auto growing = [](double m0, double k) {
        return [m0, k](const ThermistorProblem& p, const Grid& g) {
            return Tube(GridFunction::constant(g, p.u_a()), exponential_radius(g, p.alpha(), m0, k));
        };
    };
    std::vector<Case> cases;
    cases.push_back({ThermistorProblem(1.0, 2.0, 1.0, Alpha(0.5), 0.0, [](double, double) { return 1.0; }, "1"),
                     {{"closed form, M = 0.5",
                       [](const ThermistorProblem& p, const Grid& g) {
                           return Tube(closed_form_center(p, g), GridFunction::constant(g, 0.5));
                       }},
                      {"closed form, M = 0",
                       [](const ThermistorProblem& p, const Grid& g) {
                           return Tube(closed_form_center(p, g), GridFunction::constant(g, 0.0));
                       }},
                      {"constant center, growing radius", growing(1.0, 1.5)}}});
    cases.push_back({ThermistorProblem(1.0, 2.0, 1.0, Alpha(0.7), 0.1,
                                       [](double, double u) { return 2.0 + std::sin(u); }, "2 + sin(u)"),
                     {{"constant center, growing radius", growing(1.0, 3.5)},
                      {"oracle center, growing radius",
                       [&](const ThermistorProblem& p, const Grid& g) {
                           return Tube(oracle_center(p, g), exponential_radius(g, p.alpha(), 0.2, 1.0));
                       }}}});
    cases.push_back({ThermistorProblem(0.5, 1.5, 2.0, Alpha(0.6), 1.0,
                                       [](double t, double u) { return 3.0 + std::cos(u) + t; }, "3 + cos(u) + t"),
                     {{"constant center, growing radius", growing(1.0, 2.0)},
                      {"oracle center, growing radius",
                       [&](const ThermistorProblem& p, const Grid& g) {
                           return Tube(oracle_center(p, g), exponential_radius(g, p.alpha(), 0.3, 1.0));
                       }}}});

    std::size_t valid = 0;
    std::size_t problems_with_valid = 0;
    for (const auto& c : cases) {
        const Grid grid = c.problem.grid(opts.grid_n);
        bool any = false;
        for (const auto& cand : c.tubes) {
            const Tube tube = cand.make(c.problem, grid);
            if (!verify_tube(tube, c.problem).valid) {
                o.note("f = " + c.problem.description() + ", " + cand.label + ": tube not valid, skipped");
                continue;
            }
            ++valid;
            any = true;
            const auto r = picard_solve(c.problem, tube, opts);
            o.require(r.converged, "f = " + c.problem.description() + ", " + cand.label + ": not converged");
            o.require(membership(r.u, tube, default_tube_tol(grid)),
                      "f = " + c.problem.description() + ", " + cand.label + ": left the tube by " +
                          num(r.tube_excess));
        }
        if (any) ++problems_with_valid;
    }
    o.require(valid >= 5, std::to_string(valid) + " valid tubes");
    o.require(problems_with_valid >= 3, std::to_string(problems_with_valid) + " problems with a valid tube");
    o.note(std::to_string(valid) + " valid tubes over " + std::to_string(problems_with_valid) + " problems");
    return o;
}

Outcome operator_algebra() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> rad(0.0, 2.0);
    std::size_t idem = 0, bound = 0, factor = 0, anchor = 0;
    const int trials = 100;
    for (int k = 0; k < trials; ++k) {
        const Grid grid = random_grid(rng);
        const ThermistorProblem p(grid.a(), grid.T(), 0.3 + 0.03 * k, Alpha(0.1 + 0.009 * k), 0.2 * k - 10.0,
                                  [](double t, double u) { return 1.5 + std::cos(u) * std::exp(-t); });
        std::vector<double> m(grid.size());
        for (auto& x : m) x = rad(rng);
        const Tube tube(random_function(grid, rng, 2.0), GridFunction(grid, m));
        const auto u = random_function(grid, rng, 5.0);
        const auto tu = truncate(u, tube);
        idem += truncate(tu, tube) == tu;
        bool ok = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ok = ok && std::abs(tu[i] - tube.center()[i]) <= std::min(std::abs(u[i] - tube.center()[i]), m[i]);
        }
        bound += ok;
        const auto ku = apply_k(u, tube, p);
        factor += ku == apply_k(tu, tube, p);
        anchor += ku[0] == p.u_a();
    }
    auto count = [&](std::size_t c, const char* what) {
        o.require(c == trials, std::string(what) + " held in " + std::to_string(c) + "/" + std::to_string(trials));
    };
    count(idem, "idempotence");
    count(bound, "truncation bound");
    count(factor, "factorization through truncation");
    count(anchor, "initial anchoring");
    if (o.pass) o.note("4 properties x " + std::to_string(trials) + " random inputs");
    return o;
}

Outcome homogeneity() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> pos(0.5, 3.0), coef(-0.4, 0.4), scale(0.01, 100.0);
    std::size_t checked = 0;
    for (int k = 0; k < 100; ++k) {
        // positive by construction: base exceeds the sum of the bounded terms
        const std::string body = format_double(pos(rng) + 1.0) + " + " + format_double(coef(rng)) + "*sin(" +
                                 format_double(pos(rng)) + "*u) + " + format_double(coef(rng)) + "*cos(t*u) + " +
                                 format_double(std::abs(coef(rng))) + "*exp(-u*u)";
        const double c = scale(rng);
        const Expr f = parse_expr(body);
        const Expr cf = parse_expr(format_double(c) + "*(" + body + ")");
        const Grid grid = random_grid(rng);
        const ThermistorProblem p(grid.a(), grid.T(), pos(rng), Alpha(0.5), 0.0,
                                  [f](double t, double u) { return f(t, u); });
        const ThermistorProblem pc(grid.a(), grid.T(), p.lambda(), Alpha(0.5), 0.0,
                                   [cf](double t, double u) { return cf(t, u); });
        const auto u = random_function(grid, rng, 3.0);
        const auto g = evaluate_g(p, u);
        const auto gc = evaluate_g(pc, u);
        for (std::size_t i = 0; i < g.size(); ++i) {
            o.require(g[i] > 0.0, "non-positive g");
            const double rel = std::abs(gc[i] * c - g[i]) / g[i];
            if (rel > 1e-12) o.require(false, "relative error " + num(rel) + " for " + body);
            ++checked;
        }
    }
    const ThermistorProblem crossing(1.0, 3.0, 1.0, Alpha(0.5), 0.0, [](double t, double) { return 2.0 - t; });
    try {
        (void)evaluate_g(crossing, GridFunction::constant(crossing.grid(11), 0.0));
        o.require(false, "sign change not detected");
    } catch (const H1Violation& e) {
        o.require(e.node() == 5, "sign change reported at node " + std::to_string(e.node()));
    }
    o.note(std::to_string(checked) + " node values, sign change named at node 5");
    return o;
}

Outcome parser() {
    Outcome o;
    struct Case {
        const char* text;
        double t, u, expected;
    };
    const Case corpus[] = {
        {"1+2*3", 0, 0, 7},        {"2^3^2", 0, 0, 512},       {"(2^3)^2", 0, 0, 64},
        {"-2^2", 0, 0, -4},        {"(-2)^2", 0, 0, 4},        {"2^-1", 0, 0, 0.5},
        {"8/4/2", 0, 0, 1},        {"8-4-2", 0, 0, 2},         {"2*3^2", 0, 0, 18},
        {"--3", 0, 0, 3},          {"1 - -1", 0, 0, 2},        {"6/2*3", 0, 0, 9},
        {"(1+2)*3", 0, 0, 9},      {"t*u + t/u", 2, 4, 8.5},   {"u^2 - t", 3, 2, 1},
        {"-t^2", 3, 0, -9},        {"sqrt(t) + abs(u)", 9, -2, 5}, {"1.5e1 + .5", 0, 0, 15.5},
        {"2+sin(u)*exp(-t)", 0, 0, 2}, {"exp(0) + cos(0)", 0, 0, 2}, {"1+2*3^2/9-1", 0, 0, 2},
        {"2E-1*10", 0, 0, 2},
    };
    std::size_t passed = 0;
    for (const auto& c : corpus) {
        const double got = eval_expr(parse_expr(c.text), c.t, c.u);
        if (std::abs(got - c.expected) <= 1e-14 * std::max(1.0, std::abs(c.expected))) ++passed;
        else o.require(false, std::string(c.text) + " gave " + format_double(got));
    }
    const std::pair<const char*, std::size_t> malformed[] = {
        {"2t", 1}, {"(1+2", 4}, {"1+2)", 3}, {"1 + foo(t)", 4}, {"", 0}, {"1 $ 2", 2}, {"sin(t", 5}, {"2e", 2},
    };
    for (const auto& [text, offset] : malformed) {
        try {
            (void)parse_expr(text);
            o.require(false, std::string("accepted '") + text + "'");
        } catch (const ParseError& e) {
            o.require(e.offset() == offset, std::string("'") + text + "' at byte " + std::to_string(e.offset()));
        }
    }
    std::mt19937_64 rng(11);
    const std::string alphabet = "0123456789.eE+-*/^() tusincoxpqrab$";
    std::uniform_int_distribution<std::size_t> len(0, 30), ch(0, alphabet.size() - 1);
    std::size_t fuzzed = 0;
    for (int k = 0; k < 10000; ++k) {
        std::string text;
        for (std::size_t n = len(rng); n > 0; --n) text += alphabet[ch(rng)];
        try {
            (void)parse_expr(text);
        } catch (const ParseError& e) {
            if (e.offset() > text.size()) o.require(false, "offset past end for '" + text + "'");
        }
        ++fuzzed;
    }
    try {
        (void)parse_expr(std::string(100000, '(') + "1" + std::string(100000, ')'));
        o.require(false, "deep nesting accepted");
    } catch (const ParseError&) {
    }
    o.note(std::to_string(passed) + " corpus cases, " + std::to_string(fuzzed) + " fuzz inputs");
    o.require(passed >= 20, "corpus too small");
    return o;
}

Outcome cli_contract() {
    Outcome o;
    const fs::path configs = fs::path(THERMISTOR_SOURCE_DIR) / "configs";
    const fs::path work = fs::current_path() / "acceptance_out";
    fs::remove_all(work);
    std::ostringstream sink;
    auto opts = [&](const char* file, const char* dir) {
        cli::Options opt;
        opt.config = (configs / file).string();
        opt.out_dir = (work / dir).string();
        return opt;
    };
    o.require(cli::cmd_sweep(opts("sweep.cfg", "sweep1"), sink, sink) == cli::kOk, "sweep exit code");
    o.require(cli::cmd_sweep(opts("sweep.cfg", "sweep2"), sink, sink) == cli::kOk, "second sweep exit code");
    const std::string first = slurp(work / "sweep1" / "sweep.csv");
    const std::string second = slurp(work / "sweep2" / "sweep.csv");
    o.require(!first.empty() && first == second, "sweep outputs differ");
    std::size_t rows = 0;
    for (char c : first) rows += c == '\n';
    o.require(rows == 7, "sweep.csv has " + std::to_string(rows) + " lines");

    const std::pair<const char*, int> scenarios[] = {
        {"converged.cfg", cli::kOk},
        {"not_converged.cfg", cli::kNotConverged},
        {"invalid_tube.cfg", cli::kTubeInvalid},
        {"bad_source.cfg", cli::kError},
    };
    for (const auto& [file, expected] : scenarios) {
        const int code = cli::cmd_solve(opts(file, file), sink, sink);
        o.require(code == expected,
                  std::string(file) + " exited " + std::to_string(code) + ", expected " + std::to_string(expected));
    }
    o.note("sweep byte-identical, exit codes 0/2/3/4 as expected");
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"conformable identities", identities},
        {"linear closed form", linear_closed_form},
        {"constant-source thermistor", constant_source},
        {"oracle equivalence", oracle_equivalence},
        {"tube containment", containment},
        {"truncation and operator algebra", operator_algebra},
        {"g homogeneity and positivity", homogeneity},
        {"expression parser", parser},
        {"CLI determinism and exit codes", cli_contract},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << o.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
