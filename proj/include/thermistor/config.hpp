#pragma once

// Run configuration: flat sectioned key = value text.
//
//   [problem]
//   a = 1
//   T = 2
//   lambda = 1
//   alpha = 0.5
//   u_a = 0
//   f = 2 + sin(u)
//
//   [tube]
//   v = closed_form_center      # or oracle_center, or an expression in t
//   M = 0.5                     # expression in t
//
//   [solve]                     # optional
//   grid_n = 4001
//   damping = 1
//   tol_fp = 1e-10
//   max_iter = 200
//
//   [sweep]                     # optional, comma separated
//   lambda = 0.5, 1, 2
//   alpha = 0.5, 0.9
//
// '#' starts a comment. Unknown sections and keys are errors.

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermistor/error.hpp"
#include "thermistor/expr.hpp"
#include "thermistor/format.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/model.hpp"
#include "thermistor/options.hpp"
#include "thermistor/oracle.hpp"
#include "thermistor/tube.hpp"

namespace thermistor {

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
};

using ConfigSections = std::map<std::string, std::map<std::string, ConfigEntry>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace detail

inline ConfigSections parse_config_text(std::string_view text) {
    ConfigSections out;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "config line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (section.empty()) throw ConfigError(where + "empty section name");
            if (out.count(section)) throw ConfigError(where + "duplicate section [" + section + "]");
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of any section");
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError(where + "empty key");
        auto& sec = out[section];
        if (sec.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
        sec[key] = ConfigEntry{std::string(detail::trim(line.substr(eq + 1))), line_no};
    }
    return out;
}

inline ConfigSections load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// How the tube is specified in a config.
struct TubeSpec {
    enum class Center { Expression, ClosedForm, Oracle };
    Center center = Center::Expression;
    std::optional<Expr> v;
    Expr M;
};

struct RunConfig {
    double a = 0.0;
    double T = 0.0;
    double lambda = 0.0;
    double alpha = 0.0;
    double u_a = 0.0;
    Expr f;
    TubeSpec tube;
    SolveOptions solve;
    std::optional<std::vector<double>> sweep_lambda;
    std::optional<std::vector<double>> sweep_alpha;

    [[nodiscard]] ThermistorProblem problem() const { return problem_for(lambda, alpha); }

    [[nodiscard]] ThermistorProblem problem_for(double lam, double alp) const {
        Expr e = f;
        return ThermistorProblem(a, T, lam, Alpha(alp), u_a, [e](double t, double u) { return e(t, u); },
                                 e.source());
    }
};

namespace detail {

class SectionReader {
public:
    SectionReader(const ConfigSections& all, const std::string& name, bool required) : name_(name) {
        const auto it = all.find(name);
        if (it == all.end()) {
            if (required) throw ConfigError("missing section [" + name + "]");
            return;
        }
        entries_ = &it->second;
    }

    [[nodiscard]] bool present() const { return entries_ != nullptr; }

    const ConfigEntry* find(const std::string& key) {
        if (!entries_) return nullptr;
        const auto it = entries_->find(key);
        if (it == entries_->end()) return nullptr;
        used_.push_back(key);
        return &it->second;
    }

    const ConfigEntry& require(const std::string& key) {
        const ConfigEntry* e = find(key);
        if (!e) throw ConfigError("missing key '" + key + "' in [" + name_ + "]");
        return *e;
    }

    double number(const std::string& key) { return to_number(key, require(key)); }

    std::optional<double> optional_number(const std::string& key) {
        const ConfigEntry* e = find(key);
        if (!e) return std::nullopt;
        return to_number(key, *e);
    }

    std::optional<std::size_t> optional_count(const std::string& key) {
        const ConfigEntry* e = find(key);
        if (!e) return std::nullopt;
        std::size_t v = 0;
        if (!parse_size(e->value, v)) fail(*e, "'" + key + "' must be a non-negative integer");
        return v;
    }

    std::optional<std::vector<double>> optional_list(const std::string& key) {
        const ConfigEntry* e = find(key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        std::string_view rest = e->value;
        if (trim(rest).empty()) return out;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            double v = 0.0;
            if (!parse_double(item, v)) fail(*e, "'" + key + "' must be a comma separated list of numbers");
            out.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    Expr expression(const std::string& key, const ConfigEntry& e) const {
        try {
            return parse_expr(e.value);
        } catch (const ParseError& err) {
            fail(e, "'" + key + "': " + err.what());
        }
    }

    void reject_unknown() const {
        if (!entries_) return;
        for (const auto& [key, entry] : *entries_) {
            bool known = false;
            for (const auto& u : used_) known = known || u == key;
            if (!known) fail(entry, "unknown key '" + key + "' in [" + name_ + "]");
        }
    }

    [[noreturn]] static void fail(const ConfigEntry& e, const std::string& what) {
        throw ConfigError("config line " + std::to_string(e.line) + ": " + what);
    }

private:
    double to_number(const std::string& key, const ConfigEntry& e) const {
        double v = 0.0;
        if (!parse_double(e.value, v)) fail(e, "'" + key + "' must be a number, got '" + e.value + "'");
        return v;
    }

    std::string name_;
    const std::map<std::string, ConfigEntry>* entries_ = nullptr;
    std::vector<std::string> used_;
};

}  // namespace detail

inline RunConfig read_run_config(const ConfigSections& sections) {
    for (const auto& [name, entries] : sections) {
        if (name != "problem" && name != "tube" && name != "solve" && name != "sweep") {
            throw ConfigError("unknown section [" + name + "]");
        }
    }
    RunConfig cfg;

    detail::SectionReader problem(sections, "problem", true);
    cfg.a = problem.number("a");
    cfg.T = problem.number("T");
    cfg.lambda = problem.number("lambda");
    cfg.alpha = problem.number("alpha");
    cfg.u_a = problem.number("u_a");
    cfg.f = problem.expression("f", problem.require("f"));
    problem.reject_unknown();

    detail::SectionReader tube(sections, "tube", true);
    const ConfigEntry& v = tube.require("v");
    if (v.value == "closed_form_center") {
        cfg.tube.center = TubeSpec::Center::ClosedForm;
    } else if (v.value == "oracle_center") {
        cfg.tube.center = TubeSpec::Center::Oracle;
    } else {
        cfg.tube.v = tube.expression("v", v);
        if (cfg.tube.v->uses_u()) detail::SectionReader::fail(v, "tube center may only depend on t");
    }
    const ConfigEntry& M = tube.require("M");
    cfg.tube.M = tube.expression("M", M);
    if (cfg.tube.M.uses_u()) detail::SectionReader::fail(M, "tube radius may only depend on t");
    tube.reject_unknown();

    detail::SectionReader solve(sections, "solve", false);
    if (auto x = solve.optional_count("grid_n")) cfg.solve.grid_n = *x;
    if (auto x = solve.optional_number("damping")) cfg.solve.damping = *x;
    if (auto x = solve.optional_number("tol_fp")) cfg.solve.tol_fp = *x;
    if (auto x = solve.optional_count("max_iter")) cfg.solve.max_iter = *x;
    solve.reject_unknown();

    detail::SectionReader sweep(sections, "sweep", false);
    cfg.sweep_lambda = sweep.optional_list("lambda");
    cfg.sweep_alpha = sweep.optional_list("alpha");
    sweep.reject_unknown();

    try {
        (void)cfg.problem();
        cfg.solve.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) { return read_run_config(load_config_file(path)); }

/// Builds the tube described by spec on the problem's grid with opts.grid_n nodes.
inline Tube build_tube(const TubeSpec& spec, const ThermistorProblem& p, const SolveOptions& opts) {
    const Grid grid = p.grid(opts.grid_n);
    auto eval_t = [](const Expr& e) { return [&e](double t) { return e(t, 0.0); }; };
    GridFunction center = [&] {
        switch (spec.center) {
            case TubeSpec::Center::ClosedForm: return closed_form_center(p, grid);
            case TubeSpec::Center::Oracle: return oracle_solve(p, opts).u;
            case TubeSpec::Center::Expression: break;
        }
        return GridFunction::sample(grid, eval_t(*spec.v));
    }();
    return Tube(std::move(center), GridFunction::sample(grid, eval_t(spec.M)));
}

}  // namespace thermistor
