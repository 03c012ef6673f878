// SPDX-License-Identifier: Apache-2.0
#include "kinetic_uq/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "kinetic_uq/error.hpp"
#include "report_io.hpp"

namespace kuq {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw Error(ErrorCode::config,
                "invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                    std::string(expected) + ")");
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "a nonnegative integer");
    return out;
}

double parse_real(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v, "a real number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "true or false");
}

std::vector<double> parse_real_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(parse_real(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v = v.substr(comma + 1);
    }
    if (out.empty()) bad_value(key, v, "a comma separated list of reals");
    return out;
}

std::string real_list(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += detail::format_double(xs[i]);
    }
    return s;
}

NormKind parse_norm(std::string_view key, std::string_view v) {
    if (v == "l2") return NormKind::l2;
    if (v == "v") return NormKind::v;
    bad_value(key, v, "l2 or v");
}

struct Field {
    const char* key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    bool model;  // affects the model output
};

const std::vector<Field>& schema() {
    using C = ExperimentConfig;
    using S = std::string_view;
    static const std::vector<Field> fields = {
        {"grid.nx", [](C& c, S v) { c.nx = parse_uint("grid.nx", v); }, [](const C& c) { return std::to_string(c.nx); }, true},
        {"grid.nv", [](C& c, S v) { c.nv = parse_uint("grid.nv", v); }, [](const C& c) { return std::to_string(c.nv); }, true},
        {"grid.dt", [](C& c, S v) { c.dt = parse_real("grid.dt", v); }, [](const C& c) { return detail::format_double(c.dt); }, true},
        {"time.final", [](C& c, S v) { c.final_time = parse_real("time.final", v); },
         [](const C& c) { return detail::format_double(c.final_time); }, true},
        {"model.epsilon", [](C& c, S v) { c.epsilons = parse_real_list("model.epsilon", v); },
         [](const C& c) { return real_list(c.epsilons); }, false},
        {"field.family",
         [](C& c, S v) {
             try {
                 c.family = parse_field_family(v);
             } catch (const Error&) {
                 bad_value("field.family", v, "exp2, invsq or inv");
             }
             if (c.family == FieldFamily::custom) bad_value("field.family", v, "exp2, invsq or inv");
         },
         [](const C& c) { return std::string(to_string(c.family)); }, true},
        {"field.time_dependent", [](C& c, S v) { c.time_dependent = parse_bool("field.time_dependent", v); },
         [](const C& c) { return std::string(c.time_dependent ? "true" : "false"); }, true},
        {"field.dim", [](C& c, S v) { c.dim = parse_uint("field.dim", v); }, [](const C& c) { return std::to_string(c.dim); }, true},
        {"driver.kind",
         [](C& c, S v) {
             try {
                 c.driver = parse_driver_kind(v);
             } catch (const Error&) {
                 bad_value("driver.kind", v, "raspi, aspi or amc");
             }
         },
         [](const C& c) { return std::string(to_string(c.driver)); }, false},
        {"driver.budget", [](C& c, S v) { c.budget = parse_uint("driver.budget", v); },
         [](const C& c) { return std::to_string(c.budget); }, false},
        {"driver.norm", [](C& c, S v) { c.norm = parse_norm("driver.norm", v); },
         [](const C& c) { return std::string(c.norm == NormKind::l2 ? "l2" : "v"); }, false},
        {"driver.seed", [](C& c, S v) { c.driver_seed = parse_uint("driver.seed", v); },
         [](const C& c) { return std::to_string(c.driver_seed); }, false},
        {"mc.samples", [](C& c, S v) { c.mc_samples = parse_uint("mc.samples", v); },
         [](const C& c) { return std::to_string(c.mc_samples); }, false},
        {"mc.seed", [](C& c, S v) { c.mc_seed = parse_uint("mc.seed", v); }, [](const C& c) { return std::to_string(c.mc_seed); }, false},
        {"mc.every", [](C& c, S v) { c.mc_every = parse_uint("mc.every", v); }, [](const C& c) { return std::to_string(c.mc_every); }, false},
        {"solver.tol", [](C& c, S v) { c.solver_tolerance = parse_real("solver.tol", v); },
         [](const C& c) { return detail::format_double(c.solver_tolerance); }, true},
        {"solver.max_iter", [](C& c, S v) { c.solver_max_iterations = parse_uint("solver.max_iter", v); },
         [](const C& c) { return std::to_string(c.solver_max_iterations); }, true},
        {"solver.restart", [](C& c, S v) { c.solver_restart = parse_uint("solver.restart", v); },
         [](const C& c) { return std::to_string(c.solver_restart); }, true},
        {"output.dir", [](C& c, S v) { c.output_dir = std::filesystem::path(std::string(v)); },
         [](const C& c) { return c.output_dir.string(); }, false},
        {"output.cache_dir", [](C& c, S v) { c.cache_dir = std::filesystem::path(std::string(v)); },
         [](const C& c) { return c.cache_dir.string(); }, false},
        {"harness.slope_window", [](C& c, S v) { c.slope_window = parse_real("harness.slope_window", v); },
         [](const C& c) { return detail::format_double(c.slope_window); }, false},
    };
    return fields;
}

const Field& find_field(std::string_view key) {
    for (const auto& f : schema()) {
        if (key == f.key) return f;
    }
    throw Error(ErrorCode::config, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string_view value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        try {
            cfg.set(trim(line.substr(0, eq)), value);
        } catch (const Error& e) {
            throw Error(ErrorCode::config, "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ExperimentConfig::set(std::string_view key, std::string_view value) { find_field(key).set(*this, trim(value)); }

std::string ExperimentConfig::get(std::string_view key) const { return find_field(key).get(*this); }

std::vector<std::string> ExperimentConfig::keys() {
    std::vector<std::string> out;
    for (const auto& f : schema()) out.emplace_back(f.key);
    return out;
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorCode::config, what);
    };
    require(nx >= 2, "grid.nx must be at least 2");
    require(nv >= 3, "grid.nv must be at least 3");
    require(dt >= 0.0, "grid.dt must be nonnegative");
    require(final_time >= 0.0, "time.final must be nonnegative");
    require(!epsilons.empty(), "model.epsilon needs at least one value");
    for (double e : epsilons) require(e > 0.0, "model.epsilon values must be positive");
    require(dim >= 1, "field.dim must be at least 1");
    require(budget >= 1, "driver.budget must be at least 1");
    require(mc_samples >= 1, "mc.samples must be at least 1");
    require(mc_every >= 1, "mc.every must be at least 1");
    require(solver_tolerance > 0.0, "solver.tol must be positive");
    require(solver_max_iterations >= 1, "solver.max_iter must be at least 1");
    require(solver_restart >= 1, "solver.restart must be at least 1");
    require(slope_window > 0.0 && slope_window <= 1.0, "harness.slope_window must lie in (0, 1]");
}

std::string ExperimentConfig::canonical() const {
    std::string s;
    for (const auto& f : schema()) {
        s += f.key;
        s += " = ";
        s += f.get(*this);
        s += '\n';
    }
    return s;
}

std::uint64_t ExperimentConfig::hash() const {
    // Output locations do not change results.
    std::string s;
    for (const auto& f : schema()) {
        const std::string_view key = f.key;
        if (key == "output.dir" || key == "output.cache_dir") continue;
        s += key;
        s += '=';
        s += f.get(*this);
        s += '\n';
    }
    return detail::fnv1a(s);
}

std::uint64_t ExperimentConfig::model_hash(double epsilon) const {
    std::string s;
    for (const auto& f : schema()) {
        if (!f.model) continue;
        s += f.key;
        s += '=';
        s += f.get(*this);
        s += '\n';
    }
    s += "epsilon=" + detail::format_double(epsilon) + '\n';
    return detail::fnv1a(s);
}

SolverOptions ExperimentConfig::solver_options() const {
    SolverOptions o;
    o.tolerance = solver_tolerance;
    o.max_iterations = solver_max_iterations;
    o.restart = solver_restart;
    return o;
}

}  // namespace kuq
