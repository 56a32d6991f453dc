#include "config.hpp"

#include "relaxrd/error.hpp"
#include "relaxrd/models.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace relaxrd::cli {

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

bool RunConfig::operator==(const RunConfig&) const = default;

namespace {

using Value = std::variant<std::string, double, std::vector<double>>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, int line)
{
    const std::string t = trim(text);
    if (t.empty()) {
        throw ConfigError(line, "expected a number");
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError(line, "not a finite number: '" + t + "'");
    }
    return v;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s)
{
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) {
            quoted = !quoted;
        } else if (s[i] == '#' && !quoted) {
            return s.substr(0, i);
        }
    }
    return s;
}

Value parse_value(const std::string& raw, int line)
{
    const std::string t = trim(raw);
    if (t.empty()) {
        throw ConfigError(line, "missing value");
    }
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') {
            throw ConfigError(line, "unterminated string");
        }
        std::string out;
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            if (t[i] == '\\' && i + 2 < t.size()) {
                out += t[++i];
            } else {
                out += t[i];
            }
        }
        return out;
    }
    if (t.front() == '[') {
        if (t.back() != ']') {
            throw ConfigError(line, "unterminated array");
        }
        std::vector<double> items;
        const std::string body = trim(t.substr(1, t.size() - 2));
        if (!body.empty()) {
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                items.push_back(parse_number(item, line));
            }
        }
        return items;
    }
    return parse_number(t, line);
}

std::string type_name(const Value& v)
{
    if (std::holds_alternative<std::string>(v)) {
        return "string";
    }
    return std::holds_alternative<double>(v) ? "number" : "array";
}

struct Entry {
    Value value;
    int line = 0;
};

double as_number(const std::string& key, const Entry& e)
{
    if (!std::holds_alternative<double>(e.value)) {
        throw ConfigError(e.line, key + ": expected a number, got " + type_name(e.value));
    }
    return std::get<double>(e.value);
}

int as_int(const std::string& key, const Entry& e)
{
    const double v = as_number(key, e);
    if (v != std::floor(v) || std::fabs(v) > 1e9) {
        throw ConfigError(e.line, key + ": expected an integer");
    }
    return static_cast<int>(v);
}

const std::string& as_string(const std::string& key, const Entry& e)
{
    if (!std::holds_alternative<std::string>(e.value)) {
        throw ConfigError(e.line, key + ": expected a string, got " + type_name(e.value));
    }
    return std::get<std::string>(e.value);
}

const std::vector<double>& as_array(const std::string& key, const Entry& e)
{
    if (!std::holds_alternative<std::vector<double>>(e.value)) {
        throw ConfigError(e.line, key + ": expected an array, got " + type_name(e.value));
    }
    return std::get<std::vector<double>>(e.value);
}

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"problem",
         {"name", "alpha", "p_exp", "q_exp", "m_exp", "c", "radius", "half_width", "perturbation", "mu", "gamma",
          "beta", "u0", "threshold", "release_time", "domain"}},
        {"scheme", {"reconstruction", "rk", "cfl", "phi", "kappa", "gradient_order"}},
        {"grid", {"m", "my"}},
        {"run", {"t_end", "snapshots"}},
        {"study", {"m_list", "reference", "m_ref"}},
        {"oracle", {"steps"}},
    };
    return keys;
}

const std::map<std::string, std::set<std::string>>& problem_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"heat", {"domain"}},
        {"genfk", {"alpha", "p_exp", "q_exp", "m_exp", "domain"}},
        {"extinction", {"m_exp", "p_exp", "c", "radius", "half_width", "perturbation"}},
        {"frog", {"mu", "gamma", "alpha", "beta", "u0", "threshold", "half_width", "release_time"}},
    };
    return keys;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    std::map<std::string, Entry> entries;
    std::string section;
    std::set<std::string> seen_sections;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) {
            continue;
        }
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError(line, "malformed section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            if (known_keys().count(section) == 0) {
                throw ConfigError(line, "unknown section [" + section + "]");
            }
            if (!seen_sections.insert(section).second) {
                throw ConfigError(line, "duplicate section [" + section + "]");
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(line, "expected key = value");
        }
        const std::string key = trim(s.substr(0, eq));
        if (section.empty()) {
            throw ConfigError(line, "key '" + key + "' outside of any section");
        }
        if (known_keys().at(section).count(key) == 0) {
            throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
        }
        const std::string full = section + "." + key;
        if (entries.count(full) != 0) {
            throw ConfigError(line, "duplicate key '" + full + "'");
        }
        entries[full] = {parse_value(s.substr(eq + 1), line), line};
    }

    RunConfig cfg;
    auto find = [&](const std::string& key) -> const Entry* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto number = [&](const std::string& key, std::optional<double>& out) {
        if (const Entry* e = find(key)) {
            out = as_number(key, *e);
        }
    };
    auto require = [&](const std::string& key, bool ok, const std::string& msg) {
        if (!ok) {
            throw ConfigError(find(key)->line, key + ": " + msg);
        }
    };

    // [problem]
    const Entry* name = find("problem.name");
    if (name == nullptr) {
        throw ConfigError(0, "missing required key problem.name");
    }
    cfg.problem = as_string("problem.name", *name);
    const auto allowed = problem_keys().find(cfg.problem);
    if (allowed == problem_keys().end()) {
        throw ConfigError(name->line, "problem.name: unknown problem '" + cfg.problem
                                          + "' (expected heat, genfk, extinction or frog)");
    }
    for (const auto& [key, entry] : entries) {
        if (key.rfind("problem.", 0) == 0 && key != "problem.name"
            && allowed->second.count(key.substr(8)) == 0) {
            throw ConfigError(entry.line, "key '" + key.substr(8) + "' does not apply to problem '" + cfg.problem + "'");
        }
    }
    number("problem.alpha", cfg.alpha);
    number("problem.p_exp", cfg.p_exp);
    number("problem.q_exp", cfg.q_exp);
    number("problem.m_exp", cfg.m_exp);
    number("problem.c", cfg.c_abs);
    number("problem.radius", cfg.radius);
    number("problem.half_width", cfg.half_width);
    number("problem.perturbation", cfg.perturbation);
    number("problem.mu", cfg.mu);
    number("problem.gamma", cfg.gamma);
    number("problem.beta", cfg.beta);
    number("problem.u0", cfg.u0);
    number("problem.threshold", cfg.threshold);
    number("problem.release_time", cfg.release_time);
    if (const Entry* e = find("problem.domain")) {
        const auto& d = as_array("problem.domain", *e);
        require("problem.domain", d.size() == 2 && d[0] < d[1], "expected [a, b] with a < b");
        cfg.domain = std::array<double, 2>{d[0], d[1]};
    }
    if (cfg.problem == "genfk") {
        const bool exps = cfg.p_exp || cfg.q_exp || cfg.m_exp;
        if (cfg.alpha && exps) {
            throw ConfigError(find("problem.alpha")->line, "problem.alpha: give either alpha or p_exp/q_exp/m_exp");
        }
        if (!cfg.alpha && !(cfg.p_exp && cfg.q_exp && cfg.m_exp)) {
            throw ConfigError(name->line, "genfk needs alpha or all of p_exp, q_exp, m_exp");
        }
        if (cfg.alpha) {
            require("problem.alpha", *cfg.alpha > 0.0, "must be positive");
        }
    }

    // [scheme]
    if (const Entry* e = find("scheme.reconstruction")) {
        try {
            cfg.reconstruction = ReconstructionKind::parse(as_string("scheme.reconstruction", *e));
        } catch (const InvalidArgument& err) {
            throw ConfigError(e->line, std::string("scheme.reconstruction: ") + err.what());
        }
    }
    if (const Entry* e = find("scheme.rk")) {
        cfg.rk = as_int("scheme.rk", *e);
        require("scheme.rk", cfg.rk >= 1 && cfg.rk <= 3, "order out of range 1..3");
    }
    if (const Entry* e = find("scheme.cfl")) {
        cfg.cfl = as_number("scheme.cfl", *e);
        require("scheme.cfl", cfg.cfl > 0.0, "must be positive");
    }
    const Entry* kappa = find("scheme.kappa");
    if (const Entry* e = find("scheme.phi")) {
        if (std::holds_alternative<std::string>(e->value)) {
            require("scheme.phi", std::get<std::string>(e->value) == "auto", "expected \"auto\" or a positive number");
        } else {
            const double v = as_number("scheme.phi", *e);
            require("scheme.phi", v > 0.0, "must be positive");
            if (kappa != nullptr) {
                throw ConfigError(kappa->line, "scheme.kappa only applies to phi = \"auto\"");
            }
            cfg.phi = PhiPolicy::fixed(v);
        }
    }
    if (kappa != nullptr) {
        const double k = as_number("scheme.kappa", *kappa);
        require("scheme.kappa", k >= 1.0, "must be at least 1");
        cfg.phi = PhiPolicy::automatic(k);
    }
    cfg.gradient_order = 2 * cfg.rk;
    if (const Entry* e = find("scheme.gradient_order")) {
        cfg.gradient_order = as_int("scheme.gradient_order", *e);
        require("scheme.gradient_order",
                cfg.gradient_order == 2 || cfg.gradient_order == 4 || cfg.gradient_order == 6,
                "order out of range, expected 2, 4 or 6");
        require("scheme.gradient_order", cfg.gradient_order >= 2 * cfg.rk, "must be at least twice the RK order");
    }

    // [grid]
    if (const Entry* e = find("grid.m")) {
        cfg.m = as_int("grid.m", *e);
        require("grid.m", cfg.m >= 1, "must be at least 1");
    }
    if (const Entry* e = find("grid.my")) {
        cfg.my = as_int("grid.my", *e);
        require("grid.my", cfg.my >= 1, "must be at least 1");
    }

    // [run]
    if (const Entry* e = find("run.t_end")) {
        cfg.t_end = as_number("run.t_end", *e);
        require("run.t_end", cfg.t_end > 0.0, "must be positive");
    }
    if (const Entry* e = find("run.snapshots")) {
        cfg.snapshots = as_array("run.snapshots", *e);
        require("run.snapshots", !cfg.snapshots.empty(), "must not be empty");
        for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) {
            require("run.snapshots", cfg.snapshots[i] >= 0.0, "times must be non-negative");
            require("run.snapshots", i == 0 || cfg.snapshots[i] > cfg.snapshots[i - 1], "times must increase");
            require("run.snapshots", cfg.t_end == 0.0 || cfg.snapshots[i] <= cfg.t_end, "times must not exceed t_end");
        }
    }

    // [study]
    if (const Entry* e = find("study.m_list")) {
        const auto& list = as_array("study.m_list", *e);
        require("study.m_list", list.size() >= 2, "needs at least two grids");
        for (double v : list) {
            require("study.m_list", v >= 1.0 && v == std::floor(v) && v < 1e9, "grid sizes must be positive integers");
            cfg.m_list.push_back(static_cast<int>(v));
        }
        const int factor = cfg.m_list[1] / cfg.m_list[0];
        bool ok = factor >= 2;
        for (std::size_t i = 1; i < cfg.m_list.size(); ++i) {
            ok = ok && cfg.m_list[i] == cfg.m_list[i - 1] * factor;
        }
        require("study.m_list", ok, "grids must grow by a constant integer factor");
    }
    const Entry* m_ref = find("study.m_ref");
    if (const Entry* e = find("study.reference")) {
        const std::string& r = as_string("study.reference", *e);
        if (r == "exact") {
            if (m_ref != nullptr) {
                throw ConfigError(m_ref->line, "study.m_ref only applies to reference = \"fine\"");
            }
        } else if (r == "fine") {
            if (m_ref == nullptr) {
                throw ConfigError(e->line, "reference = \"fine\" needs study.m_ref");
            }
            cfg.reference = Reference::fine_grid(as_int("study.m_ref", *m_ref));
            require("study.m_ref", cfg.reference.m_ref >= 1, "must be positive");
        } else {
            require("study.reference", false, "expected \"exact\" or \"fine\"");
        }
    } else if (m_ref != nullptr) {
        throw ConfigError(m_ref->line, "study.m_ref only applies to reference = \"fine\"");
    }

    // [oracle]
    if (const Entry* e = find("oracle.steps")) {
        cfg.oracle_steps = as_int("oracle.steps", *e);
        require("oracle.steps", cfg.oracle_steps >= 0, "must be non-negative");
    }
    return cfg;
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

template <typename T>
std::string array(const std::vector<T>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + num(static_cast<double>(v[i]));
    }
    return out + "]";
}

} // namespace

std::string render(const RunConfig& cfg)
{
    std::ostringstream os;
    os << "[problem]\nname = " << quoted(cfg.problem) << "\n";
    const std::pair<const char*, const std::optional<double>*> params[] = {
        {"alpha", &cfg.alpha},         {"p_exp", &cfg.p_exp},
        {"q_exp", &cfg.q_exp},         {"m_exp", &cfg.m_exp},
        {"c", &cfg.c_abs},             {"radius", &cfg.radius},
        {"half_width", &cfg.half_width}, {"perturbation", &cfg.perturbation},
        {"mu", &cfg.mu},               {"gamma", &cfg.gamma},
        {"beta", &cfg.beta},           {"u0", &cfg.u0},
        {"threshold", &cfg.threshold}, {"release_time", &cfg.release_time},
    };
    for (const auto& [key, value] : params) {
        if (*value) {
            os << key << " = " << num(**value) << "\n";
        }
    }
    if (cfg.domain) {
        os << "domain = [" << num((*cfg.domain)[0]) << ", " << num((*cfg.domain)[1]) << "]\n";
    }

    os << "\n[scheme]\nreconstruction = " << quoted(cfg.reconstruction.name()) << "\nrk = " << cfg.rk
       << "\ncfl = " << num(cfg.cfl) << "\n";
    if (cfg.phi.kind == PhiPolicy::Kind::Fixed) {
        os << "phi = " << num(cfg.phi.value) << "\n";
    } else {
        os << "phi = \"auto\"\nkappa = " << num(cfg.phi.value) << "\n";
    }
    os << "gradient_order = " << cfg.gradient_order << "\n";

    if (cfg.m > 0 || cfg.my > 0) {
        os << "\n[grid]\n";
        if (cfg.m > 0) {
            os << "m = " << cfg.m << "\n";
        }
        if (cfg.my > 0) {
            os << "my = " << cfg.my << "\n";
        }
    }
    if (cfg.t_end > 0.0 || !cfg.snapshots.empty()) {
        os << "\n[run]\n";
        if (cfg.t_end > 0.0) {
            os << "t_end = " << num(cfg.t_end) << "\n";
        }
        if (!cfg.snapshots.empty()) {
            os << "snapshots = " << array(cfg.snapshots) << "\n";
        }
    }
    os << "\n[study]\n";
    if (!cfg.m_list.empty()) {
        os << "m_list = " << array(cfg.m_list) << "\n";
    }
    if (cfg.reference.kind == Reference::Kind::Exact) {
        os << "reference = \"exact\"\n";
    } else {
        os << "reference = \"fine\"\nm_ref = " << cfg.reference.m_ref << "\n";
    }
    os << "\n[oracle]\nsteps = " << cfg.oracle_steps << "\n";
    return os.str();
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(0, "cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(e.line(), path + ": " + e.what());
    }
}

Problem build_problem(const RunConfig& cfg)
{
    Problem p;
    if (cfg.problem == "heat") {
        p = heat_problem();
    } else if (cfg.problem == "genfk") {
        if (cfg.alpha) {
            p = genfk_problem(1.0, *cfg.alpha, *cfg.alpha);
        } else {
            p = genfk_problem(*cfg.p_exp, *cfg.q_exp, *cfg.m_exp);
        }
    } else if (cfg.problem == "extinction") {
        ExtinctionShape shape;
        shape.radius = cfg.radius.value_or(shape.radius);
        shape.half_width = cfg.half_width.value_or(shape.half_width);
        shape.perturbation = cfg.perturbation.value_or(shape.perturbation);
        p = extinction_problem(cfg.m_exp.value_or(2.0), cfg.p_exp.value_or(0.5), cfg.c_abs.value_or(1.0), shape);
    } else if (cfg.problem == "frog") {
        FrogParameters fp;
        fp.mu = cfg.mu.value_or(fp.mu);
        fp.gamma = cfg.gamma.value_or(fp.gamma);
        fp.alpha = cfg.alpha.value_or(fp.alpha);
        fp.beta = cfg.beta.value_or(fp.beta);
        fp.u0 = cfg.u0.value_or(fp.u0);
        fp.threshold = cfg.threshold.value_or(fp.threshold);
        fp.half_width = cfg.half_width.value_or(fp.half_width);
        p = frog_problem(fp, cfg.release_time.value_or(5.0));
    } else {
        throw ConfigError(0, "unknown problem '" + cfg.problem + "'");
    }
    if (cfg.domain) {
        p.x_domain = *cfg.domain;
    }
    return p;
}

SchemeConfig build_scheme(const RunConfig& cfg)
{
    SchemeConfig s = SchemeConfig::make(cfg.reconstruction, cfg.rk);
    s.cfl_parabolic = cfg.cfl;
    s.phi = cfg.phi;
    s.gradient_order = cfg.gradient_order;
    s.validate();
    return s;
}

} // namespace relaxrd::cli
