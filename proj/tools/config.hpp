#pragma once

#include "relaxrd/harness.hpp"
#include "relaxrd/problem.hpp"
#include "relaxrd/relax.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaxrd::cli {

/// Malformed or invalid configuration. line() is 0 when the problem is not
/// tied to a single line (e.g. a missing key).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

struct RunConfig {
    // [problem]
    std::string problem;
    std::optional<double> alpha;
    std::optional<double> p_exp;
    std::optional<double> q_exp;
    std::optional<double> m_exp;
    std::optional<double> c_abs;
    std::optional<double> radius;
    std::optional<double> half_width;
    std::optional<double> perturbation;
    std::optional<double> mu;
    std::optional<double> gamma;
    std::optional<double> beta;
    std::optional<double> u0;
    std::optional<double> threshold;
    std::optional<double> release_time;
    std::optional<std::array<double, 2>> domain;

    // [scheme]
    ReconstructionKind reconstruction = ReconstructionKind::eno(3);
    int rk = 2;
    double cfl = 0.25;
    PhiPolicy phi = PhiPolicy::automatic(1.0);
    int gradient_order = 4;

    // [grid]
    int m = 0;
    int my = 0;

    // [run]
    double t_end = 0.0;
    std::vector<double> snapshots;

    // [study]
    std::vector<int> m_list;
    Reference reference = Reference::exact();

    // [oracle]
    int oracle_steps = 10;

    bool operator==(const RunConfig&) const;
};

RunConfig parse_config(const std::string& text);
std::string render(const RunConfig& cfg);
/// Reads and parses a file; a missing or unreadable file is a ConfigError
/// naming the path.
RunConfig load_config(const std::string& path);

Problem build_problem(const RunConfig& cfg);
SchemeConfig build_scheme(const RunConfig& cfg);

} // namespace relaxrd::cli
