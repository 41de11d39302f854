#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ricdyn/core.hpp"

namespace ricdyn::app {

enum class InitialKind { Moments, Ermakov, Riccati };

/// Drift limits used by `check`.
struct CheckThresholds {
    double sr_drift = 1e-9;
    double invariant_drift = 1e-8;
    double wronskian_drift = 1e-9;
    double route_agreement = 1e-7;
    double kernel_agreement = 1e-8;
    double kernel_tdse = 1e-4;
    double wigner_identity = 1e-12;
    double wigner_normalization = 1e-6;
    double energy_drift = 1e-9;
};

struct WignerRequest {
    std::vector<double> times;
    double n_sigma = 6.0;
    std::size_t n = 201;
};

struct Scenario {
    std::string name;
    std::string description;
    SystemSpec system;
    Centroid centroid;
    InitialKind initial_kind = InitialKind::Moments;
    // Exactly one of these was given; the others are derived from it.
    UncertaintyTriple moments;
    ErmakovState ermakov;
    RiccatiState riccati;
    double t_end = 1.0;
    std::size_t n_steps = 100;
    IntegratorConfig integrator;
    WignerRequest wigner;
    CheckThresholds check;

    /// Reference frequency for squeezing levels and the classical energy.
    double omega_ref() const { return system.omega(0.0); }
    std::vector<double> time_grid() const { return uniform_grid(0.0, t_end, n_steps); }
};

/// Syntax errors throw ErrorKind::Parse; well-formed documents with missing,
/// mistyped, unknown or inconsistent entries throw ErrorKind::Validation.
Scenario parse_scenario_toml(std::string_view text, const std::string& fallback_name);
Scenario parse_scenario_json(std::string_view text, const std::string& fallback_name);

/// Dispatches on the extension (.toml or .json). The file stem names the
/// scenario unless it sets `name`.
Scenario load_scenario(const std::filesystem::path& path);

/// Comma-separated times; each entry is a number or a multiple of pi such as
/// "pi", "3pi/4", "-pi/2", "0.5pi". Throws ErrorKind::Parse.
std::vector<double> parse_time_list(std::string_view text);

}  // namespace ricdyn::app
