#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ricdyn/app/scenario.hpp"
#include "ricdyn/wigner.hpp"

namespace ricdyn::app {

/// Every route evolved on the same time grid.
struct Simulation {
    std::vector<double> times;
    std::vector<Centroid> centroid;
    std::vector<ErmakovState> ermakov;
    std::vector<RiccatiState> riccati;
    std::vector<LambdaState> lambda;          // lambda(0) = alpha0, so |lambda| = alpha
    std::vector<UncertaintyTriple> moments;   // closed moment system
    double invariant0 = 0.0;
};

Simulation simulate(const Scenario& sc, std::span<const double> times);
inline Simulation simulate(const Scenario& sc) { return simulate(sc, sc.time_grid()); }

/// Columns t, eta, eta_dot, alpha, alpha_dot, C_R, C_I, sigma_xx, sigma_pp,
/// sigma_xp, Cor, I_ermakov, SR_defect, wronskian_defect with 17 significant digits.
void write_timeseries_csv(std::ostream& out, const Scenario& sc, const Simulation& sim);

struct Extrema {
    double min = 0.0;
    double max = 0.0;
};

struct Summary {
    std::size_t samples = 0;
    double t_end = 0.0;
    double max_sr_defect = 0.0;
    double invariant0 = 0.0;
    double invariant_drift = 0.0;  // relative; absolute when the invariant is zero
    double max_wronskian_drift = 0.0;
    double route_spread = 0.0;     // max pairwise |sigma_xx| difference over the four routes
    Extrema sigma_xx, sigma_pp, sigma_xp, correlation;
    double t_correlation_max = 0.0;
    double position_squeezing_level = 0.0;  // only meaningful for omega_ref > 0
    double momentum_squeezing_level = 0.0;
};

Summary summarize(const Scenario& sc, const Simulation& sim);
std::string summary_json(const Scenario& sc, const Summary& s);

/// Kernel-evolved packet against the direct evolution at every grid time
/// away from caustics.
struct KernelComparison {
    std::size_t compared = 0;
    std::size_t focal_skipped = 0;
    double max_c_error = 0.0;    // |C_kernel - C_direct| / max(1, |C_direct|)
    double max_eta_error = 0.0;  // |eta_kernel - eta_direct| / max(1, |eta_direct|)
    double max_norm_error = 0.0;
    double tdse_window_start = 0.0;
    double tdse_residual = 0.0;  // kernel TDSE residual over a short dense window
};

KernelComparison compare_kernel(const Scenario& sc, const Simulation& sim);
std::string kernel_report_json(const Scenario& sc, const KernelComparison& k);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Runs the invariant suite against the scenario's thresholds.
std::vector<CheckResult> run_checks(const Scenario& sc, const Simulation& sim);

/// Centroid and moments at arbitrary times (times need not be sorted).
std::vector<PhaseSpaceSample> phase_space_samples(const Scenario& sc, std::span<const double> times);

}  // namespace ricdyn::app
