#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qrac/rac.hpp"

namespace qrac::seesaw {

struct SeesawConfig {
    int restarts = 100;
    int max_outer_iters = 500;
    /// Absolute ASP improvement per full outer iteration below which a
    /// restart counts as converged.
    double outer_tol = 1e-9;
    int inner_max_iters = 2000;
    /// Fixed-point residual for the measurement half-step.
    double inner_tol = 1e-11;
    std::uint64_t master_seed = 0;
    /// Parallel restart workers; 0 uses the available hardware parallelism.
    int threads = 0;
};

/// Per-restart record. asp_per_iteration starts at the 1/d baseline and adds
/// one entry per half-step; it is non-decreasing within round-off.
struct SeesawTrace {
    int restart_index = 0;
    std::vector<double> asp_per_iteration;
    bool converged = false;
    bool measurement_step_truncated = false;
    bool failed = false;
    std::string error;
    double final_asp = 0.0;
};

struct HistogramBin {
    double value = 0.0; // final ASP rounded to 5 decimals
    int count = 0;
};

struct SeesawResult {
    double best_asp = 0.0;
    int best_restart = -1;
    Strategy best_strategy;
    std::vector<SeesawTrace> traces;
    std::vector<HistogramBin> local_optima_histogram;
};

/// Optimal-discrimination POVM for an ensemble of PSD operators, maximizing
/// sum_b Tr(R_b M_b) by the fixed-point iteration
/// M_b <- lambda^{-1/2} R_b M_b R_b lambda^{-1/2}, lambda = sum_b R_b M_b R_b,
/// with the off-support completeness deficit shared evenly across effects.
/// Starts from `init` when given, identity/d otherwise, and returns the best
/// iterate seen.
struct DiscriminationResult {
    std::vector<Matrix> effects;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

DiscriminationResult discrimination_povm(const std::vector<Matrix>& ensemble,
                                         int max_iters = 2000, double tol = 1e-11,
                                         const std::vector<Matrix>* init = nullptr);

/// d^n independent Haar-random pure states of dimension D, in rank order.
std::vector<Matrix> initial_states(const RacSetting& setting, std::mt19937_64& rng);

/// Closed-form exact state half-step (top eigenprojectors).
std::vector<Matrix> state_step(const std::vector<Povm>& measurements);

struct MeasurementStepResult {
    std::vector<Povm> measurements;
    bool truncated = false; // some inner iteration hit its budget
};

/// Measurement half-step: per decoding position y, the discrimination
/// optimum for the ensemble R_{b|y} = sum_{x: x_y = b} rho_x. When previous
/// measurements are supplied, any y whose iterate scores below the previous
/// POVM keeps the previous POVM, so the global ASP never decreases.
MeasurementStepResult measurement_step(const std::vector<Matrix>& states,
                                       const RacSetting& setting,
                                       const std::vector<Povm>* previous = nullptr,
                                       int max_iters = 2000, double tol = 1e-11);

/// Multi-restart alternating optimization. Restart r draws its own generator
/// from (master_seed, r), so results do not depend on scheduling or thread
/// count. Failed restarts are recorded and excluded from the maximum.
SeesawResult seesaw_run(const RacSetting& setting, const SeesawConfig& config);

} // namespace qrac::seesaw
