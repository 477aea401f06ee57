// scaling.hpp — ensemble-size sweeps, power-law fits, exponent classification

#pragma once

#include "dickelab/analysis.hpp"
#include "dickelab/evolve.hpp"

namespace dickelab {

enum class SweepMetric {
    charging_half_time,
    transfer_half_time,
    initial_decay_rate,
    oscillation_frequency,
};

const char* metric_name(SweepMetric metric);

struct SweepRequest {
    // family plus fixed parameters; the ensemble count is replaced per sweep
    // point (supertransfer sets donors and acceptors both to N)
    ModelSpec base_model;
    std::vector<int> n_values; // at least 3 distinct values
    SweepMetric metric = SweepMetric::oscillation_frequency;

    // per-run template: initial state, grid, method, noise; the model and
    // reduction fields are overwritten per point
    EvolutionRequest run_template;
    // record the metric reads; empty selects the metric's default
    // (stored_energy, acceptor_population, P_excited, photon_number)
    std::string observable;

    int max_threads = 1; // >1 runs sweep points concurrently; results identical
};

struct ScalingFit {
    std::vector<std::pair<double, double>> samples; // (N, metric), sorted by N
    double exponent = 0.0;
    double exponent_stderr = 0.0;
    double r_squared = 0.0;
};

enum class ScalingLabel { sqrt_n, linear_n, n_squared, other };

const char* label_name(ScalingLabel label);

// Least squares of log(metric) against log(N).
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& samples);

// Nearest of |exponent| to {0.5, 1, 2} within 0.15 with r^2 >= 0.98, else
// `other`. The magnitude is classified: an enhancement that shortens a time
// as N^-1/2 is the same sqrt(N) law as a rate that grows as N^1/2.
ScalingLabel classify_exponent(const ScalingFit& fit);

// Runs one evolution per N, extracts the metric, and fits. The reduction is
// auto-selected: collective_spin when the family supports it, full_tensor
// otherwise, with caps N <= 15 (full) and N <= 4096 (collective). Throws
// SweepError listing every N whose metric never materialized.
ScalingFit run_sweep(const SweepRequest& req);

} // namespace dickelab
