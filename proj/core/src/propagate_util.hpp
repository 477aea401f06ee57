// propagate_util.hpp — internals shared by the closed and open engines

#pragma once

#include <vector>

#include "dickelab/evolve.hpp"

namespace dickelab::detail {

inline constexpr double kLeakThreshold = 1e-6;

std::vector<double> output_grid(double t_max, double dt_output);

struct LeakMonitor {
    std::vector<std::string> mode_labels;
    std::vector<Operator> projectors;
    double max_leak = 0.0;

    explicit LeakMonitor(const BasisPtr& basis);
    void check(const Vector& psi);
    void check(const DenseMatrix& rho);

private:
    void update(std::size_t m, double occupation);
};

// Collapse operators sqrt(rate) * L for a noise list; throws on negative
// rates or kinds a collective basis cannot represent.
std::vector<Operator> collapse_operators(const std::vector<NoiseTerm>& noise, const BasisPtr& basis);

struct PreparedRun {
    BasisPtr basis;
    Hamiltonian hamiltonian;
    State initial;
    std::vector<std::string> labels;
    std::vector<Operator> observables;
};

PreparedRun prepare_run(const EvolutionRequest& req);

} // namespace dickelab::detail
