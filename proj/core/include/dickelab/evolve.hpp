// evolve.hpp — closed (Schrodinger) and open (Lindblad) propagation
//
// Closed runs propagate state vectors: eigendecomposition or Krylov for
// static Hamiltonians, embedded adaptive Runge-Kutta for driven ones.
// Open runs propagate the density operator with fixed-step RK4 on
//   drho/dt = -i[H,rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2).
//
// Every run monitors the truncation leak (top Fock level of each mode,
// abort threshold 1e-6) plus norm/energy (closed) or trace/positivity
// (open) drift; maxima are reported in Trajectory::stats.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dickelab/models.hpp"
#include "dickelab/state.hpp"

namespace dickelab {

enum class Method { auto_select, eigendecomposition, krylov, adaptive_rk };

enum class NoiseKind { individual_decay, collective_decay, individual_dephasing };

struct NoiseTerm {
    NoiseKind kind = NoiseKind::individual_decay;
    double rate = 0.0;
};

struct EvolutionRequest {
    ModelSpec model;
    Reduction reduction = Reduction::full_tensor;
    // all_ground, one_photon, symmetric_one_excitation, fully_excited, or
    // product:<tokens> (see state.hpp)
    std::string initial_state = "all_ground";
    double t_max = 1.0;
    double dt_output = 0.1;
    Method method = Method::auto_select;
    std::vector<NoiseTerm> noise;
    std::vector<std::string> observables;

    // tuning knobs; zero means built-in policy
    double open_internal_step = 0.0;
    std::int64_t open_dimension_cap = 512;
};

struct RunStats {
    std::string method_used;
    std::int64_t steps_accepted = 0;
    std::int64_t steps_rejected = 0;
    double max_truncation_leak = 0.0;
    double max_norm_drift = 0.0;   // trace drift for open runs
    double max_energy_drift = 0.0; // static closed runs only
    double min_density_eigenvalue = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> records; // records[k][i] = labels[k] at times[i]

    BasisPtr basis;
    Vector final_amplitudes;           // closed runs
    Eigen::VectorXd final_populations; // open runs (diagonal of rho)
    RunStats stats;

    const std::vector<double>& column(const std::string& label) const;
};

// Named observables: P_excited, photon_number, Jz, N_exc, stored_energy,
// donor_population, acceptor_population. Throws on names a model/basis
// cannot support.
Operator named_observable(const std::string& name, const ModelSpec& model, const BasisPtr& basis);

// <psi|A|psi>; imaginary residue above 1e-10 or a non-Hermitian A is rejected.
double measure(const Operator& observable, const State& state);
double measure(const Operator& observable, const DenseMatrix& rho);

Trajectory evolve_closed(const EvolutionRequest& req);
Trajectory evolve_open(const EvolutionRequest& req);

// Dispatches on req.noise: empty -> closed, else open.
Trajectory evolve(const EvolutionRequest& req);

namespace detail {

// exp(-i H t) v via Arnoldi projection with sub-stepping; matvec counts are
// added to *matvecs when given.
Vector krylov_expv(const Operator& h, Vector v, double t, std::int64_t* matvecs = nullptr);

} // namespace detail

} // namespace dickelab
