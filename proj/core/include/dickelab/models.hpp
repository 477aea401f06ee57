// models.hpp — Hamiltonian families built from declarative specs
//
// Sign conventions per family (sigma_z is the Pauli matrix, eigenvalues ±1;
// TLS energy terms use the spin form sigma_z/2, i.e. Jz on the symmetric
// subspace):
//
//   family              TLS term               counter-rotating
//   rabi                +omega0/2 sigma_z      yes   g (a + a^dag) sigma_x
//   jaynes_cummings     +omega0/2 sigma_z      no    g (s+ a + s- a^dag)
//   dicke               +omega0/2 sum sigma_z  yes   g sum sigma_x (a + a^dag)
//   tavis_cummings      +omega0/2 sum sigma_z  no    g (J+ a + J- a^dag)
//   supertransfer       -omega/2 sum sigma_z   no    gamma all-to-all flip-flop
//   driven_battery      +(omega-omega_L)/2 .   no    rotating frame, Gaussian drive
//   two_ensemble_cavity collective TLS pair    no    two coupled cavities
//   two_qubit_transfer  none                   no    gamma flip-flop
//
// driven_battery: the static part carries the rotating-frame detuning
// (omega - omega_L) on both the TLS and the mode; omega0 is the physical
// TLS splitting and is used only by the stored_energy observable.

#pragma once

#include <optional>
#include <variant>

#include "dickelab/operators.hpp"

namespace dickelab {

struct RabiSpec {
    double omega0 = 1.0;
    double omega = 1.0;
    double g = 0.0;
    int fock_cutoff = 1;
};

struct JaynesCummingsSpec {
    double omega0 = 1.0;
    double omega = 1.0;
    double g = 0.0;
    int fock_cutoff = 1;
};

struct DickeSpec {
    int n_tls = 1;
    double omega0 = 1.0;
    double omega = 1.0;
    double g = 0.0;
    int fock_cutoff = 1;
};

struct TavisCummingsSpec {
    int n_tls = 1;
    double omega0 = 1.0;
    double omega = 1.0;
    double g = 0.0;
    int fock_cutoff = 1;
};

struct SupertransferSpec {
    int n_donors = 1;
    int m_acceptors = 1;
    double omega_a = 1.0;
    double omega_b = 1.0;
    double gamma = 0.0;
};

struct DrivenBatterySpec {
    int n_tls = 1;
    double omega0 = 1.0;  // physical TLS splitting (stored_energy scale)
    double omega = 1.0;   // TLS/cavity frequency entering the detuning
    double omega_l = 1.0; // laser frequency; detuning = omega - omega_l
    double g = 0.0;
    double eta0 = 0.0;
    double sigma_pulse = 1.0;
    double t0 = 0.0;
    int fock_cutoff = 1;
};

struct TwoEnsembleCavitySpec {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double j_cavity = 0.0;
    double delta = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double n1 = 1.0;
    double n2 = 1.0;
    double kappa = 0.0; // X-ray driving strength; stored, not used by the Hamiltonian
    int fock_cutoff = 1;
};

struct TwoQubitTransferSpec {
    double gamma = 0.0;
};

using ModelSpec = std::variant<RabiSpec, JaynesCummingsSpec, DickeSpec, TavisCummingsSpec,
                               SupertransferSpec, DrivenBatterySpec, TwoEnsembleCavitySpec,
                               TwoQubitTransferSpec>;

// Gaussian pulse: eta(t) = eta0 / (sigma sqrt(2 pi)) exp(-((t-t0)/sigma)^2 / 2)
struct DriveEnvelope {
    double eta0 = 0.0;
    double sigma = 1.0;
    double t0 = 0.0;

    double operator()(double t) const;
};

struct Hamiltonian {
    Operator static_part;
    std::optional<DriveEnvelope> envelope;
    std::optional<Operator> drive_operator; // H(t) = static + eta(t) * drive
    bool has_drive() const { return envelope.has_value(); }
    Operator at(double t) const {
        if (!has_drive()) return static_part;
        return static_part + drive_operator->scaled((*envelope)(t));
    }
};

const char* family_name(const ModelSpec& spec);

// Throws ModelError on invalid parameters (counts < 1, cutoffs < 1, ...).
void validate_spec(const ModelSpec& spec);

// Canonical basis for a family; collective_spin is rejected for families
// that are not permutation-symmetric (two_qubit_transfer).
BasisSpec default_basis_spec(const ModelSpec& spec, Reduction reduction);

// Static Hamiltonian plus the optional drive pair. The basis must match
// default_basis_spec in layout.
Hamiltonian build_hamiltonian(const ModelSpec& spec, const BasisPtr& basis);

// Total excitation operator (sum of TLS excitation numbers plus photon
// numbers) when the family conserves it; absent for counter-rotating
// families (rabi, dicke) and for two_ensemble_cavity.
std::optional<Operator> conserved_excitation_operator(const ModelSpec& spec, const BasisPtr& basis);

// Excitation number over all TLS and modes regardless of conservation
// (used to demonstrate counter-rotating non-conservation).
Operator excitation_number_operator(const BasisPtr& basis);

// Vacuum Rabi splitting of the two ensemble-dominated eigenstates in the
// single-excitation block of a two_ensemble_cavity model; the effective
// inter-ensemble coupling is half this splitting.
double two_ensemble_rabi_splitting(const TwoEnsembleCavitySpec& spec);

} // namespace dickelab
