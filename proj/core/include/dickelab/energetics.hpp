// energetics.hpp — unit-bridge calculators for energy and power densities
// and the collective nuclear excitation-transfer rate
//
// Pure stateless functions. Dynamics elsewhere runs in natural units; this
// module alone speaks eV, kg, and seconds. Two constant sets coexist on
// purpose: the general converters use full-precision values, while the
// battery-density formulas keep the rounded constants they are quoted with
// so their published outputs reproduce digit-for-digit.

#pragma once

#include <vector>

#include "dickelab/errors.hpp"

namespace dickelab {
namespace energetics {

namespace constants {
inline constexpr double joule_per_ev = 1.602176e-19;
inline constexpr double avogadro = 6.02214e23; // 1/mol
inline constexpr double joule_per_kwh = 3.6e6;
inline constexpr double hbar_ev_s = 6.582e-16;
inline constexpr double nuclear_magneton_ev_per_t = 3.15e-8;
// rounded constants used verbatim by the battery formulas
inline constexpr double wh_per_ev = 4.45e-23;
inline constexpr double watt_per_ev_ps = 1.602e-7;
inline constexpr double kg_per_u = 1.661e-27;
} // namespace constants

struct MassFraction {
    double fraction = 0.0;   // atomic (mole) fraction
    double molar_mass = 0.0; // g/mol
};

// Weighted average sum(fraction * molar_mass); fractions must total 1
// within 1e-6. Mixtures without a molar-mass basis are rejected rather
// than guessed.
double molar_mass_from_composition(const std::vector<MassFraction>& composition);

// E[kWh/kg] = E[eV/atom] * joule_per_ev * avogadro / (molar_mass/1000) / joule_per_kwh
double ev_per_atom_to_kwh_per_kg(double ev_per_atom, double molar_mass_g_mol);
double kwh_per_kg_to_ev_per_atom(double kwh_per_kg, double molar_mass_g_mol);

// thickness [m] * density [kg/m^3] -> g/m^2
double material_use_per_area(double thickness_m, double density_kg_m3);

// areal mass [g/m^2] * area [m^2] / peak power [W] -> g/Wp
double material_use_per_watt(double areal_mass_g_m2, double area_m2, double peak_power_w);

// E_max [eV] * 4.45e-23 / (A_MM [u] * 1.661e-27 [kg/u]) -> Wh/kg
double battery_energy_density(double e_max_ev, double molecular_mass_u);

// P_max [eV/ps] * 1.602e-7 / mass [kg] / 1000 -> kW/kg
double battery_power_density(double p_max_ev_ps, double mass_kg);

struct NuclearTransferInput {
    double g_coupling_ev = 0.0;      // g = mu * B, or given directly
    double gamow_suppression = 1.0;  // e^{-G}
    double vol_ratio = 6.26e-12;     // vol_nuc / vol_mol
    double delta_e_ev = 23.8e6;
    double n_donors = 1.0;
    double n_acceptors = 1.0;
};

// Gamma = g^2 e^{-G} sqrt(vol_ratio) / delta_E / hbar * sqrt(N_D) sqrt(N_A)  [1/s]
double nuclear_transfer_rate(const NuclearTransferInput& input);

// (4/3) pi r^3 / (2 pi^2 R0 dR^2)
double vol_ratio(double r_nuc_m, double r0_m, double delta_r_m);

// mu * B with mu = 3.15e-8 eV/T
double magnetic_coupling(double b_field_t);

// Literal evaluation of the published worked example (g = 1e-7 eV,
// e^{-G} = 1e-33, sqrt(vol_ratio) = 1e-6, delta_E = 24 MeV, N_D = 1e12,
// N_A = 1e6) next to the 1e-34 1/s it is quoted as; the two disagree by
// roughly 2.5 orders of magnitude and both are reported.
struct NuclearRateDiscrepancy {
    NuclearTransferInput input;
    double computed_rate = 0.0;  // 1/s, literal evaluation
    double quoted_rate = 1e-34;  // 1/s, as published
    double ratio = 0.0;          // quoted / computed
};

NuclearRateDiscrepancy nuclear_rate_reference_check();

} // namespace energetics
} // namespace dickelab
