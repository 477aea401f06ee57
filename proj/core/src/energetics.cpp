#include "dickelab/energetics.hpp"

#include <cmath>

namespace dickelab {
namespace energetics {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw ModelError(std::string(name) + " must be positive");
    }
}

} // namespace

double molar_mass_from_composition(const std::vector<MassFraction>& composition) {
    if (composition.empty()) {
        throw ModelError("mixture lacks a molar-mass basis; supply a composition list");
    }
    double total_fraction = 0.0;
    double mass = 0.0;
    for (const auto& c : composition) {
        require_positive(c.fraction, "composition fraction");
        require_positive(c.molar_mass, "composition molar_mass");
        total_fraction += c.fraction;
        mass += c.fraction * c.molar_mass;
    }
    if (std::abs(total_fraction - 1.0) > 1e-6) {
        throw ModelError("composition fractions must total 1");
    }
    return mass;
}

double ev_per_atom_to_kwh_per_kg(double ev_per_atom, double molar_mass_g_mol) {
    require_positive(ev_per_atom, "energy_per_atom");
    require_positive(molar_mass_g_mol, "molar_mass");
    const double joule_per_mol = ev_per_atom * constants::joule_per_ev * constants::avogadro;
    const double joule_per_kg = joule_per_mol / (molar_mass_g_mol / 1000.0);
    return joule_per_kg / constants::joule_per_kwh;
}

double kwh_per_kg_to_ev_per_atom(double kwh_per_kg, double molar_mass_g_mol) {
    require_positive(kwh_per_kg, "energy_density");
    require_positive(molar_mass_g_mol, "molar_mass");
    const double joule_per_kg = kwh_per_kg * constants::joule_per_kwh;
    const double joule_per_mol = joule_per_kg * (molar_mass_g_mol / 1000.0);
    return joule_per_mol / (constants::joule_per_ev * constants::avogadro);
}

double material_use_per_area(double thickness_m, double density_kg_m3) {
    if (thickness_m < 0.0 || density_kg_m3 < 0.0) {
        throw ModelError("thickness and density must be >= 0");
    }
    return thickness_m * density_kg_m3 * 1000.0;
}

double material_use_per_watt(double areal_mass_g_m2, double area_m2, double peak_power_w) {
    require_positive(peak_power_w, "peak_power");
    if (areal_mass_g_m2 < 0.0 || area_m2 < 0.0) {
        throw ModelError("areal mass and area must be >= 0");
    }
    return areal_mass_g_m2 * area_m2 / peak_power_w;
}

double battery_energy_density(double e_max_ev, double molecular_mass_u) {
    require_positive(molecular_mass_u, "molecular_mass");
    if (e_max_ev < 0.0) throw ModelError("e_max must be >= 0");
    return e_max_ev * constants::wh_per_ev / (molecular_mass_u * constants::kg_per_u);
}

double battery_power_density(double p_max_ev_ps, double mass_kg) {
    require_positive(mass_kg, "mass");
    if (p_max_ev_ps < 0.0) throw ModelError("p_max must be >= 0");
    return p_max_ev_ps * constants::watt_per_ev_ps / mass_kg / 1000.0;
}

double nuclear_transfer_rate(const NuclearTransferInput& input) {
    require_positive(input.g_coupling_ev, "g_coupling");
    require_positive(input.gamow_suppression, "gamow_suppression");
    require_positive(input.vol_ratio, "vol_ratio");
    require_positive(input.delta_e_ev, "delta_e");
    require_positive(input.n_donors, "n_donors");
    require_positive(input.n_acceptors, "n_acceptors");
    if (input.vol_ratio > 1.0) throw ModelError("vol_ratio must be <= 1");

    const double matrix_element = input.g_coupling_ev * input.gamow_suppression *
                                  std::sqrt(input.vol_ratio) * input.g_coupling_ev /
                                  input.delta_e_ev;
    return matrix_element / constants::hbar_ev_s * std::sqrt(input.n_donors) *
           std::sqrt(input.n_acceptors);
}

double vol_ratio(double r_nuc_m, double r0_m, double delta_r_m) {
    require_positive(r0_m, "R0");
    require_positive(delta_r_m, "delta_R");
    if (r_nuc_m < 0.0) throw ModelError("r_nuc must be >= 0");
    const double numerator = (4.0 / 3.0) * kPi * r_nuc_m * r_nuc_m * r_nuc_m;
    const double denominator = 2.0 * kPi * kPi * r0_m * delta_r_m * delta_r_m;
    return numerator / denominator;
}

double magnetic_coupling(double b_field_t) {
    if (b_field_t < 0.0) throw ModelError("b_field must be >= 0");
    return constants::nuclear_magneton_ev_per_t * b_field_t;
}

NuclearRateDiscrepancy nuclear_rate_reference_check() {
    NuclearRateDiscrepancy report;
    report.input.g_coupling_ev = 1e-7;
    report.input.gamow_suppression = 1e-33;
    report.input.vol_ratio = 1e-12; // quoted with sqrt(vol_ratio) rounded to 1e-6
    report.input.delta_e_ev = 24e6;
    report.input.n_donors = 1e12;
    report.input.n_acceptors = 1e6;
    report.computed_rate = nuclear_transfer_rate(report.input);
    report.ratio = report.quoted_rate / report.computed_rate;
    return report;
}

} // namespace energetics
} // namespace dickelab
