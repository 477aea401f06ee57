// state.hpp — normalized state vectors over a Basis and initial-state factories

#pragma once

#include <string>

#include "dickelab/operators.hpp"

namespace dickelab {

struct State {
    BasisPtr basis;
    Vector amplitudes;

    double norm() const { return amplitudes.norm(); }
};

// Throws BasisError unless the amplitudes have basis dimension and unit norm
// (within 1e-10); normalizes the residual.
State make_state(BasisPtr basis, Vector amplitudes);

// Single basis configuration with amplitude 1.
State basis_state(BasisPtr basis, const std::vector<std::int64_t>& config);

State all_ground(BasisPtr basis);
// All TLS ground, one quantum in the first declared mode.
State one_photon(BasisPtr basis);
// W state (or Dicke m = -j+1) on the first declared ensemble, modes in vacuum.
State symmetric_one_excitation(BasisPtr basis);
State fully_excited(BasisPtr basis);

// Product-state string: one token per factor, separated by ';'.
//   full_tensor ensemble  -> letters over {g,e}, one per site ("egg")
//   collective ensemble   -> integer excitation count ("2")
//   mode                  -> integer occupation ("0")
// Example (1 TLS + 1 mode): "e;0".
State product_state(BasisPtr basis, const std::string& text);

// One of the named constructors above, or "product:<text>".
State named_state(BasisPtr basis, const std::string& name);

} // namespace dickelab
