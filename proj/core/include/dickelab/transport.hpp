// transport.hpp — excitation transport on site networks with an absorbing sink
//
// Works in the single-excitation sector plus a vacuum level: the sink drains
// a designated site at rate kappa_sink and the drained population collects
// in the vacuum, so efficiency(t) is monotone non-decreasing and needs no
// quadrature. Per-site pure dephasing models environmental noise.

#pragma once

#include <vector>

#include "dickelab/models.hpp"

namespace dickelab {

struct SiteCoupling {
    int from = 0;
    int to = 0;
    double amplitude = 0.0;
};

struct TransportNetwork {
    std::vector<double> site_energies;
    std::vector<SiteCoupling> couplings;
    int initial_site = 0;
    int sink_site = -1; // required
    double kappa_sink = 0.0;
    double dephasing_rate = 0.0;
    double t_max = 1.0;
    double dt_output = 0.1;
};

struct TransportResult {
    std::vector<double> times;
    std::vector<double> efficiency;       // cumulative sink population
    std::vector<double> site_populations; // at t_max
    double final_efficiency = 0.0;
};

// Donor sites 0..N-1 at omega_a, acceptor sites N..N+M-1 at omega_b,
// amplitude gamma between every donor-acceptor pair. The sink must drain
// an acceptor site.
TransportNetwork supertransfer_network(const SupertransferSpec& spec, int sink_acceptor_index,
                                       double kappa_sink, double dephasing_rate, double t_max,
                                       double dt_output);

// 5-site nearest-neighbour chain with detuned on-site energies; excitation
// starts on site 0, the sink drains site 4. Exhibits the environment-assisted
// transport maximum at intermediate dephasing.
TransportNetwork detuned_chain_network(double dephasing_rate);

TransportResult transfer_efficiency(const TransportNetwork& network);

} // namespace dickelab
