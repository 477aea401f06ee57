#include "dickelab/transport.hpp"

#include <cmath>

#include "dickelab/analysis.hpp"

namespace dickelab {

namespace {

void validate(const TransportNetwork& net) {
    const int n = static_cast<int>(net.site_energies.size());
    if (n < 1) throw ModelError("transport network needs at least one site");
    if (net.sink_site < 0 || net.sink_site >= n) {
        throw ModelError("transport network is missing a valid sink designation");
    }
    if (net.initial_site < 0 || net.initial_site >= n) {
        throw ModelError("initial site out of range");
    }
    if (net.kappa_sink < 0.0 || net.dephasing_rate < 0.0) {
        throw ModelError("transport rates must be >= 0");
    }
    for (const auto& c : net.couplings) {
        if (c.from < 0 || c.from >= n || c.to < 0 || c.to >= n || c.from == c.to) {
            throw ModelError("coupling references an invalid site pair");
        }
    }
    if (net.t_max <= 0.0 || net.dt_output <= 0.0) {
        throw ModelError("t_max and dt_output must be > 0");
    }
}

} // namespace

TransportNetwork supertransfer_network(const SupertransferSpec& spec, int sink_acceptor_index,
                                       double kappa_sink, double dephasing_rate, double t_max,
                                       double dt_output) {
    validate_spec(ModelSpec{spec});
    if (sink_acceptor_index < 0 || sink_acceptor_index >= spec.m_acceptors) {
        throw ModelError("sink must drain one of the acceptor sites");
    }
    TransportNetwork net;
    for (int d = 0; d < spec.n_donors; ++d) net.site_energies.push_back(spec.omega_a);
    for (int a = 0; a < spec.m_acceptors; ++a) net.site_energies.push_back(spec.omega_b);
    for (int d = 0; d < spec.n_donors; ++d) {
        for (int a = 0; a < spec.m_acceptors; ++a) {
            net.couplings.push_back({d, spec.n_donors + a, spec.gamma});
        }
    }
    net.initial_site = 0;
    net.sink_site = spec.n_donors + sink_acceptor_index;
    net.kappa_sink = kappa_sink;
    net.dephasing_rate = dephasing_rate;
    net.t_max = t_max;
    net.dt_output = dt_output;
    return net;
}

TransportNetwork detuned_chain_network(double dephasing_rate) {
    TransportNetwork net;
    net.site_energies = {0.0, 4.0, -4.0, 4.0, 0.0};
    for (int i = 0; i < 4; ++i) net.couplings.push_back({i, i + 1, 1.0});
    net.initial_site = 0;
    net.sink_site = 4;
    net.kappa_sink = 1.0;
    net.dephasing_rate = dephasing_rate;
    net.t_max = 40.0;
    net.dt_output = 0.2;
    return net;
}

TransportResult transfer_efficiency(const TransportNetwork& net) {
    validate(net);
    const int n = static_cast<int>(net.site_energies.size());
    const int dim = n + 1; // index 0 is the drained vacuum, sites are 1..n

    DenseMatrix h = DenseMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) h(i + 1, i + 1) = net.site_energies[i];
    for (const auto& c : net.couplings) {
        h(c.from + 1, c.to + 1) += c.amplitude;
        h(c.to + 1, c.from + 1) += c.amplitude;
    }

    std::vector<DenseMatrix> collapse;
    {
        DenseMatrix sink = DenseMatrix::Zero(dim, dim);
        sink(0, net.sink_site + 1) = std::sqrt(net.kappa_sink);
        collapse.push_back(sink);
    }
    if (net.dephasing_rate > 0.0) {
        for (int i = 0; i < n; ++i) {
            DenseMatrix deph = DenseMatrix::Zero(dim, dim);
            deph(i + 1, i + 1) = std::sqrt(net.dephasing_rate);
            collapse.push_back(deph);
        }
    }
    std::vector<DenseMatrix> ldagl;
    for (const auto& l : collapse) ldagl.push_back(l.adjoint() * l);

    auto rhs = [&](const DenseMatrix& rho) -> DenseMatrix {
        DenseMatrix out = cplx(0.0, -1.0) * (h * rho - rho * h);
        for (std::size_t k = 0; k < collapse.size(); ++k) {
            out += collapse[k] * rho * collapse[k].adjoint();
            out -= 0.5 * (ldagl[k] * rho + rho * ldagl[k]);
        }
        return out;
    };

    double scale = 0.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, h.row(i).cwiseAbs().sum());
    scale += net.kappa_sink + net.dephasing_rate;
    const double h_target = 0.005 / std::max(scale, 1e-12);

    DenseMatrix rho = DenseMatrix::Zero(dim, dim);
    rho(net.initial_site + 1, net.initial_site + 1) = 1.0;

    TransportResult result;
    const auto record = [&](double t) {
        result.times.push_back(t);
        result.efficiency.push_back(rho(0, 0).real());
    };

    record(0.0);
    const auto n_out = static_cast<std::int64_t>(std::ceil(net.t_max / net.dt_output - 1e-9));
    double t = 0.0;
    for (std::int64_t i = 1; i <= n_out; ++i) {
        const double t_next = std::min(double(i) * net.dt_output, net.t_max);
        const double span = t_next - t;
        const int n_sub = std::max(1, static_cast<int>(std::ceil(span / h_target)));
        const double step = span / n_sub;
        for (int s = 0; s < n_sub; ++s) {
            const DenseMatrix k1 = rhs(rho);
            const DenseMatrix k2 = rhs(rho + 0.5 * step * k1);
            const DenseMatrix k3 = rhs(rho + 0.5 * step * k2);
            const DenseMatrix k4 = rhs(rho + step * k3);
            rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t = t_next;
        record(t);
    }

    result.site_populations.resize(n);
    for (int i = 0; i < n; ++i) result.site_populations[i] = rho(i + 1, i + 1).real();
    result.final_efficiency = result.efficiency.back();
    return result;
}

} // namespace dickelab
