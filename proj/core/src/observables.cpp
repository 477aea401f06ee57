#include <cmath>

#include "propagate_util.hpp"

namespace dickelab {

namespace {

double tls_frequency_scale(const ModelSpec& model) {
    struct Visitor {
        double operator()(const RabiSpec& s) const { return s.omega0; }
        double operator()(const JaynesCummingsSpec& s) const { return s.omega0; }
        double operator()(const DickeSpec& s) const { return s.omega0; }
        double operator()(const TavisCummingsSpec& s) const { return s.omega0; }
        double operator()(const DrivenBatterySpec& s) const { return s.omega0; }
        double operator()(const SupertransferSpec& s) const { return s.omega_a; }
        double operator()(const TwoEnsembleCavitySpec&) const {
            throw ModelError("stored_energy is undefined for two_ensemble_cavity");
        }
        double operator()(const TwoQubitTransferSpec&) const {
            throw ModelError("stored_energy is undefined for two_qubit_transfer");
        }
    };
    return std::visit(Visitor{}, model);
}

Operator tls_excitation_count(const BasisPtr& basis) {
    Operator n = Operator::zero(basis);
    for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
        n = n + ensemble_excitation_number(basis, basis->ensemble(e).label);
    }
    return n;
}

} // namespace

Operator named_observable(const std::string& name, const ModelSpec& model, const BasisPtr& basis) {
    if (name == "P_excited") return tls_excitation_count(basis);
    if (name == "photon_number") {
        Operator n = Operator::zero(basis);
        for (std::size_t m = 0; m < basis->n_modes(); ++m) {
            n = n + boson_operator(basis, basis->mode(m).label, BosonOp::n);
        }
        return n;
    }
    if (name == "Jz") {
        // sum over ensembles of sigma_z/2; eigenvalues run -N/2..N/2
        Operator jz = Operator::zero(basis);
        for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
            jz = jz + ensemble_sum_operator(basis, basis->ensemble(e).label, SiteOp::sz).scaled(0.5);
        }
        return jz;
    }
    if (name == "N_exc") return excitation_number_operator(basis);
    if (name == "stored_energy") {
        // omega0 * (<Jz> + N/2) = omega0 * excitation count
        return tls_excitation_count(basis).scaled(tls_frequency_scale(model));
    }
    if (name == "donor_population") {
        return ensemble_excitation_number(basis, basis->ensemble(0).label);
    }
    if (name == "acceptor_population") {
        if (basis->n_ensembles() < 2) {
            throw ModelError("acceptor_population needs a second ensemble");
        }
        return ensemble_excitation_number(basis, basis->ensemble(1).label);
    }
    throw ModelError("unknown observable '" + name +
                     "'; expected P_excited, photon_number, Jz, N_exc, stored_energy, "
                     "donor_population, or acceptor_population");
}

double measure(const Operator& observable, const State& state) {
    if (!observable.hermitian()) {
        throw ModelError("observable is not Hermitian");
    }
    const cplx v = state.amplitudes.dot(observable.apply(state.amplitudes));
    if (std::abs(v.imag()) >= 1e-10) {
        throw NumericalError("expectation has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

double measure(const Operator& observable, const DenseMatrix& rho) {
    if (!observable.hermitian()) {
        throw ModelError("observable is not Hermitian");
    }
    const cplx v = observable.apply_right(rho).trace();
    if (std::abs(v.imag()) >= 1e-10) {
        throw NumericalError("expectation has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

const std::vector<double>& Trajectory::column(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return records[i];
    }
    throw ModelError("trajectory has no observable '" + label + "'");
}

namespace detail {

std::vector<double> output_grid(double t_max, double dt_output) {
    if (t_max <= 0.0) throw ModelError("t_max must be > 0");
    if (dt_output <= 0.0) throw ModelError("dt_output must be > 0");
    std::vector<double> times;
    const auto k_last = static_cast<std::int64_t>(std::floor(t_max / dt_output + 1e-9));
    times.reserve(static_cast<std::size_t>(k_last) + 2);
    for (std::int64_t k = 0; k <= k_last; ++k) times.push_back(double(k) * dt_output);
    if (times.back() < t_max - 1e-9 * t_max) times.push_back(t_max);
    return times;
}

LeakMonitor::LeakMonitor(const BasisPtr& basis) {
    for (std::size_t m = 0; m < basis->n_modes(); ++m) {
        mode_labels.push_back(basis->mode(m).label);
        projectors.push_back(top_level_projector(basis, basis->mode(m).label));
    }
}

void LeakMonitor::update(std::size_t m, double occupation) {
    max_leak = std::max(max_leak, occupation);
    if (occupation > kLeakThreshold) {
        throw TruncationError(mode_labels[m], occupation, kLeakThreshold);
    }
}

void LeakMonitor::check(const Vector& psi) {
    for (std::size_t m = 0; m < projectors.size(); ++m) {
        update(m, projectors[m].apply(psi).squaredNorm());
    }
}

void LeakMonitor::check(const DenseMatrix& rho) {
    for (std::size_t m = 0; m < projectors.size(); ++m) {
        update(m, projectors[m].apply_right(rho).trace().real());
    }
}

std::vector<Operator> collapse_operators(const std::vector<NoiseTerm>& noise, const BasisPtr& basis) {
    std::vector<Operator> ops;
    for (const auto& term : noise) {
        if (term.rate < 0.0) throw ModelError("noise rate must be >= 0");
        const double amp = std::sqrt(term.rate);
        for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
            const auto& ens = basis->ensemble(e);
            switch (term.kind) {
                case NoiseKind::collective_decay:
                    ops.push_back(
                        ensemble_sum_operator(basis, ens.label, SiteOp::sminus).scaled(amp));
                    break;
                case NoiseKind::individual_decay:
                case NoiseKind::individual_dephasing: {
                    const SiteOp site_kind = (term.kind == NoiseKind::individual_decay)
                                                 ? SiteOp::sminus
                                                 : SiteOp::sz;
                    if (basis->reduction() == Reduction::collective_spin) {
                        if (ens.n_tls > 1) {
                            throw ModelError(
                                "individual noise on ensemble '" + ens.label +
                                "' breaks permutation symmetry; use the full_tensor basis "
                                "or collective_decay");
                        }
                        ops.push_back(
                            ensemble_sum_operator(basis, ens.label, site_kind).scaled(amp));
                    } else {
                        for (int s = 0; s < ens.n_tls; ++s) {
                            ops.push_back(
                                single_site_operator(basis, ens.label, s, site_kind).scaled(amp));
                        }
                    }
                    break;
                }
            }
        }
    }
    return ops;
}

PreparedRun prepare_run(const EvolutionRequest& req) {
    auto basis = build_basis(default_basis_spec(req.model, req.reduction));
    Hamiltonian h = build_hamiltonian(req.model, basis);
    State initial = named_state(basis, req.initial_state);

    PreparedRun run{basis, std::move(h), std::move(initial), {}, {}};
    for (const auto& name : req.observables) {
        run.labels.push_back(name);
        run.observables.push_back(named_observable(name, req.model, basis));
    }
    return run;
}

} // namespace detail

} // namespace dickelab
