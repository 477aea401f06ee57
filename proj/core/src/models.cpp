#include "dickelab/models.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace dickelab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ModelError(msg);
}

void check_basis_layout(const ModelSpec& spec, const BasisPtr& basis) {
    // Reduction may differ from the default; everything else must match.
    const BasisSpec want = default_basis_spec(spec, basis->reduction());
    const Basis expected(want);
    if (!expected.same_layout(*basis)) {
        throw ModelError(std::string("basis does not match the ") + family_name(spec) +
                         " model layout");
    }
}

// TLS energy term c * sum_j sigma_z^j / 2 over one ensemble.
Operator tls_energy(const BasisPtr& basis, const std::string& label, double c) {
    return ensemble_sum_operator(basis, label, SiteOp::sz).scaled(0.5 * c);
}

Operator co_rotating_coupling(const BasisPtr& basis, const std::string& ens,
                              const std::string& mode, double g) {
    const Operator a = boson_operator(basis, mode, BosonOp::a);
    const Operator adag = boson_operator(basis, mode, BosonOp::a_dag);
    const Operator sp = ensemble_sum_operator(basis, ens, SiteOp::splus);
    const Operator sm = ensemble_sum_operator(basis, ens, SiteOp::sminus);
    return (sp * a + sm * adag).scaled(g);
}

Operator counter_rotating_coupling(const BasisPtr& basis, const std::string& ens,
                                   const std::string& mode, double g) {
    const Operator a = boson_operator(basis, mode, BosonOp::a);
    const Operator adag = boson_operator(basis, mode, BosonOp::a_dag);
    const Operator sx_sum = ensemble_sum_operator(basis, ens, SiteOp::sx);
    return (sx_sum * (a + adag)).scaled(g);
}

} // namespace

double DriveEnvelope::operator()(double t) const {
    const double z = (t - t0) / sigma;
    return eta0 / (sigma * std::sqrt(kTwoPi)) * std::exp(-0.5 * z * z);
}

const char* family_name(const ModelSpec& spec) {
    struct Visitor {
        const char* operator()(const RabiSpec&) const { return "rabi"; }
        const char* operator()(const JaynesCummingsSpec&) const { return "jaynes_cummings"; }
        const char* operator()(const DickeSpec&) const { return "dicke"; }
        const char* operator()(const TavisCummingsSpec&) const { return "tavis_cummings"; }
        const char* operator()(const SupertransferSpec&) const { return "supertransfer"; }
        const char* operator()(const DrivenBatterySpec&) const { return "driven_battery"; }
        const char* operator()(const TwoEnsembleCavitySpec&) const { return "two_ensemble_cavity"; }
        const char* operator()(const TwoQubitTransferSpec&) const { return "two_qubit_transfer"; }
    };
    return std::visit(Visitor{}, spec);
}

void validate_spec(const ModelSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RabiSpec> || std::is_same_v<T, JaynesCummingsSpec>) {
                require(s.fock_cutoff >= 1, "fock_cutoff must be >= 1");
            } else if constexpr (std::is_same_v<T, DickeSpec> ||
                                 std::is_same_v<T, TavisCummingsSpec>) {
                require(s.n_tls >= 1, "n_tls must be >= 1");
                require(s.fock_cutoff >= 1, "fock_cutoff must be >= 1");
            } else if constexpr (std::is_same_v<T, SupertransferSpec>) {
                require(s.n_donors >= 1, "n_donors must be >= 1");
                require(s.m_acceptors >= 1, "m_acceptors must be >= 1");
            } else if constexpr (std::is_same_v<T, DrivenBatterySpec>) {
                require(s.n_tls >= 1, "n_tls must be >= 1");
                require(s.fock_cutoff >= 1, "fock_cutoff must be >= 1");
                require(s.sigma_pulse > 0.0, "sigma_pulse must be > 0");
            } else if constexpr (std::is_same_v<T, TwoEnsembleCavitySpec>) {
                require(s.n1 >= 1.0, "n1 must be >= 1");
                require(s.n2 >= 1.0, "n2 must be >= 1");
                require(s.fock_cutoff >= 1, "fock_cutoff must be >= 1");
            } else if constexpr (std::is_same_v<T, TwoQubitTransferSpec>) {
                // nothing beyond a real coupling
            }
        },
        spec);
}

BasisSpec default_basis_spec(const ModelSpec& spec, Reduction reduction) {
    struct Visitor {
        Reduction reduction;
        BasisSpec operator()(const RabiSpec& s) const {
            return {{{"tls", 1}}, {{"cavity", s.fock_cutoff}}, reduction};
        }
        BasisSpec operator()(const JaynesCummingsSpec& s) const {
            return {{{"tls", 1}}, {{"cavity", s.fock_cutoff}}, reduction};
        }
        BasisSpec operator()(const DickeSpec& s) const {
            return {{{"tls", s.n_tls}}, {{"cavity", s.fock_cutoff}}, reduction};
        }
        BasisSpec operator()(const TavisCummingsSpec& s) const {
            return {{{"tls", s.n_tls}}, {{"cavity", s.fock_cutoff}}, reduction};
        }
        BasisSpec operator()(const SupertransferSpec& s) const {
            return {{{"donors", s.n_donors}, {"acceptors", s.m_acceptors}}, {}, reduction};
        }
        BasisSpec operator()(const DrivenBatterySpec& s) const {
            return {{{"tls", s.n_tls}}, {{"cavity", s.fock_cutoff}}, reduction};
        }
        BasisSpec operator()(const TwoEnsembleCavitySpec& s) const {
            if (reduction == Reduction::collective_spin) {
                throw ModelError("two_ensemble_cavity is built in the full_tensor basis; its "
                                 "collective enhancement enters through the sqrt(N) couplings");
            }
            return {{{"ens1", 1}, {"ens2", 1}},
                    {{"cav1", s.fock_cutoff}, {"cav2", s.fock_cutoff}},
                    reduction};
        }
        BasisSpec operator()(const TwoQubitTransferSpec&) const {
            if (reduction == Reduction::collective_spin) {
                throw ModelError("two_qubit_transfer addresses individual sites and is not "
                                 "permutation-symmetric; collective_spin is invalid");
            }
            return {{{"qubits", 2}}, {}, reduction};
        }
    };
    validate_spec(spec);
    return std::visit(Visitor{reduction}, spec);
}

Hamiltonian build_hamiltonian(const ModelSpec& spec, const BasisPtr& basis) {
    validate_spec(spec);
    check_basis_layout(spec, basis);

    struct Visitor {
        const BasisPtr& b;

        Hamiltonian operator()(const RabiSpec& s) const {
            Operator h = tls_energy(b, "tls", s.omega0) +
                         boson_operator(b, "cavity", BosonOp::n).scaled(s.omega) +
                         counter_rotating_coupling(b, "tls", "cavity", s.g);
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const JaynesCummingsSpec& s) const {
            Operator h = tls_energy(b, "tls", s.omega0) +
                         boson_operator(b, "cavity", BosonOp::n).scaled(s.omega) +
                         co_rotating_coupling(b, "tls", "cavity", s.g);
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const DickeSpec& s) const {
            Operator h = tls_energy(b, "tls", s.omega0) +
                         boson_operator(b, "cavity", BosonOp::n).scaled(s.omega) +
                         counter_rotating_coupling(b, "tls", "cavity", s.g);
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const TavisCummingsSpec& s) const {
            Operator h = tls_energy(b, "tls", s.omega0) +
                         boson_operator(b, "cavity", BosonOp::n).scaled(s.omega) +
                         co_rotating_coupling(b, "tls", "cavity", s.g);
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const SupertransferSpec& s) const {
            const Operator sp_d = ensemble_sum_operator(b, "donors", SiteOp::splus);
            const Operator sm_d = ensemble_sum_operator(b, "donors", SiteOp::sminus);
            const Operator sp_a = ensemble_sum_operator(b, "acceptors", SiteOp::splus);
            const Operator sm_a = ensemble_sum_operator(b, "acceptors", SiteOp::sminus);
            Operator h = tls_energy(b, "donors", -s.omega_a) +
                         tls_energy(b, "acceptors", -s.omega_b) +
                         (sp_d * sm_a + sm_d * sp_a).scaled(s.gamma);
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const DrivenBatterySpec& s) const {
            const double detuning = s.omega - s.omega_l;
            Operator h = tls_energy(b, "tls", detuning) +
                         boson_operator(b, "cavity", BosonOp::n).scaled(detuning) +
                         co_rotating_coupling(b, "tls", "cavity", s.g);
            // i (a^dag - a) is Hermitian; eta(t) scales it
            Operator drive = (boson_operator(b, "cavity", BosonOp::a_dag) -
                              boson_operator(b, "cavity", BosonOp::a))
                                 .scaled(cplx(0.0, 1.0));
            return {std::move(h), DriveEnvelope{s.eta0, s.sigma_pulse, s.t0}, std::move(drive)};
        }
        Hamiltonian operator()(const TwoEnsembleCavitySpec& s) const {
            const Operator a1 = boson_operator(b, "cav1", BosonOp::a);
            const Operator a2 = boson_operator(b, "cav2", BosonOp::a);
            const Operator n_e1 = ensemble_excitation_number(b, "ens1");
            const Operator n_e2 = ensemble_excitation_number(b, "ens2");
            const Operator sp1 = ensemble_sum_operator(b, "ens1", SiteOp::splus);
            const Operator sp2 = ensemble_sum_operator(b, "ens2", SiteOp::splus);
            Operator h = boson_operator(b, "cav1", BosonOp::n).scaled(s.delta1) +
                         boson_operator(b, "cav2", BosonOp::n).scaled(s.delta2) +
                         (a1.adjoint() * a2 + a2.adjoint() * a1).scaled(s.j_cavity) +
                         (n_e1 + n_e2).scaled(-s.delta) +
                         (sp1 * a1 + (sp1 * a1).adjoint()).scaled(s.g1 * std::sqrt(s.n1)) +
                         (sp2 * a2 + (sp2 * a2).adjoint()).scaled(s.g2 * std::sqrt(s.n2));
            return {std::move(h), std::nullopt, std::nullopt};
        }
        Hamiltonian operator()(const TwoQubitTransferSpec& s) const {
            const Operator sp1 = single_site_operator(b, "qubits", 0, SiteOp::splus);
            const Operator sm1 = single_site_operator(b, "qubits", 0, SiteOp::sminus);
            const Operator sp2 = single_site_operator(b, "qubits", 1, SiteOp::splus);
            const Operator sm2 = single_site_operator(b, "qubits", 1, SiteOp::sminus);
            Operator h = (sp1 * sm2 + sm1 * sp2).scaled(s.gamma);
            return {std::move(h), std::nullopt, std::nullopt};
        }
    };
    return std::visit(Visitor{basis}, spec);
}

Operator excitation_number_operator(const BasisPtr& basis) {
    Operator n = Operator::zero(basis);
    for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
        n = n + ensemble_excitation_number(basis, basis->ensemble(e).label);
    }
    for (std::size_t m = 0; m < basis->n_modes(); ++m) {
        n = n + boson_operator(basis, basis->mode(m).label, BosonOp::n);
    }
    return n;
}

std::optional<Operator> conserved_excitation_operator(const ModelSpec& spec, const BasisPtr& basis) {
    struct Visitor {
        bool operator()(const RabiSpec&) const { return false; }
        bool operator()(const DickeSpec&) const { return false; }
        bool operator()(const TwoEnsembleCavitySpec&) const { return false; }
        bool operator()(const JaynesCummingsSpec&) const { return true; }
        bool operator()(const TavisCummingsSpec&) const { return true; }
        bool operator()(const SupertransferSpec&) const { return true; }
        bool operator()(const DrivenBatterySpec&) const { return true; } // static part only
        bool operator()(const TwoQubitTransferSpec&) const { return true; }
    };
    if (!std::visit(Visitor{}, spec)) return std::nullopt;
    return excitation_number_operator(basis);
}

double two_ensemble_rabi_splitting(const TwoEnsembleCavitySpec& spec) {
    auto basis = build_basis(default_basis_spec(spec, Reduction::full_tensor));
    const Hamiltonian h = build_hamiltonian(ModelSpec{spec}, basis);
    const Operator n_exc = excitation_number_operator(basis);

    // restrict to the single-excitation block
    std::vector<std::int64_t> block;
    const DenseMatrix n_dense = n_exc.to_dense();
    for (std::int64_t i = 0; i < basis->dimension(); ++i) {
        if (std::abs(n_dense(i, i).real() - 1.0) < 1e-12) block.push_back(i);
    }
    const DenseMatrix h_dense = h.static_part.to_dense();
    DenseMatrix sub(block.size(), block.size());
    for (std::size_t r = 0; r < block.size(); ++r) {
        for (std::size_t c = 0; c < block.size(); ++c) {
            sub(r, c) = h_dense(block[r], block[c]);
        }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sub);
    const Eigen::VectorXd evals = solver.eigenvalues();
    const DenseMatrix evecs = solver.eigenvectors();

    // weight of each eigenvector on the two ensemble excited states
    const Operator n_e1 = ensemble_excitation_number(basis, "ens1");
    const Operator n_e2 = ensemble_excitation_number(basis, "ens2");
    const DenseMatrix w_dense = (n_e1 + n_e2).to_dense();
    std::vector<std::pair<double, double>> weighted; // (weight, eigenvalue)
    for (std::size_t c = 0; c < block.size(); ++c) {
        double w = 0.0;
        for (std::size_t r = 0; r < block.size(); ++r) {
            w += std::norm(evecs(r, c)) * w_dense(block[r], block[r]).real();
        }
        weighted.emplace_back(w, evals[c]);
    }
    std::sort(weighted.begin(), weighted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (weighted.size() < 2) throw ModelError("single-excitation block too small");
    return std::abs(weighted[0].second - weighted[1].second);
}

} // namespace dickelab
