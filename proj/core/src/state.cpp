#include "dickelab/state.hpp"

#include <cmath>
#include <sstream>

namespace dickelab {

State make_state(BasisPtr basis, Vector amplitudes) {
    if (amplitudes.size() != basis->dimension()) {
        throw BasisError("amplitude list length does not equal basis dimension");
    }
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > 1e-10) {
        throw BasisError("state norm " + std::to_string(n) + " is not 1 within 1e-10");
    }
    amplitudes /= n;
    return State{std::move(basis), std::move(amplitudes)};
}

State basis_state(BasisPtr basis, const std::vector<std::int64_t>& config) {
    Vector v = Vector::Zero(basis->dimension());
    v[basis->index_of(config)] = cplx(1.0, 0.0);
    return State{std::move(basis), std::move(v)};
}

State all_ground(BasisPtr basis) {
    std::vector<std::int64_t> config(basis->n_factors(), 0);
    return basis_state(std::move(basis), config);
}

State one_photon(BasisPtr basis) {
    if (basis->n_modes() == 0) {
        throw BasisError("one_photon requires at least one mode");
    }
    if (basis->mode(0).fock_cutoff < 1) {
        throw BasisError("one_photon requires fock_cutoff >= 1 on the first mode");
    }
    std::vector<std::int64_t> config(basis->n_factors(), 0);
    config[basis->n_ensembles()] = 1;
    return basis_state(std::move(basis), config);
}

State symmetric_one_excitation(BasisPtr basis) {
    if (basis->n_ensembles() == 0) {
        throw BasisError("symmetric_one_excitation requires an ensemble");
    }
    if (basis->reduction() == Reduction::collective_spin) {
        std::vector<std::int64_t> config(basis->n_factors(), 0);
        config[0] = 1; // m = -j + 1
        return basis_state(std::move(basis), config);
    }
    const int n = basis->ensemble(0).n_tls;
    Vector v = Vector::Zero(basis->dimension());
    std::vector<std::int64_t> config(basis->n_factors(), 0);
    const double amp = 1.0 / std::sqrt(double(n));
    for (int site = 0; site < n; ++site) {
        config[0] = std::int64_t{1} << (n - 1 - site);
        v[basis->index_of(config)] = cplx(amp, 0.0);
    }
    return State{std::move(basis), std::move(v)};
}

State fully_excited(BasisPtr basis) {
    std::vector<std::int64_t> config(basis->n_factors(), 0);
    for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
        config[e] = basis->factor_dim(e) - 1; // all bits set / m = +j
    }
    return basis_state(std::move(basis), config);
}

State product_state(BasisPtr basis, const std::string& text) {
    std::vector<std::string> tokens;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) tokens.push_back(tok);
    if (tokens.size() != basis->n_factors()) {
        throw BasisError("product state '" + text + "' has " + std::to_string(tokens.size()) +
                         " tokens; basis has " + std::to_string(basis->n_factors()) + " factors");
    }

    std::vector<std::int64_t> config(basis->n_factors(), 0);
    for (std::size_t e = 0; e < basis->n_ensembles(); ++e) {
        const int n = basis->ensemble(e).n_tls;
        const std::string& t = tokens[e];
        if (basis->reduction() == Reduction::full_tensor) {
            if (static_cast<int>(t.size()) != n) {
                throw BasisError("ensemble token '" + t + "' must list " + std::to_string(n) +
                                 " sites as g/e");
            }
            std::int64_t c = 0;
            for (char ch : t) {
                c <<= 1;
                if (ch == 'e') c |= 1;
                else if (ch != 'g') throw BasisError("product tokens use only 'g' and 'e'");
            }
            config[e] = c;
        } else {
            const int k = std::stoi(t);
            if (k < 0 || k > n) {
                throw BasisError("excitation count " + t + " out of range for ensemble of " +
                                 std::to_string(n));
            }
            config[e] = k;
        }
    }
    for (std::size_t m = 0; m < basis->n_modes(); ++m) {
        const int occ = std::stoi(tokens[basis->n_ensembles() + m]);
        if (occ < 0 || occ > basis->mode(m).fock_cutoff) {
            throw BasisError("mode occupation " + std::to_string(occ) + " exceeds cutoff");
        }
        config[basis->n_ensembles() + m] = occ;
    }
    return basis_state(std::move(basis), config);
}

State named_state(BasisPtr basis, const std::string& name) {
    if (name == "all_ground") return all_ground(std::move(basis));
    if (name == "one_photon") return one_photon(std::move(basis));
    if (name == "symmetric_one_excitation") return symmetric_one_excitation(std::move(basis));
    if (name == "fully_excited") return fully_excited(std::move(basis));
    if (name.rfind("product:", 0) == 0) return product_state(std::move(basis), name.substr(8));
    throw BasisError("unknown initial state '" + name +
                     "'; expected all_ground, one_photon, symmetric_one_excitation, "
                     "fully_excited, or product:<tokens>");
}

} // namespace dickelab
