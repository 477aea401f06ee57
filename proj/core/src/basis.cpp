#include "dickelab/basis.hpp"

#include <limits>

namespace dickelab {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::int64_t cap) {
    if (a > cap / b) {
        throw CapacityError("basis dimension exceeds cap of " + std::to_string(cap));
    }
    return a * b;
}

} // namespace

Basis::Basis(BasisSpec spec, std::int64_t dimension_cap) : spec_(std::move(spec)) {
    if (dimension_cap <= 0) {
        throw CapacityError("dimension cap must be positive");
    }
    if (spec_.ensembles.empty() && spec_.modes.empty()) {
        throw BasisError("basis needs at least one ensemble or mode");
    }
    for (const auto& e : spec_.ensembles) {
        if (e.n_tls < 1) {
            throw BasisError("ensemble '" + e.label + "': n_tls must be >= 1");
        }
        total_tls_ += e.n_tls;
        if (spec_.reduction == Reduction::full_tensor) {
            if (e.n_tls >= 63) {
                throw CapacityError("ensemble '" + e.label + "': 2^" + std::to_string(e.n_tls) +
                                    " overflows the index type");
            }
            factor_dims_.push_back(std::int64_t{1} << e.n_tls);
        } else {
            factor_dims_.push_back(std::int64_t{e.n_tls} + 1);
        }
    }
    for (const auto& m : spec_.modes) {
        if (m.fock_cutoff < 0) {
            throw BasisError("mode '" + m.label + "': fock_cutoff must be >= 0");
        }
        factor_dims_.push_back(std::int64_t{m.fock_cutoff} + 1);
    }

    dimension_ = 1;
    for (std::int64_t d : factor_dims_) {
        dimension_ = checked_mul(dimension_, d, dimension_cap);
    }

    factor_strides_.assign(factor_dims_.size(), 1);
    for (std::size_t k = factor_dims_.size(); k-- > 1;) {
        factor_strides_[k - 1] = factor_strides_[k] * factor_dims_[k];
    }

    // labels must be unique across ensembles and modes
    for (std::size_t i = 0; i < spec_.ensembles.size(); ++i) {
        for (std::size_t j = i + 1; j < spec_.ensembles.size(); ++j) {
            if (spec_.ensembles[i].label == spec_.ensembles[j].label) {
                throw BasisError("duplicate ensemble label '" + spec_.ensembles[i].label + "'");
            }
        }
    }
    for (std::size_t i = 0; i < spec_.modes.size(); ++i) {
        for (std::size_t j = i + 1; j < spec_.modes.size(); ++j) {
            if (spec_.modes[i].label == spec_.modes[j].label) {
                throw BasisError("duplicate mode label '" + spec_.modes[i].label + "'");
            }
        }
        for (const auto& e : spec_.ensembles) {
            if (e.label == spec_.modes[i].label) {
                throw BasisError("label '" + e.label + "' used for both an ensemble and a mode");
            }
        }
    }
}

std::size_t Basis::ensemble_index(const std::string& label) const {
    for (std::size_t i = 0; i < spec_.ensembles.size(); ++i) {
        if (spec_.ensembles[i].label == label) return i;
    }
    throw BasisError("unknown ensemble label '" + label + "'");
}

std::size_t Basis::mode_index(const std::string& label) const {
    for (std::size_t i = 0; i < spec_.modes.size(); ++i) {
        if (spec_.modes[i].label == label) return i;
    }
    throw BasisError("unknown mode label '" + label + "'");
}

std::int64_t Basis::index_of(const std::vector<std::int64_t>& config) const {
    if (config.size() != factor_dims_.size()) {
        throw BasisError("configuration length does not match factor count");
    }
    std::int64_t idx = 0;
    for (std::size_t k = 0; k < config.size(); ++k) {
        if (config[k] < 0 || config[k] >= factor_dims_[k]) {
            throw BasisError("factor " + std::to_string(k) + " sub-index out of range");
        }
        idx += config[k] * factor_strides_[k];
    }
    return idx;
}

std::vector<std::int64_t> Basis::config_of(std::int64_t index) const {
    if (index < 0 || index >= dimension_) {
        throw BasisError("basis index out of range");
    }
    std::vector<std::int64_t> config(factor_dims_.size());
    for (std::size_t k = 0; k < factor_dims_.size(); ++k) {
        config[k] = (index / factor_strides_[k]) % factor_dims_[k];
    }
    return config;
}

bool Basis::same_layout(const Basis& other) const {
    if (spec_.reduction != other.spec_.reduction) return false;
    if (spec_.ensembles.size() != other.spec_.ensembles.size()) return false;
    if (spec_.modes.size() != other.spec_.modes.size()) return false;
    for (std::size_t i = 0; i < spec_.ensembles.size(); ++i) {
        if (spec_.ensembles[i].label != other.spec_.ensembles[i].label) return false;
        if (spec_.ensembles[i].n_tls != other.spec_.ensembles[i].n_tls) return false;
    }
    for (std::size_t i = 0; i < spec_.modes.size(); ++i) {
        if (spec_.modes[i].label != other.spec_.modes[i].label) return false;
        if (spec_.modes[i].fock_cutoff != other.spec_.modes[i].fock_cutoff) return false;
    }
    return true;
}

BasisPtr build_basis(const BasisSpec& spec, std::int64_t dimension_cap) {
    return std::make_shared<const Basis>(spec, dimension_cap);
}

} // namespace dickelab
