// basis.hpp — composite Hilbert-space bases for TLS ensembles and boson modes
//
// Index-order convention (fixed project-wide):
//   factors run [ensembles in declaration order] then [modes in declaration
//   order], with the first factor most significant (row-major mixed radix).
//   Within a full_tensor ensemble the 2^n spin configurations are ordered
//   lexicographically with site 0 the most significant digit and local state
//   0 = ground, 1 = excited.  Within a collective_spin ensemble the N+1
//   Dicke states |j = N/2, m> run m = -j..+j (index k = number of
//   excitations).  Within a mode, occupation runs 0..fock_cutoff.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dickelab/errors.hpp"

namespace dickelab {

enum class Reduction { full_tensor, collective_spin };

struct EnsembleSpec {
    std::string label;
    int n_tls = 1;
};

struct ModeSpec {
    std::string label;
    int fock_cutoff = 1; // highest retained occupation
};

struct BasisSpec {
    std::vector<EnsembleSpec> ensembles;
    std::vector<ModeSpec> modes;
    Reduction reduction = Reduction::full_tensor;
};

inline constexpr std::int64_t kDefaultDimensionCap = std::int64_t{1} << 24;

// Validated basis with the enumerated index map. Immutable after
// construction; share via shared_ptr for concurrent reads.
class Basis {
public:
    explicit Basis(BasisSpec spec, std::int64_t dimension_cap = kDefaultDimensionCap);

    const BasisSpec& spec() const { return spec_; }
    Reduction reduction() const { return spec_.reduction; }
    std::int64_t dimension() const { return dimension_; }

    std::size_t n_factors() const { return factor_dims_.size(); }
    std::size_t n_ensembles() const { return spec_.ensembles.size(); }
    std::size_t n_modes() const { return spec_.modes.size(); }

    // Factor k is ensemble k for k < n_ensembles, else mode k - n_ensembles.
    std::int64_t factor_dim(std::size_t k) const { return factor_dims_[k]; }
    // Product of the dimensions of all factors after factor k (its stride).
    std::int64_t factor_stride(std::size_t k) const { return factor_strides_[k]; }

    std::size_t ensemble_index(const std::string& label) const;
    std::size_t mode_index(const std::string& label) const;
    const EnsembleSpec& ensemble(std::size_t i) const { return spec_.ensembles[i]; }
    const ModeSpec& mode(std::size_t i) const { return spec_.modes[i]; }

    int total_tls() const { return total_tls_; }

    // configuration <-> global index (mixed radix, first factor most
    // significant). `config[k]` is the sub-index of factor k.
    std::int64_t index_of(const std::vector<std::int64_t>& config) const;
    std::vector<std::int64_t> config_of(std::int64_t index) const;

    // Sub-index of factor k inside a global index, without full decode.
    std::int64_t sub_index(std::int64_t index, std::size_t k) const {
        return (index / factor_strides_[k]) % factor_dims_[k];
    }

    bool same_layout(const Basis& other) const;

private:
    BasisSpec spec_;
    std::int64_t dimension_ = 0;
    int total_tls_ = 0;
    std::vector<std::int64_t> factor_dims_;
    std::vector<std::int64_t> factor_strides_;
};

using BasisPtr = std::shared_ptr<const Basis>;

// Validates the spec and enumerates the index map.
BasisPtr build_basis(const BasisSpec& spec, std::int64_t dimension_cap = kDefaultDimensionCap);

} // namespace dickelab
