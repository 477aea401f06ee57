#include "dickelab/operators.hpp"

#include <cmath>
#include <vector>

namespace dickelab {

namespace {

constexpr double kHermitianTol = 1e-12;

std::vector<Eigen::Triplet<cplx>> to_triplets(const SparseMatrix& m) {
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    return t;
}

} // namespace

Operator Operator::from_triplets(BasisPtr basis, const std::vector<Eigen::Triplet<cplx>>& entries) {
    Operator op;
    op.basis_ = std::move(basis);
    const auto d = op.basis_->dimension();
    op.dense_storage_ = d < kDenseLimit;
    if (op.dense_storage_) {
        op.dense_ = DenseMatrix::Zero(d, d);
        for (const auto& t : entries) op.dense_(t.row(), t.col()) += t.value();
    } else {
        op.sparse_.resize(d, d);
        op.sparse_.setFromTriplets(entries.begin(), entries.end());
        op.sparse_.makeCompressed();
    }
    op.finalize_flag(false);
    return op;
}

Operator Operator::from_dense(BasisPtr basis, const DenseMatrix& m) {
    if (m.rows() != basis->dimension() || m.cols() != basis->dimension()) {
        throw BasisError("matrix dimension does not match basis dimension");
    }
    Operator op;
    op.basis_ = std::move(basis);
    op.dense_storage_ = op.basis_->dimension() < kDenseLimit;
    if (op.dense_storage_) {
        op.dense_ = m;
    } else {
        op.sparse_ = m.sparseView();
        op.sparse_.makeCompressed();
    }
    op.finalize_flag(false);
    return op;
}

Operator Operator::identity(BasisPtr basis) {
    const auto d = basis->dimension();
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(d));
    for (std::int64_t i = 0; i < d; ++i) t.emplace_back(i, i, cplx(1.0, 0.0));
    return from_triplets(std::move(basis), t);
}

Operator Operator::zero(BasisPtr basis) {
    return from_triplets(std::move(basis), {});
}

const DenseMatrix& Operator::dense_ref() const {
    if (!dense_storage_) throw BasisError("operator stored sparse; use to_dense()");
    return dense_;
}

const SparseMatrix& Operator::sparse_ref() const {
    if (dense_storage_) throw BasisError("operator stored dense");
    return sparse_;
}

DenseMatrix Operator::to_dense() const {
    if (dense_storage_) return dense_;
    return DenseMatrix(sparse_);
}

Vector Operator::apply(const Vector& v) const {
    if (v.size() != dim()) throw BasisError("state dimension does not match operator");
    if (dense_storage_) return dense_ * v;
    return sparse_ * v;
}

DenseMatrix Operator::apply_right(const DenseMatrix& m) const {
    if (dense_storage_) return dense_ * m;
    return sparse_ * m;
}

DenseMatrix Operator::apply_left(const DenseMatrix& m) const {
    if (dense_storage_) return m * dense_;
    return m * sparse_;
}

void Operator::check_same_basis(const Operator& rhs) const {
    if (!basis_ || !rhs.basis_) throw BasisError("operator has no basis");
    if (basis_ == rhs.basis_) return;
    if (!basis_->same_layout(*rhs.basis_)) throw BasisError("operator bases do not match");
}

void Operator::finalize_flag(bool structural_hermitian) {
    hermitian_ = structural_hermitian || hermiticity_defect() < kHermitianTol;
}

Operator Operator::operator+(const Operator& rhs) const {
    check_same_basis(rhs);
    Operator out;
    out.basis_ = basis_;
    out.dense_storage_ = dense_storage_;
    if (dense_storage_) out.dense_ = dense_ + rhs.dense_;
    else out.sparse_ = sparse_ + rhs.sparse_;
    out.finalize_flag(hermitian_ && rhs.hermitian_);
    return out;
}

Operator Operator::operator-(const Operator& rhs) const {
    check_same_basis(rhs);
    Operator out;
    out.basis_ = basis_;
    out.dense_storage_ = dense_storage_;
    if (dense_storage_) out.dense_ = dense_ - rhs.dense_;
    else out.sparse_ = sparse_ - rhs.sparse_;
    out.finalize_flag(hermitian_ && rhs.hermitian_);
    return out;
}

Operator Operator::operator*(const Operator& rhs) const {
    check_same_basis(rhs);
    Operator out;
    out.basis_ = basis_;
    out.dense_storage_ = dense_storage_;
    if (dense_storage_) out.dense_ = dense_ * rhs.dense_;
    else {
        out.sparse_ = sparse_ * rhs.sparse_;
        out.sparse_.makeCompressed();
    }
    out.finalize_flag(false);
    return out;
}

Operator Operator::scaled(cplx c) const {
    Operator out;
    out.basis_ = basis_;
    out.dense_storage_ = dense_storage_;
    if (dense_storage_) out.dense_ = c * dense_;
    else out.sparse_ = c * sparse_;
    out.finalize_flag(hermitian_ && c.imag() == 0.0);
    return out;
}

Operator Operator::adjoint() const {
    Operator out;
    out.basis_ = basis_;
    out.dense_storage_ = dense_storage_;
    if (dense_storage_) out.dense_ = dense_.adjoint();
    else {
        out.sparse_ = sparse_.adjoint();
        out.sparse_.makeCompressed();
    }
    out.finalize_flag(hermitian_);
    return out;
}

double Operator::max_abs_entry() const {
    if (dense_storage_) return dense_.cwiseAbs().maxCoeff();
    double m = 0.0;
    for (int k = 0; k < sparse_.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(sparse_, k); it; ++it) {
            m = std::max(m, std::abs(it.value()));
        }
    }
    return m;
}

double Operator::hermiticity_defect() const {
    if (dense_storage_) {
        if (dense_.size() == 0) return 0.0;
        return (dense_ - dense_.adjoint().eval()).cwiseAbs().maxCoeff();
    }
    SparseMatrix diff = sparse_ - SparseMatrix(sparse_.adjoint());
    double m = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
            m = std::max(m, std::abs(it.value()));
        }
    }
    return m;
}

double Operator::inf_norm() const {
    if (dim() == 0) return 0.0;
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(dim());
    if (dense_storage_) {
        row_sums = dense_.cwiseAbs().rowwise().sum();
    } else {
        for (int k = 0; k < sparse_.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(sparse_, k); it; ++it) {
                row_sums[it.row()] += std::abs(it.value());
            }
        }
    }
    return row_sums.maxCoeff();
}

cplx Operator::trace() const {
    if (dense_storage_) return dense_.trace();
    cplx t = 0.0;
    for (int k = 0; k < sparse_.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(sparse_, k); it; ++it) {
            if (it.row() == it.col()) t += it.value();
        }
    }
    return t;
}

// ---------------------------------------------------------------- builders

namespace {

// Embed a local operator acting on factor `k` (given by its nonzero entries
// over the factor's sub-basis) into the full space.
Operator embed_factor_operator(const BasisPtr& basis, std::size_t k,
                               const std::vector<Eigen::Triplet<cplx>>& local) {
    const std::int64_t dim = basis->dimension();
    const std::int64_t fdim = basis->factor_dim(k);
    const std::int64_t stride = basis->factor_stride(k);
    const std::int64_t outer = dim / (fdim * stride); // combined dim of more-significant factors

    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(local.size() * static_cast<std::size_t>(dim / fdim));
    for (const auto& t : local) {
        for (std::int64_t hi = 0; hi < outer; ++hi) {
            const std::int64_t base = hi * fdim * stride;
            for (std::int64_t lo = 0; lo < stride; ++lo) {
                entries.emplace_back(base + t.row() * stride + lo,
                                     base + t.col() * stride + lo, t.value());
            }
        }
    }
    return Operator::from_triplets(basis, entries);
}

std::vector<Eigen::Triplet<cplx>> local_site_op(SiteOp kind) {
    // local order (ground, excited) = (0, 1)
    switch (kind) {
        case SiteOp::sz: return {{0, 0, cplx(-1.0, 0.0)}, {1, 1, cplx(1.0, 0.0)}};
        case SiteOp::sx: return {{0, 1, cplx(1.0, 0.0)}, {1, 0, cplx(1.0, 0.0)}};
        case SiteOp::sy: return {{0, 1, cplx(0.0, 1.0)}, {1, 0, cplx(0.0, -1.0)}};
        case SiteOp::splus: return {{1, 0, cplx(1.0, 0.0)}};
        case SiteOp::sminus: return {{0, 1, cplx(1.0, 0.0)}};
    }
    throw BasisError("unknown site operator kind");
}

} // namespace

Operator single_site_operator(const BasisPtr& basis, const std::string& ensemble_label,
                              int site_index, SiteOp kind) {
    if (basis->reduction() != Reduction::full_tensor) {
        throw BasisError("single-site operators are not representable in a collective_spin basis; "
                         "use collective_operator");
    }
    const std::size_t e = basis->ensemble_index(ensemble_label);
    const int n = basis->ensemble(e).n_tls;
    if (site_index < 0 || site_index >= n) {
        throw BasisError("site index " + std::to_string(site_index) + " out of range for ensemble '" +
                         ensemble_label + "'");
    }
    // within the ensemble factor, site 0 is the most significant bit
    const std::int64_t site_bit = std::int64_t{1} << (n - 1 - site_index);
    const std::int64_t fdim = basis->factor_dim(e);

    std::vector<Eigen::Triplet<cplx>> local;
    const auto local2 = local_site_op(kind);
    for (std::int64_t c = 0; c < fdim; ++c) {
        const std::int64_t bit = (c & site_bit) ? 1 : 0;
        for (const auto& t : local2) {
            if (t.col() != bit) continue;
            const std::int64_t c_out = (t.row() == bit) ? c : (c ^ site_bit);
            local.emplace_back(static_cast<int>(c_out), static_cast<int>(c), t.value());
        }
    }
    return embed_factor_operator(basis, e, local);
}

Operator collective_operator(const BasisPtr& basis, const std::string& ensemble_label,
                             CollectiveOp kind) {
    if (basis->reduction() != Reduction::collective_spin) {
        throw BasisError("collective operators require a collective_spin basis");
    }
    const std::size_t e = basis->ensemble_index(ensemble_label);
    const int n = basis->ensemble(e).n_tls;
    const double j = 0.5 * n;

    std::vector<Eigen::Triplet<cplx>> local;
    auto push_plus = [&](double weight) {
        for (int k = 0; k < n; ++k) { // index k corresponds to m = -j + k
            const double m = -j + k;
            const double amp = std::sqrt(j * (j + 1) - m * (m + 1));
            local.emplace_back(k + 1, k, cplx(weight * amp, 0.0));
        }
    };
    auto push_minus = [&](double weight) {
        for (int k = 1; k <= n; ++k) {
            const double m = -j + k;
            const double amp = std::sqrt(j * (j + 1) - m * (m - 1));
            local.emplace_back(k - 1, k, cplx(weight * amp, 0.0));
        }
    };
    switch (kind) {
        case CollectiveOp::Jz:
            for (int k = 0; k <= n; ++k) local.emplace_back(k, k, cplx(-j + k, 0.0));
            break;
        case CollectiveOp::Jplus: push_plus(1.0); break;
        case CollectiveOp::Jminus: push_minus(1.0); break;
        case CollectiveOp::Jx:
            push_plus(0.5);
            push_minus(0.5);
            break;
    }
    return embed_factor_operator(basis, e, local);
}

Operator boson_operator(const BasisPtr& basis, const std::string& mode_label, BosonOp kind) {
    const std::size_t m = basis->mode_index(mode_label);
    const std::size_t k = basis->n_ensembles() + m;
    const int cutoff = basis->mode(m).fock_cutoff;

    std::vector<Eigen::Triplet<cplx>> local;
    switch (kind) {
        case BosonOp::a:
            for (int occ = 1; occ <= cutoff; ++occ) {
                local.emplace_back(occ - 1, occ, cplx(std::sqrt(double(occ)), 0.0));
            }
            break;
        case BosonOp::a_dag:
            for (int occ = 0; occ < cutoff; ++occ) {
                local.emplace_back(occ + 1, occ, cplx(std::sqrt(double(occ) + 1.0), 0.0));
            }
            break;
        case BosonOp::n:
            for (int occ = 1; occ <= cutoff; ++occ) {
                local.emplace_back(occ, occ, cplx(double(occ), 0.0));
            }
            break;
    }
    return embed_factor_operator(basis, k, local);
}

Operator top_level_projector(const BasisPtr& basis, const std::string& mode_label) {
    const std::size_t m = basis->mode_index(mode_label);
    const std::size_t k = basis->n_ensembles() + m;
    const int cutoff = basis->mode(m).fock_cutoff;
    std::vector<Eigen::Triplet<cplx>> local{{cutoff, cutoff, cplx(1.0, 0.0)}};
    return embed_factor_operator(basis, k, local);
}

Operator ensemble_excitation_number(const BasisPtr& basis, const std::string& ensemble_label) {
    const std::size_t e = basis->ensemble_index(ensemble_label);
    const int n = basis->ensemble(e).n_tls;
    std::vector<Eigen::Triplet<cplx>> local;
    if (basis->reduction() == Reduction::collective_spin) {
        // Jz + N/2 counts excitations on the Dicke ladder
        for (int k = 0; k <= n; ++k) local.emplace_back(k, k, cplx(double(k), 0.0));
    } else {
        const std::int64_t fdim = basis->factor_dim(e);
        for (std::int64_t c = 0; c < fdim; ++c) {
            const int count = static_cast<int>(__builtin_popcountll(static_cast<unsigned long long>(c)));
            if (count > 0) local.emplace_back(c, c, cplx(double(count), 0.0));
        }
    }
    return embed_factor_operator(basis, e, local);
}

Operator ensemble_sum_operator(const BasisPtr& basis, const std::string& ensemble_label, SiteOp kind) {
    if (basis->reduction() == Reduction::collective_spin) {
        switch (kind) {
            case SiteOp::sz: return collective_operator(basis, ensemble_label, CollectiveOp::Jz).scaled(2.0);
            case SiteOp::sx: return collective_operator(basis, ensemble_label, CollectiveOp::Jx).scaled(2.0);
            case SiteOp::splus: return collective_operator(basis, ensemble_label, CollectiveOp::Jplus);
            case SiteOp::sminus: return collective_operator(basis, ensemble_label, CollectiveOp::Jminus);
            case SiteOp::sy:
                return (collective_operator(basis, ensemble_label, CollectiveOp::Jplus) -
                        collective_operator(basis, ensemble_label, CollectiveOp::Jminus))
                    .scaled(cplx(0.0, -1.0));
        }
        throw BasisError("unknown site operator kind");
    }
    const std::size_t e = basis->ensemble_index(ensemble_label);
    const int n = basis->ensemble(e).n_tls;
    Operator sum = single_site_operator(basis, ensemble_label, 0, kind);
    for (int s = 1; s < n; ++s) {
        sum = sum + single_site_operator(basis, ensemble_label, s, kind);
    }
    return sum;
}

SparseMatrix symmetric_embedding(const Basis& full, const Basis& collective) {
    if (full.reduction() != Reduction::full_tensor ||
        collective.reduction() != Reduction::collective_spin) {
        throw BasisError("symmetric_embedding expects (full_tensor, collective_spin) bases");
    }
    if (full.n_ensembles() != collective.n_ensembles() || full.n_modes() != collective.n_modes()) {
        throw BasisError("bases differ in factor structure");
    }
    for (std::size_t i = 0; i < full.n_ensembles(); ++i) {
        if (full.ensemble(i).n_tls != collective.ensemble(i).n_tls) {
            throw BasisError("ensemble sizes differ");
        }
    }
    for (std::size_t i = 0; i < full.n_modes(); ++i) {
        if (full.mode(i).fock_cutoff != collective.mode(i).fock_cutoff) {
            throw BasisError("mode cutoffs differ");
        }
    }

    std::vector<Eigen::Triplet<cplx>> entries;
    std::vector<std::int64_t> full_config(full.n_factors());
    for (std::int64_t col = 0; col < collective.dimension(); ++col) {
        const auto coll_config = collective.config_of(col);
        // enumerate, per ensemble, all bit patterns with the requested count
        std::vector<std::vector<std::int64_t>> choices(full.n_ensembles());
        double norm = 1.0;
        for (std::size_t e = 0; e < full.n_ensembles(); ++e) {
            const int n = full.ensemble(e).n_tls;
            const int k = static_cast<int>(coll_config[e]);
            for (std::int64_t c = 0; c < (std::int64_t{1} << n); ++c) {
                if (__builtin_popcountll(static_cast<unsigned long long>(c)) == k) {
                    choices[e].push_back(c);
                }
            }
            norm *= static_cast<double>(choices[e].size());
        }
        const double amp = 1.0 / std::sqrt(norm);

        // cartesian product over ensembles
        std::vector<std::size_t> cursor(full.n_ensembles(), 0);
        while (true) {
            for (std::size_t e = 0; e < full.n_ensembles(); ++e) {
                full_config[e] = choices[e][cursor[e]];
            }
            for (std::size_t m = 0; m < full.n_modes(); ++m) {
                full_config[full.n_ensembles() + m] = coll_config[collective.n_ensembles() + m];
            }
            entries.emplace_back(static_cast<int>(full.index_of(full_config)),
                                 static_cast<int>(col), cplx(amp, 0.0));
            std::size_t e = 0;
            for (; e < cursor.size(); ++e) {
                if (++cursor[e] < choices[e].size()) break;
                cursor[e] = 0;
            }
            if (e == cursor.size()) break;
            if (cursor.empty()) break;
        }
    }

    SparseMatrix v(full.dimension(), collective.dimension());
    v.setFromTriplets(entries.begin(), entries.end());
    v.makeCompressed();
    return v;
}

} // namespace dickelab
