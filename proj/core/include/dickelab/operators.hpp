// operators.hpp — operator matrices over a Basis and the elementary builders
//
// Sign conventions (fixed project-wide, asserted by tests):
//   local TLS order is (ground, excited), so sigma_z = diag(-1, +1),
//   sigma_plus maps ground -> excited, and [s+, s-] = sz.
//   Collective Jz has eigenvalues m = -N/2..N/2 (spin-1/2 convention), so
//   sum_j sigma_z^j corresponds to 2 Jz on the symmetric subspace.
//   Bosonic a is truncated by zeroing a^dagger at the cutoff.

#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dickelab/basis.hpp"

namespace dickelab {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Vector = Eigen::VectorXcd;

enum class SiteOp { sx, sy, sz, splus, sminus };
enum class CollectiveOp { Jz, Jplus, Jminus, Jx };
enum class BosonOp { a, a_dag, n };

// Dense storage below this dimension, compressed sparse at or above it.
inline constexpr std::int64_t kDenseLimit = 256;

// Hermiticity flag is trustworthy: it is set only when structural rules or a
// numeric check (max entry-wise |A - A^dagger| < 1e-12) establish it.
class Operator {
public:
    Operator() = default;

    static Operator from_triplets(BasisPtr basis, const std::vector<Eigen::Triplet<cplx>>& entries);
    static Operator from_dense(BasisPtr basis, const DenseMatrix& m);
    static Operator identity(BasisPtr basis);
    static Operator zero(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    std::int64_t dim() const { return basis_ ? basis_->dimension() : 0; }
    bool is_dense() const { return dense_storage_; }
    bool hermitian() const { return hermitian_; }

    const DenseMatrix& dense_ref() const; // valid only when is_dense()
    const SparseMatrix& sparse_ref() const; // valid only when !is_dense()
    DenseMatrix to_dense() const;

    Vector apply(const Vector& v) const;
    DenseMatrix apply_right(const DenseMatrix& m) const;  // this * m
    DenseMatrix apply_left(const DenseMatrix& m) const;   // m * this

    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(const Operator& rhs) const;
    Operator scaled(cplx c) const;
    Operator adjoint() const;

    friend Operator operator*(cplx c, const Operator& op) { return op.scaled(c); }
    friend Operator operator*(double c, const Operator& op) { return op.scaled(cplx(c, 0.0)); }

    double max_abs_entry() const;
    // max entry-wise |A - A^dagger|
    double hermiticity_defect() const;
    // largest row sum of absolute values; cheap spectral-scale estimate
    double inf_norm() const;
    cplx trace() const;

private:
    void check_same_basis(const Operator& rhs) const;
    void finalize_flag(bool structural_hermitian);

    BasisPtr basis_;
    bool dense_storage_ = true;
    DenseMatrix dense_;
    SparseMatrix sparse_;
    bool hermitian_ = false;
};

// ---------------------------------------------------------------- builders

// Pauli-type operator on one site of a full_tensor ensemble; identity on all
// other factors. Rejects collective_spin bases.
Operator single_site_operator(const BasisPtr& basis, const std::string& ensemble_label,
                              int site_index, SiteOp kind);

// Angular-momentum operator on a collective_spin ensemble with j = N/2:
// Jpm |j,m> = sqrt(j(j+1) - m(m±1)) |j,m±1>.
Operator collective_operator(const BasisPtr& basis, const std::string& ensemble_label,
                             CollectiveOp kind);

// Ladder/number operator on a boson mode; a|n> = sqrt(n)|n-1>, and a^dagger
// annihilates the top retained level (truncation artifact, see leak monitor).
Operator boson_operator(const BasisPtr& basis, const std::string& mode_label, BosonOp kind);

// Projector onto the top retained occupation of a mode; drives the
// truncation-leak monitor in dynamics.
Operator top_level_projector(const BasisPtr& basis, const std::string& mode_label);

// sum over sites of sigma_plus sigma_minus for one ensemble (excitation
// count); works in either reduction.
Operator ensemble_excitation_number(const BasisPtr& basis, const std::string& ensemble_label);

// Sum of sigma ops over all sites of an ensemble: full_tensor sums the
// single-site operators, collective_spin maps to (2Jx, 2Jz, J+, J-).
Operator ensemble_sum_operator(const BasisPtr& basis, const std::string& ensemble_label, SiteOp kind);

// Isometry V (dim_full x dim_collective) embedding the symmetric subspace:
// column (k1..kE, n1..nM) is the normalized sum over all spin configurations
// with k_i excitations in ensemble i. V^dagger H_full V reproduces the
// collective build for permutation-symmetric H.
SparseMatrix symmetric_embedding(const Basis& full, const Basis& collective);

} // namespace dickelab
