#include <cmath>

#include <Eigen/Eigenvalues>

#include "propagate_util.hpp"

namespace dickelab {

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kPositivityTol = 1e-8;
constexpr int kMaxEigenChecks = 16;

struct LindbladRhs {
    const Hamiltonian& h;
    const std::vector<Operator>& collapse;
    std::vector<DenseMatrix> l_dense;
    std::vector<DenseMatrix> ldagl; // L^dag L, precomputed

    LindbladRhs(const Hamiltonian& h_, const std::vector<Operator>& collapse_)
        : h(h_), collapse(collapse_) {
        for (const auto& l : collapse) {
            l_dense.push_back(l.to_dense());
            ldagl.push_back((l.adjoint() * l).to_dense());
        }
    }

    DenseMatrix operator()(double t, const DenseMatrix& rho) const {
        const cplx minus_i(0.0, -1.0);
        DenseMatrix h_rho = h.static_part.apply_right(rho);
        DenseMatrix rho_h = h.static_part.apply_left(rho);
        if (h.has_drive()) {
            const double eta = (*h.envelope)(t);
            h_rho += eta * h.drive_operator->apply_right(rho);
            rho_h += eta * h.drive_operator->apply_left(rho);
        }
        DenseMatrix out = minus_i * (h_rho - rho_h);
        for (std::size_t k = 0; k < l_dense.size(); ++k) {
            out += l_dense[k] * rho * l_dense[k].adjoint();
            out -= 0.5 * (ldagl[k] * rho + rho * ldagl[k]);
        }
        return out;
    }
};

double spectral_scale(const Hamiltonian& h, const std::vector<Operator>& collapse) {
    double s = h.static_part.inf_norm();
    if (h.has_drive()) s += h.drive_operator->inf_norm() * (*h.envelope)(h.envelope->t0);
    for (const auto& l : collapse) {
        const double n = l.inf_norm();
        s += n * n;
    }
    return std::max(s, 1e-12);
}

} // namespace

Trajectory evolve_open(const EvolutionRequest& req) {
    if (req.noise.empty()) {
        throw ModelError("evolve_open needs at least one noise entry; use evolve_closed");
    }
    auto run = detail::prepare_run(req);
    if (run.basis->dimension() > req.open_dimension_cap) {
        throw CapacityError("basis dimension " + std::to_string(run.basis->dimension()) +
                            " exceeds the open-evolution cap of " +
                            std::to_string(req.open_dimension_cap));
    }
    const auto times = detail::output_grid(req.t_max, req.dt_output);
    const auto collapse = detail::collapse_operators(req.noise, run.basis);
    const LindbladRhs rhs(run.hamiltonian, collapse);

    Trajectory traj;
    traj.times = times;
    traj.labels = run.labels;
    traj.records.assign(run.labels.size(), {});
    traj.basis = run.basis;
    traj.stats.method_used = "rk4_density";
    traj.stats.min_density_eigenvalue = 0.0;

    // positivity checks are dense eigensolves; spread a bounded number
    // across the grid, always including the final record
    std::size_t eigen_stride = 1;
    if (times.size() > kMaxEigenChecks) {
        eigen_stride = (times.size() + kMaxEigenChecks - 1) / kMaxEigenChecks;
    }

    detail::LeakMonitor leak(run.basis);
    DenseMatrix rho = run.initial.amplitudes * run.initial.amplitudes.adjoint();

    const double h_target = req.open_internal_step > 0.0
                                ? req.open_internal_step
                                : 0.005 / spectral_scale(run.hamiltonian, collapse);

    auto sample = [&](std::size_t idx) {
        const double trace_drift = std::abs(rho.trace().real() - 1.0);
        traj.stats.max_norm_drift = std::max(traj.stats.max_norm_drift, trace_drift);
        if (trace_drift > kTraceTol) {
            throw NumericalError("density-matrix trace drift " + std::to_string(trace_drift) +
                                 " exceeds " + std::to_string(kTraceTol) +
                                 "; reduce the internal step");
        }
        leak.check(rho);
        if (idx % eigen_stride == 0 || idx + 1 == times.size()) {
            Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(rho, Eigen::EigenvaluesOnly);
            const double lambda_min = solver.eigenvalues().minCoeff();
            traj.stats.min_density_eigenvalue =
                std::min(traj.stats.min_density_eigenvalue, lambda_min);
            if (lambda_min < -kPositivityTol) {
                throw NumericalError("density matrix lost positivity (min eigenvalue " +
                                     std::to_string(lambda_min) + ")");
            }
        }
        for (std::size_t k = 0; k < run.observables.size(); ++k) {
            traj.records[k].push_back(run.observables[k].apply_right(rho).trace().real());
        }
    };

    sample(0);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double span = times[i] - times[i - 1];
        const int n_sub = std::max(1, static_cast<int>(std::ceil(span / h_target)));
        const double h = span / n_sub;
        double t = times[i - 1];
        for (int s = 0; s < n_sub; ++s) {
            const DenseMatrix k1 = rhs(t, rho);
            const DenseMatrix k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1);
            const DenseMatrix k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2);
            const DenseMatrix k4 = rhs(t + h, rho + h * k3);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            ++traj.stats.steps_accepted;
        }
        sample(i);
    }

    traj.stats.max_truncation_leak = leak.max_leak;
    traj.final_populations = rho.diagonal().real();
    return traj;
}

} // namespace dickelab
