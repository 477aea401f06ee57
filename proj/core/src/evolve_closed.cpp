#include <cmath>

#include <Eigen/Eigenvalues>

#include "propagate_util.hpp"

namespace dickelab {

namespace {

using detail::LeakMonitor;

constexpr double kAdaptiveErrorPerUnitTime = 1e-10;
constexpr std::int64_t kEigendecompositionLimit = 4096;

struct SampleRecorder {
    const std::vector<Operator>& observables;
    const Operator* energy_op; // null for driven runs
    LeakMonitor& leak;
    RunStats& stats;
    std::vector<std::vector<double>>& records;
    double e0 = 0.0;
    bool first = true;

    void operator()(const Vector& psi) {
        stats.max_norm_drift = std::max(stats.max_norm_drift, std::abs(psi.norm() - 1.0));
        leak.check(psi);
        if (energy_op) {
            const double e = psi.dot(energy_op->apply(psi)).real();
            if (first) {
                e0 = e;
                first = false;
            }
            stats.max_energy_drift = std::max(stats.max_energy_drift, std::abs(e - e0));
        }
        for (std::size_t k = 0; k < observables.size(); ++k) {
            records[k].push_back(psi.dot(observables[k].apply(psi)).real());
        }
    }
};

void evolve_eigendecomposition(const Operator& h, const std::vector<double>& times, Vector psi0,
                               SampleRecorder& record, Vector& final_psi) {
    if (h.dim() > kEigendecompositionLimit) {
        throw ModelError("dimension " + std::to_string(h.dim()) +
                         " too large for dense eigendecomposition; use krylov");
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(h.to_dense());
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const DenseMatrix& u = solver.eigenvectors();
    const Vector c0 = u.adjoint() * psi0;

    Vector psi(psi0.size());
    for (double t : times) {
        Vector phase(c0.size());
        for (Eigen::Index i = 0; i < c0.size(); ++i) {
            phase[i] = c0[i] * std::exp(cplx(0.0, -evals[i] * t));
        }
        psi = u * phase;
        record(psi);
    }
    final_psi = std::move(psi);
}

void evolve_krylov(const Operator& h, const std::vector<double>& times, Vector psi,
                   SampleRecorder& record, RunStats& stats, Vector& final_psi) {
    record(psi);
    std::int64_t matvecs = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        psi = detail::krylov_expv(h, std::move(psi), times[i] - times[i - 1], &matvecs);
        record(psi);
    }
    stats.steps_accepted = matvecs;
    final_psi = std::move(psi);
}

// Dormand-Prince 5(4) embedded pair.
struct Rk45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

void evolve_adaptive_rk(const Hamiltonian& h, const std::vector<double>& times, Vector psi,
                        SampleRecorder& record, RunStats& stats, Vector& final_psi) {
    auto rhs = [&](double t, const Vector& y) -> Vector {
        Vector hy = h.static_part.apply(y);
        if (h.has_drive()) hy += h.drive_operator->apply(y) * (*h.envelope)(t);
        return cplx(0.0, -1.0) * hy;
    };

    const double scale =
        h.static_part.inf_norm() +
        (h.has_drive() ? h.drive_operator->inf_norm() * (*h.envelope)(h.envelope->t0) : 0.0);
    double hstep = 1e-3 / std::max(scale, 1e-6);
    const double t_end = times.back();

    record(psi);
    double t = times.front();
    Vector k1 = rhs(t, psi);
    std::size_t next_sample = 1;

    while (next_sample < times.size()) {
        bool clipped = false;
        double step = hstep;
        if (t + step >= times[next_sample]) {
            step = times[next_sample] - t;
            clipped = true;
        }
        if (step < 1e-13 * std::max(1.0, std::abs(t_end))) {
            throw StepUnderflowError("adaptive step size underflow at t = " + std::to_string(t));
        }

        const Vector k2 = rhs(t + Rk45::c2 * step, psi + step * (Rk45::a21 * k1));
        const Vector k3 = rhs(t + Rk45::c3 * step, psi + step * (Rk45::a31 * k1 + Rk45::a32 * k2));
        const Vector k4 = rhs(t + Rk45::c4 * step,
                              psi + step * (Rk45::a41 * k1 + Rk45::a42 * k2 + Rk45::a43 * k3));
        const Vector k5 =
            rhs(t + Rk45::c5 * step,
                psi + step * (Rk45::a51 * k1 + Rk45::a52 * k2 + Rk45::a53 * k3 + Rk45::a54 * k4));
        const Vector k6 = rhs(t + step, psi + step * (Rk45::a61 * k1 + Rk45::a62 * k2 +
                                                      Rk45::a63 * k3 + Rk45::a64 * k4 +
                                                      Rk45::a65 * k5));
        const Vector y_new = psi + step * (Rk45::b1 * k1 + Rk45::b3 * k3 + Rk45::b4 * k4 +
                                           Rk45::b5 * k5 + Rk45::b6 * k6);
        const Vector k7 = rhs(t + step, y_new);
        const Vector err_vec = step * (Rk45::e1 * k1 + Rk45::e3 * k3 + Rk45::e4 * k4 +
                                       Rk45::e5 * k5 + Rk45::e6 * k6 + Rk45::e7 * k7);

        const double err = err_vec.norm();
        const double tol = kAdaptiveErrorPerUnitTime * step;
        const double grow = 0.9 * std::pow(tol / std::max(err, 1e-300), 0.2);
        if (err <= tol) {
            t = clipped ? times[next_sample] : t + step;
            psi = y_new;
            k1 = k7; // FSAL
            ++stats.steps_accepted;
            if (clipped) {
                record(psi);
                ++next_sample;
                // keep the nominal step; the clip says nothing about accuracy
                if (grow < 1.0) hstep = step * std::clamp(grow, 0.2, 5.0);
            } else {
                hstep = step * std::clamp(grow, 0.2, 5.0);
            }
        } else {
            ++stats.steps_rejected;
            hstep = step * std::clamp(grow, 0.2, 5.0);
        }
    }
    final_psi = std::move(psi);
}

} // namespace

namespace detail {

Vector krylov_expv(const Operator& h, Vector v, double t, std::int64_t* matvecs) {
    const auto dim = h.dim();
    const int m_max = static_cast<int>(std::min<std::int64_t>(30, dim));
    const double hnorm = h.inf_norm();
    const int n_sub = std::max(1, static_cast<int>(std::ceil(std::abs(t) * hnorm / 4.0)));
    const double tau = t / n_sub;

    for (int sub = 0; sub < n_sub; ++sub) {
        const double beta = v.norm();
        if (beta == 0.0) return v;

        std::vector<Vector> basis;
        basis.reserve(m_max + 1);
        basis.push_back(v / beta);
        DenseMatrix hess = DenseMatrix::Zero(m_max + 1, m_max);
        int m = m_max;
        for (int j = 0; j < m_max; ++j) {
            Vector w = h.apply(basis[j]);
            if (matvecs) ++(*matvecs);
            for (int i = 0; i <= j; ++i) { // modified Gram-Schmidt, two passes
                const cplx coeff = basis[i].dot(w);
                hess(i, j) += coeff;
                w -= coeff * basis[i];
            }
            for (int i = 0; i <= j; ++i) {
                const cplx coeff = basis[i].dot(w);
                hess(i, j) += coeff;
                w -= coeff * basis[i];
            }
            const double wnorm = w.norm();
            hess(j + 1, j) = wnorm;
            if (wnorm < 1e-14 * hnorm || j + 1 == m_max) {
                m = j + 1;
                break;
            }
            basis.push_back(w / wnorm);
        }

        // exponential of the (Hermitian up to round-off) projected block
        DenseMatrix t_block = hess.topLeftCorner(m, m);
        t_block = 0.5 * (t_block + t_block.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(t_block);
        Vector small = Vector::Zero(m);
        small[0] = beta;
        Vector rotated = solver.eigenvectors().adjoint() * small;
        for (int i = 0; i < m; ++i) {
            rotated[i] *= std::exp(cplx(0.0, -solver.eigenvalues()[i] * tau));
        }
        const Vector coeffs = solver.eigenvectors() * rotated;

        v = Vector::Zero(dim);
        for (int i = 0; i < m; ++i) v += coeffs[i] * basis[i];
    }
    return v;
}

} // namespace detail

Trajectory evolve_closed(const EvolutionRequest& req) {
    if (!req.noise.empty()) {
        throw ModelError("evolve_closed cannot take noise entries; use evolve_open");
    }
    auto run = detail::prepare_run(req);
    const auto times = detail::output_grid(req.t_max, req.dt_output);

    Method method = req.method;
    if (run.hamiltonian.has_drive()) {
        if (method == Method::auto_select) method = Method::adaptive_rk;
        if (method != Method::adaptive_rk) {
            throw ModelError("driven Hamiltonians require the adaptive_rk method");
        }
    } else if (method == Method::auto_select) {
        method = run.basis->dimension() <= 1024 ? Method::eigendecomposition : Method::krylov;
    }

    Trajectory traj;
    traj.times = times;
    traj.labels = run.labels;
    traj.records.assign(run.labels.size(), {});
    traj.basis = run.basis;

    LeakMonitor leak(run.basis);
    const bool is_static = !run.hamiltonian.has_drive();
    SampleRecorder recorder{run.observables, is_static ? &run.hamiltonian.static_part : nullptr,
                            leak, traj.stats, traj.records};

    switch (method) {
        case Method::eigendecomposition:
            traj.stats.method_used = "eigendecomposition";
            evolve_eigendecomposition(run.hamiltonian.static_part, times,
                                      run.initial.amplitudes, recorder, traj.final_amplitudes);
            break;
        case Method::krylov:
            traj.stats.method_used = "krylov";
            evolve_krylov(run.hamiltonian.static_part, times, run.initial.amplitudes, recorder,
                          traj.stats, traj.final_amplitudes);
            break;
        case Method::adaptive_rk:
            traj.stats.method_used = "adaptive_rk";
            evolve_adaptive_rk(run.hamiltonian, times, run.initial.amplitudes, recorder,
                               traj.stats, traj.final_amplitudes);
            break;
        case Method::auto_select:
            break; // unreachable
    }
    traj.stats.max_truncation_leak = leak.max_leak;
    return traj;
}

Trajectory evolve(const EvolutionRequest& req) {
    return req.noise.empty() ? evolve_closed(req) : evolve_open(req);
}

} // namespace dickelab
