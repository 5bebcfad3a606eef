#include "netdiff/diffusion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

namespace netdiff {

DiffusionModel::DiffusionModel(WeightMatrix weights, StateVector forcing)
    : a(std::move(weights)), z(std::move(forcing)) {
    require_square(a, "DiffusionModel");
    require_finite(a, "DiffusionModel");
    require_finite(z, "DiffusionModel");
    require_matching(a, z, "DiffusionModel");
}

StateVector step(const WeightMatrix& a, const StateVector& y, const StateVector& z) {
    require_matching(a, y, "step");
    require_matching(a, z, "step");
    return a * y + z;
}

Trajectory run_fixed(const DiffusionModel& model, const StateVector& y0, long t) {
    if (t < 1) throw DomainError("run_fixed: step count must be >= 1");
    require_matching(model.a, y0, "run_fixed");

    Trajectory traj;
    traj.states.reserve(static_cast<std::size_t>(t) + 1);
    traj.states.push_back(y0);
    for (long i = 0; i < t; ++i)
        traj.states.push_back(step(model.a, traj.states.back(), model.z));
    return traj;
}

Trajectory run_dynamic(const std::vector<WeightMatrix>& seq, const StateVector& z,
                       const StateVector& y0) {
    if (seq.empty()) throw DomainError("run_dynamic: matrix sequence is empty");
    for (const auto& a : seq) {
        require_square(a, "run_dynamic");
        require_matching(a, y0, "run_dynamic");
    }
    require_matching(seq.front(), z, "run_dynamic");

    Trajectory traj;
    traj.states.reserve(seq.size() + 1);
    traj.states.push_back(y0);
    for (const auto& a : seq)
        traj.states.push_back(step(a, traj.states.back(), z));
    return traj;
}

StateVector unroll_dynamic(const std::vector<WeightMatrix>& seq, const StateVector& z,
                           const StateVector& y_past) {
    if (seq.empty()) throw DomainError("unroll_dynamic: matrix sequence is empty");
    const auto k = static_cast<long>(seq.size());
    for (const auto& a : seq) {
        require_square(a, "unroll_dynamic");
        require_matching(a, y_past, "unroll_dynamic");
    }
    require_matching(seq.front(), z, "unroll_dynamic");

    // Memory term: A_t ... A_{t-k+1} y_past, applied oldest-first.
    StateVector memory = y_past;
    for (const auto& a : seq) memory = a * memory;

    // Forcing term j uses the j newest matrices:
    //   seq[k-1] * seq[k-2] * ... * seq[k-j] * z,  j = 0 .. k-1.
    // The oldest matrix seq[0] never enters the forcing sum.
    StateVector forcing = z; // j = 0
    for (long j = 1; j <= k - 1; ++j) {
        StateVector term = z;
        for (long i = k - j; i <= k - 1; ++i) term = seq[static_cast<std::size_t>(i)] * term;
        forcing += term;
    }
    return memory + forcing;
}

StateVector equilibrium(const DiffusionModel& model, bool allow_nonconvergent) {
    if (!allow_nonconvergent) {
        const double rho = spectral_radius(model.a);
        // The radius is only trusted to tol::spectral, so anything within
        // that band of 1 is treated as divergent.
        if (rho >= 1.0 - tol::spectral)
            throw DivergentModelError(
                "equilibrium: spectral radius " + std::to_string(rho) +
                    " >= 1; the process does not converge to the algebraic fixed point "
                    "(pass allow_nonconvergent to solve anyway)",
                rho);
    }
    return solve_resolvent(model.a, model.z);
}

DriftMatrix estimate_drift(const WeightMatrix& a_prev, const WeightMatrix& a_now) {
    require_square(a_prev, "estimate_drift");
    require_matching(a_prev, a_now, "estimate_drift");
    require_finite(a_prev, "estimate_drift");
    require_finite(a_now, "estimate_drift");
    return a_prev - a_now;
}

PerturbativeSolution perturbative(const WeightMatrix& a_t, const DriftMatrix& d,
                                  const StateVector& z) {
    require_square(a_t, "perturbative");
    require_matching(a_t, d, "perturbative");
    require_matching(a_t, z, "perturbative");
    require_finite(d, "perturbative");

    PerturbativeSolution sol;
    sol.equilibrium_term = solve_resolvent(a_t, z);
    const StateVector dz = d * z;
    sol.correction = a_t * dz;
    sol.y = sol.equilibrium_term + sol.correction;
    sol.second_order_magnitude = (a_t * (a_t * dz)).lpNorm<Eigen::Infinity>();
    sol.sigma_a = max_singular_value(a_t);
    sol.sigma_d = max_singular_value(d);
    sol.slow_regime = sol.sigma_d < sol.sigma_a;
    return sol;
}

OdeFixedPoint ode_equilibrium(const DiffusionModel& model) {
    Eigen::PartialPivLU<WeightMatrix> lu(model.a);
    const double rcond = lu.rcond();
    const StateVector x = lu.solve(-model.z);
    const double scale = std::max(1.0, model.z.lpNorm<Eigen::Infinity>());
    if (!x.allFinite() || rcond < tol::rcond_floor ||
        (model.a * x + model.z).lpNorm<Eigen::Infinity>() > tol::resolvent_residual * scale)
        throw SingularSystemError("ode_equilibrium: A is singular or numerically singular "
                                  "(rcond ~ " + std::to_string(rcond) + ")",
                                  rcond);

    Eigen::EigenSolver<WeightMatrix> eig(model.a, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success)
        throw NonConvergenceError("ode_equilibrium: eigenvalue iteration did not converge");
    const double max_real = eig.eigenvalues().real().maxCoeff();
    return OdeFixedPoint{x, max_real < 0.0, max_real};
}

} // namespace netdiff
