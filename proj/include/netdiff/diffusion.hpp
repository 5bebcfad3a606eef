#ifndef NETDIFF_DIFFUSION_HPP
#define NETDIFF_DIFFUSION_HPP

#include <vector>

#include "netdiff/linalg.hpp"

namespace netdiff {

/// One instance of the forced linear diffusion recurrence
///   y_t = A y_{t-1} + z.
/// A holds the diffusion weights, z the exogenous forcing vector.
struct DiffusionModel {
    WeightMatrix a;
    StateVector z;

    DiffusionModel(WeightMatrix weights, StateVector forcing);
    Eigen::Index size() const { return a.rows(); }
};

/// Ordered states y_0 .. y_T; states[0] is the initial condition.
struct Trajectory {
    std::vector<StateVector> states;

    long step_count() const { return static_cast<long>(states.size()) - 1; }
    const StateVector& final_state() const { return states.back(); }
};

/// One update: A y + z.
StateVector step(const WeightMatrix& a, const StateVector& y, const StateVector& z);

/// Iterates the fixed-network recurrence t times from y0.
Trajectory run_fixed(const DiffusionModel& model, const StateVector& y0, long t);

/// Iterates the time-varying recurrence y_i = A_i y_{i-1} + z over the
/// given matrix sequence (oldest first). Trajectory length is
/// sequence length + 1.
Trajectory run_dynamic(const std::vector<WeightMatrix>& seq, const StateVector& z,
                       const StateVector& y0);

/// Closed-form unrolling of the dynamic recurrence over a k-matrix window
/// (seq ordered oldest..newest, newest = A_t):
///   y_t = A_t A_{t-1} ... A_{t-k+1} y_past
///       + [I + A_t + A_t A_{t-1} + ... + A_t...A_{t-k+2}] z.
/// Every product is accumulated right-to-left as matrix-vector chains;
/// no matrix-matrix product is formed. Must agree with run_dynamic's
/// final state; the equivalence is this module's ground-truth oracle.
StateVector unroll_dynamic(const std::vector<WeightMatrix>& seq, const StateVector& z,
                           const StateVector& y_past);

/// Fixed point (I - A)^{-1} z of the static recurrence. Refuses when
/// spectral_radius(A) >= 1 -- the algebraic fixed point may exist but is
/// not the process limit -- unless allow_nonconvergent is set.
StateVector equilibrium(const DiffusionModel& model, bool allow_nonconvergent = false);

/// Backward difference D = A_prev - A_now (the k = 1 drift estimate; sign
/// convention matches the definition D_k = A_{t-k} - A_t).
DriftMatrix estimate_drift(const WeightMatrix& a_prev, const WeightMatrix& a_now);

/// First-order near-equilibrium solution and its regime diagnostics.
struct PerturbativeSolution {
    StateVector y;               // equilibrium_term + correction
    StateVector equilibrium_term;
    StateVector correction;      // A_t D z
    double second_order_magnitude; // |A_t^2 D z|_inf, truncated term, reported only
    double sigma_a;              // max singular value of A_t
    double sigma_d;              // max singular value of D
    bool slow_regime;            // sigma_d < sigma_a

    const char* regime_note() const {
        return slow_regime ? "" : "drift is not small against the weight matrix "
                                  "(sigma(D) >= sigma(A)); first-order correction "
                                  "may not improve on equilibrium";
    }
};

/// Perturbed equilibrium (I - A_t)^{-1} z + A_t D z for slowly drifting
/// weights. The correction keeps only the single first-order term; the
/// magnitude of the truncated A_t^2 D z term is reported for regime
/// checking but never added.
PerturbativeSolution perturbative(const WeightMatrix& a_t, const DriftMatrix& d,
                                  const StateVector& z);

/// Continuous-time analogue: fixed point of dy/dt = A y + z, i.e. the
/// solution of A x = -z. Stability (all eigenvalue real parts negative)
/// is reported, not enforced.
struct OdeFixedPoint {
    StateVector state;
    bool stable;
    double max_eig_real_part;
};

OdeFixedPoint ode_equilibrium(const DiffusionModel& model);

} // namespace netdiff

#endif
