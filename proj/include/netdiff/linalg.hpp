#ifndef NETDIFF_LINALG_HPP
#define NETDIFF_LINALG_HPP

#include <Eigen/Dense>

#include "netdiff/errors.hpp"

namespace netdiff {

/// Dense N x N matrix of diffusion weights. No symmetry or sign constraint:
/// attenuation parameters may be negative.
using WeightMatrix = Eigen::MatrixXd;

/// Length-N vector of vertex attributes or forcing inputs.
using StateVector = Eigen::VectorXd;

/// Per-step backward difference of the weight matrix.
using DriftMatrix = Eigen::MatrixXd;

namespace tol {
// Accuracy targets, fixed repo-wide. Edit here, not at call sites.
inline constexpr double spectral = 1e-8;        // eigenvalue / singular value
inline constexpr double resolvent_residual = 1e-10;  // relative to max(1, |z|_inf)
inline constexpr double fixed_point = 1e-9;     // |A y* + z - y*|_inf
inline constexpr double rcond_floor = 1e-14;    // below this (I-A) is treated as singular
} // namespace tol

void require_square(const WeightMatrix& a, const char* name);
void require_finite(const WeightMatrix& a, const char* name);
void require_finite(const StateVector& v, const char* name);
void require_matching(const WeightMatrix& a, const StateVector& v, const char* where);
void require_matching(const WeightMatrix& a, const WeightMatrix& b, const char* where);

/// Largest eigenvalue modulus of a general real square matrix. Complex
/// eigenvalue pairs of directed graphs are handled; the modulus is taken at
/// the end. Throws NonConvergenceError if the QR iteration fails.
double spectral_radius(const WeightMatrix& a);

/// Largest singular value. Always >= spectral_radius(a); this is the
/// contraction measure used for products of time-varying matrices.
double max_singular_value(const WeightMatrix& a);

/// Solves (I - A) x = z by LU with partial pivoting and verifies the
/// residual against tol::resolvent_residual. Throws SingularSystemError
/// (carrying the rcond estimate) when the system is singular or too
/// ill-conditioned to meet the residual contract.
StateVector solve_resolvent(const WeightMatrix& a, const StateVector& z);

/// (sum_{i=0}^{k} A^i) z by iterated multiply-accumulate; A^i is never
/// formed. Verification oracle for the resolvent and the k-truncated
/// diagnostics.
StateVector neumann_partial_sum(const WeightMatrix& a, const StateVector& z, long k);

} // namespace netdiff

#endif
