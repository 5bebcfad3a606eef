#ifndef NETDIFF_TESTS_HELPERS_HPP
#define NETDIFF_TESTS_HELPERS_HPP

#include <Eigen/Dense>

#include "netdiff/linalg.hpp"
#include "netdiff/rng.hpp"

namespace testutil {

inline Eigen::MatrixXd random_matrix(netdiff::Rng& rng, int rows, int cols, double lo = -1.0,
                                     double hi = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * rng.uniform();
    return m;
}

inline Eigen::VectorXd random_vector(netdiff::Rng& rng, int n, double lo = -1.0,
                                     double hi = 1.0) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * rng.uniform();
    return v;
}

/// Random square matrix rescaled so its largest singular value equals
/// sigma_target exactly (up to the SVD's own accuracy).
inline Eigen::MatrixXd random_with_sigma(netdiff::Rng& rng, int n, double sigma_target) {
    Eigen::MatrixXd m = random_matrix(rng, n, n);
    const double sigma = netdiff::max_singular_value(m);
    if (sigma > 0.0) m *= sigma_target / sigma;
    return m;
}

/// Independent fixed-point oracle: iterates y <- A y + z from y = z until
/// the update stalls. Deliberately avoids any factorization.
inline Eigen::VectorXd iterate_to_fixed_point(const Eigen::MatrixXd& a,
                                              const Eigen::VectorXd& z,
                                              double tol = 1e-13,
                                              long max_iter = 200000) {
    Eigen::VectorXd y = z;
    for (long i = 0; i < max_iter; ++i) {
        Eigen::VectorXd next = a * y + z;
        const double delta = (next - y).lpNorm<Eigen::Infinity>();
        y.swap(next);
        if (delta < tol) return y;
    }
    return y;
}

/// A^t y by repeated multiply-accumulate.
inline Eigen::VectorXd power_apply(const Eigen::MatrixXd& a, long t,
                                   const Eigen::VectorXd& y) {
    Eigen::VectorXd out = y;
    for (long i = 0; i < t; ++i) out = a * out;
    return out;
}

} // namespace testutil

#endif
