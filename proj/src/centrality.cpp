#include "netdiff/centrality.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace netdiff {

DiffusionModel katz(const WeightMatrix& w, double alpha) {
    require_square(w, "katz");
    require_finite(w, "katz");
    if (!(alpha > 0.0)) throw DomainError("katz: alpha must be > 0");
    return DiffusionModel(alpha * w, StateVector::Ones(w.rows()));
}

DiffusionModel bonacich(const WeightMatrix& w, double alpha, double beta) {
    require_square(w, "bonacich");
    require_finite(w, "bonacich");
    if (!(alpha > 0.0)) throw DomainError("bonacich: alpha must be > 0");
    if (!std::isfinite(beta)) throw DomainError("bonacich: beta must be finite");
    return DiffusionModel(beta * w, alpha * (w * StateVector::Ones(w.rows())));
}

DiffusionModel salancik(const WeightMatrix& a, const MembershipMatrix& m,
                        const StateVector& s) {
    require_square(a, "salancik");
    require_finite(a, "salancik");
    require_finite(m, "salancik");
    if (m.rows() != a.rows())
        throw DimensionError("salancik: membership matrix has " + std::to_string(m.rows()) +
                             " rows, expected " + std::to_string(a.rows()));
    if (m.cols() != s.size())
        throw DimensionError("salancik: importance vector has length " +
                             std::to_string(s.size()) + ", expected " +
                             std::to_string(m.cols()));
    require_finite(s, "salancik");
    return DiffusionModel(a, m * s);
}

DiffusionModel pagerank(const WeightMatrix& adjacency, double delta) {
    require_square(adjacency, "pagerank");
    require_finite(adjacency, "pagerank");
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("pagerank: delta must lie strictly in (0,1), got " +
                          std::to_string(delta));
    if ((adjacency.array() < 0.0).any())
        throw DomainError("pagerank: adjacency weights must be non-negative");

    const auto n = adjacency.rows();
    WeightMatrix a = WeightMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double out = adjacency.row(j).sum();
        if (out <= 0.0) continue; // dangling vertex: passes nothing on
        for (Eigen::Index i = 0; i < n; ++i)
            a(i, j) = delta * adjacency(j, i) / out;
    }
    return DiffusionModel(std::move(a), StateVector::Constant(n, 1.0 - delta));
}

DiffusionModel friedkin_johnsen(const WeightMatrix& g, const StateVector& s_diag,
                                const StateVector& y_exo) {
    require_square(g, "friedkin_johnsen");
    require_finite(g, "friedkin_johnsen");
    require_matching(g, s_diag, "friedkin_johnsen");
    require_matching(g, y_exo, "friedkin_johnsen");
    require_finite(s_diag, "friedkin_johnsen");
    require_finite(y_exo, "friedkin_johnsen");

    constexpr double check_tol = 1e-9;
    const auto n = g.rows();
    std::vector<std::string> violations;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s_diag(i) < -check_tol || s_diag(i) > 1.0 + check_tol)
            violations.push_back("susceptibility S[" + std::to_string(i) + "] = " +
                                 std::to_string(s_diag(i)) + " outside [0,1]");
        for (Eigen::Index j = 0; j < n; ++j)
            if (g(i, j) < -check_tol || g(i, j) > 1.0 + check_tol) {
                violations.push_back("influence weight G[" + std::to_string(i) + "][" +
                                     std::to_string(j) + "] = " + std::to_string(g(i, j)) +
                                     " outside [0,1]");
                break;
            }
        const double row_sum = g.row(i).sum();
        if (std::abs(row_sum - 1.0) > check_tol)
            violations.push_back("row " + std::to_string(i) + " of G sums to " +
                                 std::to_string(row_sum) + ", violating convexity");
        if (std::abs(g(i, i) - (1.0 - s_diag(i))) > check_tol)
            violations.push_back("self-influence G[" + std::to_string(i) + "][" +
                                 std::to_string(i) + "] = " + std::to_string(g(i, i)) +
                                 " != 1 - S[" + std::to_string(i) + "] = " +
                                 std::to_string(1.0 - s_diag(i)));
    }
    if (!violations.empty()) {
        std::string msg = "friedkin_johnsen: " + std::to_string(violations.size()) +
                          " condition violation(s):";
        for (const auto& v : violations) msg += "\n  - " + v;
        throw DomainError(msg);
    }

    WeightMatrix a = s_diag.asDiagonal() * g;
    StateVector z = (StateVector::Ones(n) - s_diag).cwiseProduct(y_exo);
    return DiffusionModel(std::move(a), std::move(z));
}

StateVector nar_correction(const WeightMatrix& w, double rho, const CovariateMatrix& x,
                           const StateVector& beta, const DriftMatrix& d) {
    require_square(w, "nar_correction");
    require_matching(w, d, "nar_correction");
    if (x.rows() != w.rows())
        throw DimensionError("nar_correction: covariate matrix has " +
                             std::to_string(x.rows()) + " rows, expected " +
                             std::to_string(w.rows()));
    if (x.cols() != beta.size())
        throw DimensionError("nar_correction: coefficient vector has length " +
                             std::to_string(beta.size()) + ", expected " +
                             std::to_string(x.cols()));
    return rho * (w * (d * (x * beta)));
}

StateVector nar_mean(const WeightMatrix& w, double rho, const CovariateMatrix& x,
                     const StateVector& beta, const DriftMatrix* d) {
    require_square(w, "nar_mean");
    require_finite(w, "nar_mean");
    if (!std::isfinite(rho)) throw DomainError("nar_mean: rho must be finite");
    if (x.rows() != w.rows())
        throw DimensionError("nar_mean: covariate matrix has " + std::to_string(x.rows()) +
                             " rows, expected " + std::to_string(w.rows()));
    if (x.cols() != beta.size())
        throw DimensionError("nar_mean: coefficient vector has length " +
                             std::to_string(beta.size()) + ", expected " +
                             std::to_string(x.cols()));
    require_finite(x, "nar_mean");
    require_finite(beta, "nar_mean");

    StateVector mean = solve_resolvent(rho * w, x * beta);
    if (d) mean += nar_correction(w, rho, x, beta, *d);
    return mean;
}

} // namespace netdiff
