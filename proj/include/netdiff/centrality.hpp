#ifndef NETDIFF_CENTRALITY_HPP
#define NETDIFF_CENTRALITY_HPP

#include "netdiff/diffusion.hpp"
#include "netdiff/linalg.hpp"

namespace netdiff {

/// n x m actor-by-subgroup membership weights.
using MembershipMatrix = Eigen::MatrixXd;

/// n x p actor-by-covariate values.
using CovariateMatrix = Eigen::MatrixXd;

/// Katz score process: y_t = alpha W y_{t-1} + 1.
DiffusionModel katz(const WeightMatrix& w, double alpha);

/// Bonacich power process: y_t = beta W y_{t-1} + alpha W 1. The forcing
/// term is proportional to the outdegrees of W; beta may be negative.
DiffusionModel bonacich(const WeightMatrix& w, double alpha, double beta);

/// Salancik power process: y_t = A y_{t-1} + M s, with M s the intrinsic
/// importance of each node.
DiffusionModel salancik(const WeightMatrix& a, const MembershipMatrix& m,
                        const StateVector& s);

/// PageRank process: y_t = delta P y_{t-1} + (1 - delta) 1, delta in (0,1).
///
/// Score flows along edge direction: an edge j -> i passes a share of j's
/// score to i, so the weight matrix applies the row-normalized adjacency
/// transposed. Dangling vertices (zero out-rows) keep their row of P zero
/// rather than being redistributed uniformly -- this differs from common
/// search-engine practice but keeps delta P strictly contractive; a
/// dangling vertex simply passes nothing on.
DiffusionModel pagerank(const WeightMatrix& adjacency, double delta);

/// Friedkin-Johnsen influence process: y_t = S G y_{t-1} + (I - S) y_exo,
/// with S = diag(s_diag) the susceptibilities. Validates the F-J
/// conditions--entry ranges, row convexity, self-influence diagonal--and
/// reports every violated condition in one error.
DiffusionModel friedkin_johnsen(const WeightMatrix& g, const StateVector& s_diag,
                                const StateVector& y_exo);

/// Network-autocorrelation mean (I - rho W)^{-1} X beta, optionally with
/// the dynamics correction rho W D X beta added.
StateVector nar_mean(const WeightMatrix& w, double rho, const CovariateMatrix& x,
                     const StateVector& beta, const DriftMatrix* d = nullptr);

/// The correction term rho W D X beta alone; the additive bias incurred by
/// fitting the static mean when the network drifts.
StateVector nar_correction(const WeightMatrix& w, double rho, const CovariateMatrix& x,
                           const StateVector& beta, const DriftMatrix& d);

} // namespace netdiff

#endif
