#ifndef NETDIFF_NETWORK_HPP
#define NETDIFF_NETWORK_HPP

#include <cstdint>
#include <vector>

#include "netdiff/linalg.hpp"
#include "netdiff/rng.hpp"

namespace netdiff {

/// Directed binary graph on n vertices, zero diagonal. Stored row-major.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(int n);

    int size() const { return n_; }
    int dyad_count() const { return n_ * (n_ - 1); }

    bool at(int i, int j) const { return cells_[index(i, j)] != 0; }
    void set(int i, int j, bool value);

    long edge_count() const;

    /// Scales the 0/1 entries by alpha into a diffusion weight matrix.
    WeightMatrix to_weights(double alpha) const;

    bool operator==(const AdjacencyMatrix& other) const {
        return n_ == other.n_ && cells_ == other.cells_;
    }

    /// Maps a dyad index in [0, n(n-1)) to its off-diagonal cell, row-major
    /// with the diagonal skipped.
    std::pair<int, int> dyad_cell(long dyad) const;

private:
    std::size_t index(int i, int j) const;
    int n_;
    std::vector<std::uint8_t> cells_; // n*n, diagonal always 0
};

/// Ordered network cross-sections G_0 .. G_T plus the event-rate multiplier
/// that generated them (0 when not applicable).
struct NetworkSequence {
    std::vector<AdjacencyMatrix> graphs;
    double rate = 0.0;

    int size() const { return graphs.empty() ? 0 : graphs.front().size(); }
    long length() const { return static_cast<long>(graphs.size()); }
};

/// Stationary Bernoulli dyad-churn process. Each change event picks a
/// uniform off-diagonal dyad and resamples it to 1 with probability p, so
/// the independent-Bernoulli(p) graph distribution is exactly stationary
/// and events may churn without net change. The expected number of events
/// between consecutive cross-sections is the rate r (Poisson distributed).
struct ChurnProcess {
    int n;
    double p;      // stationary tie probability, in (0,1)
    double rate;   // expected change events per step, >= 0
    std::uint64_t seed;

    void validate() const;
};

/// One equilibrium draw: every off-diagonal entry independently 1 with
/// probability p. Deterministic given proc.seed.
AdjacencyMatrix sample_equilibrium_graph(const ChurnProcess& proc);

/// Evolves steps cross-sections beyond g0 (sequence length steps + 1).
NetworkSequence evolve(const ChurnProcess& proc, const AdjacencyMatrix& g0, long steps);

namespace detail {
/// A single churn event: resample one dyad to the given state. Changes at
/// most one edge. Exposed for unit tests with stubbed randomness.
void apply_event(AdjacencyMatrix& g, long dyad, bool value);
} // namespace detail

/// Number of off-diagonal cells where the two graphs differ.
long hamming_distance(const AdjacencyMatrix& g1, const AdjacencyMatrix& g2);

/// Pearson correlation over the n(n-1) off-diagonal cells. Throws
/// DomainError when either graph has zero variance (empty or complete),
/// where the correlation is undefined.
double graph_correlation(const AdjacencyMatrix& g1, const AdjacencyMatrix& g2);

/// Mean Hamming distance over consecutive cross-section pairs.
double mean_velocity(const NetworkSequence& seq);

} // namespace netdiff

#endif
