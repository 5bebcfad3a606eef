#include "netdiff/network.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace netdiff {

namespace {
// Sub-stream tags so each operation on a process owns an independent stream.
constexpr std::uint64_t kSampleDomain = 0xA11CE;
constexpr std::uint64_t kEvolveDomain = 0xE701E;
} // namespace

AdjacencyMatrix::AdjacencyMatrix(int n) : n_(n) {
    if (n < 1) throw DomainError("AdjacencyMatrix: vertex count must be >= 1");
    cells_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

std::size_t AdjacencyMatrix::index(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw DimensionError("AdjacencyMatrix: cell (" + std::to_string(i) + "," +
                             std::to_string(j) + ") out of range for n=" + std::to_string(n_));
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
}

void AdjacencyMatrix::set(int i, int j, bool value) {
    if (i == j) {
        if (value) throw DomainError("AdjacencyMatrix: diagonal must stay zero");
        return;
    }
    cells_[index(i, j)] = value ? 1 : 0;
}

long AdjacencyMatrix::edge_count() const {
    long count = 0;
    for (const auto c : cells_) count += c;
    return count;
}

WeightMatrix AdjacencyMatrix::to_weights(double alpha) const {
    WeightMatrix w(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            w(i, j) = at(i, j) ? alpha : 0.0;
    return w;
}

std::pair<int, int> AdjacencyMatrix::dyad_cell(long dyad) const {
    if (dyad < 0 || dyad >= dyad_count())
        throw DomainError("AdjacencyMatrix: dyad index out of range");
    const int i = static_cast<int>(dyad / (n_ - 1));
    const int r = static_cast<int>(dyad % (n_ - 1));
    return {i, r + (r >= i ? 1 : 0)};
}

void ChurnProcess::validate() const {
    if (n < 1) throw DomainError("ChurnProcess: n must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("ChurnProcess: p must be in (0,1)");
    if (!(rate >= 0.0)) throw DomainError("ChurnProcess: rate must be >= 0");
}

AdjacencyMatrix sample_equilibrium_graph(const ChurnProcess& proc) {
    proc.validate();
    Rng rng(derive_seed(proc.seed, kSampleDomain));
    AdjacencyMatrix g(proc.n);
    for (int i = 0; i < proc.n; ++i)
        for (int j = 0; j < proc.n; ++j)
            if (i != j && rng.bernoulli(proc.p)) g.set(i, j, true);
    return g;
}

namespace detail {
void apply_event(AdjacencyMatrix& g, long dyad, bool value) {
    const auto [i, j] = g.dyad_cell(dyad);
    g.set(i, j, value);
}
} // namespace detail

NetworkSequence evolve(const ChurnProcess& proc, const AdjacencyMatrix& g0, long steps) {
    proc.validate();
    if (g0.size() != proc.n)
        throw DimensionError("evolve: initial graph has n=" + std::to_string(g0.size()) +
                             " but the process expects n=" + std::to_string(proc.n));
    if (steps < 1) throw DomainError("evolve: steps must be >= 1");

    Rng rng(derive_seed(proc.seed, kEvolveDomain));
    NetworkSequence seq;
    seq.rate = proc.rate;
    seq.graphs.reserve(static_cast<std::size_t>(steps) + 1);
    seq.graphs.push_back(g0);
    const long dyads = g0.dyad_count();
    for (long s = 0; s < steps; ++s) {
        AdjacencyMatrix g = seq.graphs.back();
        const long events = rng.poisson(proc.rate);
        for (long e = 0; e < events; ++e) {
            const long dyad = static_cast<long>(rng.uniform_below(static_cast<std::uint64_t>(dyads)));
            detail::apply_event(g, dyad, rng.bernoulli(proc.p));
        }
        seq.graphs.push_back(std::move(g));
    }
    return seq;
}

long hamming_distance(const AdjacencyMatrix& g1, const AdjacencyMatrix& g2) {
    if (g1.size() != g2.size())
        throw DimensionError("hamming_distance: graph sizes differ");
    long count = 0;
    const int n = g1.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && g1.at(i, j) != g2.at(i, j)) ++count;
    return count;
}

double graph_correlation(const AdjacencyMatrix& g1, const AdjacencyMatrix& g2) {
    if (g1.size() != g2.size())
        throw DimensionError("graph_correlation: graph sizes differ");
    const int n = g1.size();
    const double m = g1.dyad_count();

    const double e1 = static_cast<double>(g1.edge_count());
    const double e2 = static_cast<double>(g2.edge_count());
    // For 0/1 cells: var = e/m - (e/m)^2, cov = e12/m - (e1/m)(e2/m).
    const double var1 = e1 / m - (e1 / m) * (e1 / m);
    const double var2 = e2 / m - (e2 / m) * (e2 / m);
    if (var1 <= 0.0 || var2 <= 0.0)
        throw DomainError("graph_correlation: a graph with constant off-diagonal cells has "
                          "no defined correlation");

    long both = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && g1.at(i, j) && g2.at(i, j)) ++both;
    const double cov = static_cast<double>(both) / m - (e1 / m) * (e2 / m);
    return cov / std::sqrt(var1 * var2);
}

double mean_velocity(const NetworkSequence& seq) {
    if (seq.length() < 2)
        throw DomainError("mean_velocity: need at least two cross-sections");
    long total = 0;
    for (std::size_t i = 1; i < seq.graphs.size(); ++i)
        total += hamming_distance(seq.graphs[i - 1], seq.graphs[i]);
    return static_cast<double>(total) / static_cast<double>(seq.length() - 1);
}

} // namespace netdiff
