#ifndef NETDIFF_STUDY_HPP
#define NETDIFF_STUDY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netdiff/linalg.hpp"
#include "netdiff/network.hpp"

namespace netdiff {

/// Full description of one approximation study: seed equilibrium graphs,
/// evolve churning sequences at each event rate, run the exact dynamics,
/// and score the equilibrium and perturbative final-state approximations.
struct StudyConfig {
    int n = 36;
    double p = 0.1;                 // stationary tie probability
    std::vector<double> rates;      // event-rate multipliers, one bin each
    int replicates = 250;
    int steps = 20;                 // network cross-sections beyond the seed

    // Attenuation: a fixed value, or calibrated as 1/(2 rho_m) over the
    // replicate seed graphs so every seeded model satisfies rho(alpha G) <= 1/2.
    std::optional<double> fixed_alpha; // empty = calibrate

    // Forcing vector source; doubles as the initial state y_0. Empty path =
    // synthetic i.i.d. uniform[0,1] entries drawn from the study seed.
    std::string forcing_path;

    std::uint64_t base_seed = 0;

    void validate() const;
};

/// One replicate's outcome at one rate.
struct StudyResult {
    double rate = 0.0;
    int replicate = 0;
    double hamming_velocity = 0.0;
    double graph_correlation = 0.0; // NaN if undefined for every pair
    double rmse_equilibrium = 0.0;
    double rmse_perturbative = 0.0;
};

/// Per-rate aggregate; 95% confidence half-widths are absent for bins with
/// fewer than two results.
struct RateSummary {
    double rate = 0.0;
    long count = 0;
    double mean_velocity = 0.0;
    double mean_rmse_eq = 0.0;
    double mean_rmse_pert = 0.0;
    std::optional<double> ci95_eq;
    std::optional<double> ci95_pert;
};

struct StudyOutput {
    std::vector<StudyResult> results; // rate-major, replicate-minor
    long aborted = 0;
    std::vector<std::string> abort_log;
};

/// 1/(2 rho_m) over the sample's spectral radii. Fails when every graph is
/// empty (rho_m = 0).
double calibrate_alpha(const std::vector<AdjacencyMatrix>& sample);

/// Inputs shared by every replicate, resolved once per study: the
/// attenuation and the forcing vector. Deterministic in the config.
struct ResolvedStudy {
    double alpha = 0.0;
    StateVector forcing;
};

ResolvedStudy resolve_study(const StudyConfig& config);

/// The replicate seed graph, a function of (base_seed, replicate) only:
/// every rate reuses the same equilibrium draw, mirroring one time series
/// per rate per draw.
AdjacencyMatrix replicate_seed_graph(const StudyConfig& config, int replicate);

/// Runs one replicate at one rate. Aborts (by throwing) when the realized
/// final graph yields a divergent or singular model.
StudyResult run_replicate(const StudyConfig& config, const ResolvedStudy& resolved,
                          double rate, int rate_index, int replicate);

/// Convenience overload resolving the study inputs on the fly.
StudyResult run_replicate(const StudyConfig& config, double rate, int replicate);

/// Runs every (rate, replicate) job, optionally across threads. Output
/// ordering is deterministic (rates ascending, replicates ascending)
/// regardless of thread count; aborted replicates are excluded and
/// counted. Throws when every replicate at some rate aborts.
StudyOutput run_study(const StudyConfig& config, int threads = 0);

double rmse(const StateVector& estimate, const StateVector& truth);

/// Per-rate means with normal-approximation 95% confidence half-widths
/// 1.96 sd / sqrt(count), rates ascending.
std::vector<RateSummary> summarize(const std::vector<StudyResult>& results);

// CSV surfaces. Headers are required; '.' decimal separator, '\n' endings.
// results:  rate,replicate,hamming_velocity,graph_correlation,
//           rmse_equilibrium,rmse_perturbative
// summary:  rate,mean_velocity,mean_rmse_eq,ci95_eq,mean_rmse_pert,ci95_pert
//           (missing confidence half-widths are empty fields)
void write_results_csv(std::ostream& out, const std::vector<StudyResult>& results);
std::vector<StudyResult> read_results_csv(std::istream& in, const std::string& name);
void write_summary_csv(std::ostream& out, const std::vector<RateSummary>& summaries);
std::vector<RateSummary> read_summary_csv(std::istream& in, const std::string& name);

/// Parses the JSON study config: keys n, p, rates, replicates, steps,
/// alpha (number or "calibrate"), forcing ("uniform" or a file path), seed.
StudyConfig parse_config_json(const std::string& text, const std::string& name);

} // namespace netdiff

#endif
