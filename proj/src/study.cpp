#include "netdiff/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "netdiff/diffusion.hpp"
#include "netdiff/io.hpp"

namespace netdiff {

namespace {
constexpr std::uint64_t kSeedGraphDomain = 0x5EEDC4AF;
constexpr std::uint64_t kEvolveDomain = 0xC4A1B2;
constexpr std::uint64_t kForcingDomain = 0xF04C17;
} // namespace

void StudyConfig::validate() const {
    if (n < 2) throw DomainError("study config: n must be >= 2");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("study config: p must be in (0,1)");
    if (rates.empty()) throw DomainError("study config: rates must be nonempty");
    for (const double r : rates)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw DomainError("study config: rates must be finite and >= 0");
    if (replicates < 1) throw DomainError("study config: replicates must be >= 1");
    // The perturbative drift estimate needs two distinct final graphs.
    if (steps < 2) throw DomainError("study config: steps must be >= 2");
    if (fixed_alpha && !(*fixed_alpha > 0.0))
        throw DomainError("study config: alpha must be > 0");
}

double calibrate_alpha(const std::vector<AdjacencyMatrix>& sample) {
    if (sample.empty()) throw DomainError("calibrate_alpha: empty sample");
    double rho_m = 0.0;
    for (const auto& g : sample)
        rho_m = std::max(rho_m, spectral_radius(g.to_weights(1.0)));
    if (rho_m <= 0.0)
        throw DomainError("calibrate_alpha: every sampled graph has spectral radius 0; "
                          "cannot set a finite attenuation");
    return 1.0 / (2.0 * rho_m);
}

AdjacencyMatrix replicate_seed_graph(const StudyConfig& config, int replicate) {
    ChurnProcess proc{config.n, config.p, 0.0,
                      derive_seed(config.base_seed, kSeedGraphDomain,
                                  static_cast<std::uint64_t>(replicate))};
    return sample_equilibrium_graph(proc);
}

ResolvedStudy resolve_study(const StudyConfig& config) {
    config.validate();
    ResolvedStudy resolved;

    if (config.fixed_alpha) {
        resolved.alpha = *config.fixed_alpha;
    } else {
        std::vector<AdjacencyMatrix> sample;
        sample.reserve(static_cast<std::size_t>(config.replicates));
        for (int r = 0; r < config.replicates; ++r)
            sample.push_back(replicate_seed_graph(config, r));
        resolved.alpha = calibrate_alpha(sample);
    }

    if (config.forcing_path.empty()) {
        Rng rng(derive_seed(config.base_seed, kForcingDomain));
        resolved.forcing = StateVector(config.n);
        for (int i = 0; i < config.n; ++i) resolved.forcing(i) = rng.uniform();
    } else {
        resolved.forcing = load_vector_file(config.forcing_path);
        if (resolved.forcing.size() != config.n)
            throw DimensionError("study config: forcing vector has length " +
                                 std::to_string(resolved.forcing.size()) + " but n = " +
                                 std::to_string(config.n));
    }
    return resolved;
}

double rmse(const StateVector& estimate, const StateVector& truth) {
    if (estimate.size() != truth.size())
        throw DimensionError("rmse: vector lengths differ");
    if (estimate.size() == 0) throw DomainError("rmse: empty vectors");
    return std::sqrt((estimate - truth).squaredNorm() /
                     static_cast<double>(estimate.size()));
}

StudyResult run_replicate(const StudyConfig& config, const ResolvedStudy& resolved,
                          double rate, int rate_index, int replicate) {
    const AdjacencyMatrix g0 = replicate_seed_graph(config, replicate);
    ChurnProcess proc{config.n, config.p, rate,
                      derive_seed(config.base_seed, kEvolveDomain,
                                  static_cast<std::uint64_t>(rate_index),
                                  static_cast<std::uint64_t>(replicate))};
    const NetworkSequence seq = evolve(proc, g0, config.steps);

    // Exact final state: the dynamic recurrence y_t = alpha G_t y_{t-1} + f
    // over the cross-sections after the seed, started at y_0 = f.
    const StateVector& f = resolved.forcing;
    std::vector<WeightMatrix> weights;
    weights.reserve(static_cast<std::size_t>(config.steps));
    for (long t = 1; t <= config.steps; ++t)
        weights.push_back(seq.graphs[static_cast<std::size_t>(t)].to_weights(resolved.alpha));
    const StateVector y_exact = run_dynamic(weights, f, f).final_state();

    // Equilibrium approximation on the final graph, ignoring dynamics.
    const DiffusionModel final_model(weights.back(), f);
    const StateVector y_eq = equilibrium(final_model);

    // Perturbative approximation with the one-step drift estimate.
    const DriftMatrix d = estimate_drift(weights[weights.size() - 2], weights.back());
    const StateVector y_pert = solve_resolvent(weights.back(), f) + weights.back() * (d * f);

    StudyResult result;
    result.rate = rate;
    result.replicate = replicate;
    result.hamming_velocity = mean_velocity(seq);
    result.rmse_equilibrium = rmse(y_eq, y_exact);
    result.rmse_perturbative = rmse(y_pert, y_exact);

    // Mean correlation over consecutive pairs, skipping undefined ones
    // (constant graphs); NaN when no pair is defined.
    double corr_sum = 0.0;
    long corr_count = 0;
    for (std::size_t i = 1; i < seq.graphs.size(); ++i) {
        try {
            corr_sum += graph_correlation(seq.graphs[i - 1], seq.graphs[i]);
            ++corr_count;
        } catch (const DomainError&) {
        }
    }
    result.graph_correlation =
        corr_count > 0 ? corr_sum / static_cast<double>(corr_count)
                       : std::numeric_limits<double>::quiet_NaN();
    return result;
}

StudyResult run_replicate(const StudyConfig& config, double rate, int replicate) {
    const auto it = std::find(config.rates.begin(), config.rates.end(), rate);
    if (it == config.rates.end())
        throw DomainError("run_replicate: rate is not one of the configured bins");
    return run_replicate(config, resolve_study(config),
                         rate, static_cast<int>(it - config.rates.begin()), replicate);
}

StudyOutput run_study(const StudyConfig& config, int threads) {
    const ResolvedStudy resolved = resolve_study(config);

    std::vector<double> rates = config.rates;
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    struct Slot {
        std::optional<StudyResult> result;
        std::string abort_reason;
    };
    const std::size_t jobs = rates.size() * static_cast<std::size_t>(config.replicates);
    std::vector<Slot> slots(jobs);

    // Each job owns its random streams (derived from seed, rate index and
    // replicate index) and writes only its own slot, so the output is
    // independent of scheduling and thread count.
    //
    // Rate indices for stream derivation refer to the caller's rate order so
    // that reordering the config's rate list relabels, never changes, the
    // per-rate randomness.
    std::vector<int> stream_index(rates.size());
    for (std::size_t k = 0; k < rates.size(); ++k) {
        const auto it = std::find(config.rates.begin(), config.rates.end(), rates[k]);
        stream_index[k] = static_cast<int>(it - config.rates.begin());
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t job = next.fetch_add(1);
            if (job >= jobs) return;
            const std::size_t rate_pos = job / static_cast<std::size_t>(config.replicates);
            const int replicate = static_cast<int>(job % static_cast<std::size_t>(config.replicates));
            try {
                slots[job].result = run_replicate(config, resolved, rates[rate_pos],
                                                  stream_index[rate_pos], replicate);
            } catch (const Error& e) {
                slots[job].abort_reason = e.what();
            }
        }
    };

    int worker_count = threads > 0 ? threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (worker_count < 1) worker_count = 1;
    worker_count = std::min<int>(worker_count, static_cast<int>(jobs));
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(worker_count));
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    StudyOutput output;
    output.results.reserve(jobs);
    for (std::size_t rate_pos = 0; rate_pos < rates.size(); ++rate_pos) {
        long ok = 0;
        for (int rep = 0; rep < config.replicates; ++rep) {
            const std::size_t job =
                rate_pos * static_cast<std::size_t>(config.replicates) +
                static_cast<std::size_t>(rep);
            if (slots[job].result) {
                output.results.push_back(*slots[job].result);
                ++ok;
            } else {
                ++output.aborted;
                output.abort_log.push_back("rate " + format_double(rates[rate_pos]) +
                                           " replicate " + std::to_string(rep) + ": " +
                                           slots[job].abort_reason);
            }
        }
        if (ok == 0)
            throw DomainError("run_study: every replicate at rate " +
                              format_double(rates[rate_pos]) + " aborted; first cause: " +
                              slots[rate_pos * static_cast<std::size_t>(config.replicates)]
                                  .abort_reason);
    }
    return output;
}

std::vector<RateSummary> summarize(const std::vector<StudyResult>& results) {
    if (results.empty()) throw DomainError("summarize: no results");

    std::vector<double> rates;
    for (const auto& r : results) rates.push_back(r.rate);
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    std::vector<RateSummary> summaries;
    summaries.reserve(rates.size());
    for (const double rate : rates) {
        RateSummary s;
        s.rate = rate;
        double vel = 0.0, eq = 0.0, pert = 0.0;
        for (const auto& r : results) {
            if (r.rate != rate) continue;
            ++s.count;
            vel += r.hamming_velocity;
            eq += r.rmse_equilibrium;
            pert += r.rmse_perturbative;
        }
        const auto count = static_cast<double>(s.count);
        s.mean_velocity = vel / count;
        s.mean_rmse_eq = eq / count;
        s.mean_rmse_pert = pert / count;
        if (s.count >= 2) {
            double ss_eq = 0.0, ss_pert = 0.0;
            for (const auto& r : results) {
                if (r.rate != rate) continue;
                ss_eq += (r.rmse_equilibrium - s.mean_rmse_eq) *
                         (r.rmse_equilibrium - s.mean_rmse_eq);
                ss_pert += (r.rmse_perturbative - s.mean_rmse_pert) *
                           (r.rmse_perturbative - s.mean_rmse_pert);
            }
            const double scale = 1.96 / std::sqrt(count);
            s.ci95_eq = scale * std::sqrt(ss_eq / (count - 1.0));
            s.ci95_pert = scale * std::sqrt(ss_pert / (count - 1.0));
        }
        summaries.push_back(std::move(s));
    }
    return summaries;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_csv_double(const std::string& field, const std::string& name, long line) {
    if (field == "nan" || field == "-nan")
        return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(name + ": expected a number, got '" + field + "'", line);
    }
}

} // namespace

void write_results_csv(std::ostream& out, const std::vector<StudyResult>& results) {
    out << "rate,replicate,hamming_velocity,graph_correlation,"
           "rmse_equilibrium,rmse_perturbative\n";
    for (const auto& r : results) {
        out << format_double(r.rate) << ',' << r.replicate << ','
            << format_double(r.hamming_velocity) << ','
            << (std::isnan(r.graph_correlation) ? "nan"
                                                : format_double(r.graph_correlation))
            << ',' << format_double(r.rmse_equilibrium) << ','
            << format_double(r.rmse_perturbative) << '\n';
    }
}

std::vector<StudyResult> read_results_csv(std::istream& in, const std::string& name) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError(name + ": empty results file", 0);
    ++line_no;
    if (split_csv_line(line) !=
        std::vector<std::string>{"rate", "replicate", "hamming_velocity",
                                 "graph_correlation", "rmse_equilibrium",
                                 "rmse_perturbative"})
        throw ParseError(name + ": unexpected results header '" + line + "'", line_no);

    std::vector<StudyResult> results;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw ParseError(name + ": expected 6 fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        StudyResult r;
        r.rate = parse_csv_double(fields[0], name, line_no);
        r.replicate = static_cast<int>(parse_csv_double(fields[1], name, line_no));
        r.hamming_velocity = parse_csv_double(fields[2], name, line_no);
        r.graph_correlation = parse_csv_double(fields[3], name, line_no);
        r.rmse_equilibrium = parse_csv_double(fields[4], name, line_no);
        r.rmse_perturbative = parse_csv_double(fields[5], name, line_no);
        results.push_back(r);
    }
    return results;
}

void write_summary_csv(std::ostream& out, const std::vector<RateSummary>& summaries) {
    out << "rate,mean_velocity,mean_rmse_eq,ci95_eq,mean_rmse_pert,ci95_pert\n";
    for (const auto& s : summaries) {
        out << format_double(s.rate) << ',' << format_double(s.mean_velocity) << ','
            << format_double(s.mean_rmse_eq) << ','
            << (s.ci95_eq ? format_double(*s.ci95_eq) : "") << ','
            << format_double(s.mean_rmse_pert) << ','
            << (s.ci95_pert ? format_double(*s.ci95_pert) : "") << '\n';
    }
}

std::vector<RateSummary> read_summary_csv(std::istream& in, const std::string& name) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError(name + ": empty summary file", 0);
    ++line_no;
    if (split_csv_line(line) !=
        std::vector<std::string>{"rate", "mean_velocity", "mean_rmse_eq", "ci95_eq",
                                 "mean_rmse_pert", "ci95_pert"})
        throw ParseError(name + ": unexpected summary header '" + line + "'", line_no);

    std::vector<RateSummary> summaries;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6)
            throw ParseError(name + ": expected 6 fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        RateSummary s;
        s.rate = parse_csv_double(fields[0], name, line_no);
        s.mean_velocity = parse_csv_double(fields[1], name, line_no);
        s.mean_rmse_eq = parse_csv_double(fields[2], name, line_no);
        if (!fields[3].empty()) s.ci95_eq = parse_csv_double(fields[3], name, line_no);
        s.mean_rmse_pert = parse_csv_double(fields[4], name, line_no);
        if (!fields[5].empty()) s.ci95_pert = parse_csv_double(fields[5], name, line_no);
        summaries.push_back(s);
    }
    return summaries;
}

StudyConfig parse_config_json(const std::string& text, const std::string& name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ParseError(name + ": config must be a JSON object");

    StudyConfig config;
    try {
        config.n = doc.at("n").get<int>();
        config.p = doc.at("p").get<double>();
        config.rates = doc.at("rates").get<std::vector<double>>();
        config.replicates = doc.at("replicates").get<int>();
        if (doc.contains("steps")) config.steps = doc.at("steps").get<int>();
        if (doc.contains("seed")) config.base_seed = doc.at("seed").get<std::uint64_t>();

        const auto& alpha = doc.at("alpha");
        if (alpha.is_string()) {
            if (alpha.get<std::string>() != "calibrate")
                throw ParseError(name + ": alpha must be a number or \"calibrate\"");
        } else {
            config.fixed_alpha = alpha.get<double>();
        }

        const auto& forcing = doc.at("forcing");
        if (!forcing.is_string())
            throw ParseError(name + ": forcing must be \"uniform\" or a file path");
        if (const auto s = forcing.get<std::string>(); s != "uniform")
            config.forcing_path = s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(name + ": " + e.what());
    }
    config.validate();
    return config;
}

} // namespace netdiff
