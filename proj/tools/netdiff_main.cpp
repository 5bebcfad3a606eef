// netdiff -- forced linear diffusion on static and dynamic networks.
//
// Subcommands: equilibrium, perturb, simulate, centrality, experiment,
// velocity. Exit codes: 0 success, 1 usage error, 2 data/parse error,
// 3 numerical failure; failures print one line "ERROR <code>: <message>"
// to stderr.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netdiff/centrality.hpp"
#include "netdiff/diffusion.hpp"
#include "netdiff/io.hpp"
#include "netdiff/linalg.hpp"
#include "netdiff/network.hpp"
#include "netdiff/plot.hpp"
#include "netdiff/study.hpp"

namespace {

using namespace netdiff;

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ';');
    return msg;
}

[[noreturn]] void fail(int code, const std::string& msg) {
    std::cerr << "ERROR " << code << ": " << one_line(msg) << "\n";
    std::exit(code);
}

struct Options {
    std::vector<std::string> inputs;
    std::string output;
    std::string forcing;
    std::string y0;
    std::string susceptibility;
    std::string membership;
    std::string importance;
    std::string covariates;
    std::string coeffs;
    std::string drift;
    std::string config;
    std::string summary;
    std::string plot;
    std::string model;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<double> rho;
    std::optional<double> rate;
    std::optional<long> steps;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool dry_run = false;
    bool allow_nonconvergent = false;
};

StateVector forcing_or_fail(const Options& opt) {
    if (opt.forcing.empty()) throw UsageError("--forcing is required for this subcommand");
    return load_vector_file(opt.forcing);
}

void report_spectra(const WeightMatrix& a) {
    std::cout << "rho(A) = " << format_double(spectral_radius(a))
              << "\nsigma_max(A) = " << format_double(max_singular_value(a)) << "\n";
}

int cmd_equilibrium(const Options& opt) {
    const WeightMatrix a = load_matrix_file(opt.inputs.at(0));
    require_square(a, "equilibrium input");
    const StateVector z = forcing_or_fail(opt);
    const DiffusionModel model(a, z);
    report_spectra(a);
    const StateVector y = equilibrium(model, opt.allow_nonconvergent);
    save_vector_file(opt.output, y);
    std::cout << "wrote equilibrium state (n = " << y.size() << ") to " << opt.output
              << "\n";
    return 0;
}

int cmd_perturb(const Options& opt) {
    if (opt.inputs.size() != 2)
        throw UsageError("perturb needs two --input matrices: A_prev then A_now");
    const WeightMatrix a_prev = load_matrix_file(opt.inputs[0]);
    const WeightMatrix a_now = load_matrix_file(opt.inputs[1]);
    require_square(a_now, "perturb input");
    const StateVector z = forcing_or_fail(opt);

    const DriftMatrix d = estimate_drift(a_prev, a_now);
    const PerturbativeSolution sol = perturbative(a_now, d, z);
    std::cout << "sigma_max(A_now) = " << format_double(sol.sigma_a)
              << "\nsigma_max(D) = " << format_double(sol.sigma_d)
              << "\n|correction|_inf = "
              << format_double(sol.correction.lpNorm<Eigen::Infinity>())
              << "\n|truncated A^2 D z|_inf = "
              << format_double(sol.second_order_magnitude) << "\n";
    if (!sol.slow_regime) std::cout << "warning: " << sol.regime_note() << "\n";
    save_vector_file(opt.output, sol.y);
    std::cout << "wrote perturbative state (n = " << sol.y.size() << ") to " << opt.output
              << "\n";
    return 0;
}

int cmd_simulate(const Options& opt) {
    const NetworkSequence seq = load_sequence_file(opt.inputs.at(0));
    const StateVector z = forcing_or_fail(opt);
    const StateVector y0 = opt.y0.empty() ? z : load_vector_file(opt.y0);
    if (!opt.alpha) throw UsageError("simulate needs --alpha to scale the binary graphs");

    std::vector<WeightMatrix> weights;
    weights.reserve(seq.graphs.size());
    for (const auto& g : seq.graphs) weights.push_back(g.to_weights(*opt.alpha));
    const Trajectory traj = run_dynamic(weights, z, y0);
    save_trajectory_file(opt.output, traj);
    std::cout << "wrote trajectory (n = " << seq.size() << ", steps = "
              << traj.step_count() << ") to " << opt.output << "\n";
    return 0;
}

int cmd_centrality(const Options& opt) {
    const WeightMatrix w = load_matrix_file(opt.inputs.at(0));
    require_square(w, "centrality input");

    if (opt.model == "nar") {
        if (opt.covariates.empty() || opt.coeffs.empty() || !opt.rho)
            throw UsageError("nar needs --rho, --covariates and --coeffs");
        const CovariateMatrix x = load_matrix_file(opt.covariates);
        const StateVector beta = load_vector_file(opt.coeffs);
        StateVector scores;
        if (opt.drift.empty()) {
            scores = nar_mean(w, *opt.rho, x, beta);
        } else {
            const DriftMatrix d = load_matrix_file(opt.drift);
            scores = nar_mean(w, *opt.rho, x, beta, &d);
            std::cout << "|drift correction|_inf = "
                      << format_double(
                             nar_correction(w, *opt.rho, x, beta, d).lpNorm<Eigen::Infinity>())
                      << "\n";
        }
        save_vector_file(opt.output, scores);
        std::cout << "wrote nar mean (n = " << scores.size() << ") to " << opt.output
                  << "\n";
        return 0;
    }

    std::optional<DiffusionModel> model;
    if (opt.model == "katz") {
        if (!opt.alpha) throw UsageError("katz needs --alpha");
        model = katz(w, *opt.alpha);
    } else if (opt.model == "bonacich") {
        if (!opt.alpha || !opt.beta) throw UsageError("bonacich needs --alpha and --beta");
        model = bonacich(w, *opt.alpha, *opt.beta);
    } else if (opt.model == "pagerank") {
        if (!opt.delta) throw UsageError("pagerank needs --delta");
        model = pagerank(w, *opt.delta);
    } else if (opt.model == "fj") {
        if (opt.susceptibility.empty() || opt.forcing.empty())
            throw UsageError("fj needs --susceptibility and --forcing (the exogenous "
                             "attitude vector)");
        model = friedkin_johnsen(w, load_vector_file(opt.susceptibility),
                                 load_vector_file(opt.forcing));
    } else if (opt.model == "salancik") {
        if (opt.membership.empty() || opt.importance.empty())
            throw UsageError("salancik needs --membership and --importance");
        model = salancik(w, load_matrix_file(opt.membership),
                         load_vector_file(opt.importance));
    } else {
        throw UsageError("unknown model '" + opt.model +
                         "' (expected katz|bonacich|pagerank|fj|salancik|nar)");
    }

    report_spectra(model->a);
    const StateVector scores = equilibrium(*model, opt.allow_nonconvergent);
    save_vector_file(opt.output, scores);
    std::cout << "wrote " << opt.model << " scores (n = " << scores.size() << ") to "
              << opt.output << "\n";
    return 0;
}

int cmd_experiment(const Options& opt) {
    std::ifstream in(opt.config);
    if (!in) throw ParseError("cannot open config '" + opt.config + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    StudyConfig config = parse_config_json(buffer.str(), opt.config);

    // Reproducibility over convenience: the CLI seed is mandatory and wins
    // over any seed recorded in the config file.
    config.base_seed = *opt.seed;
    if (opt.steps) config.steps = static_cast<int>(*opt.steps);
    config.validate();

    const std::size_t jobs = config.rates.size() * static_cast<std::size_t>(config.replicates);
    if (opt.dry_run) {
        std::cout << "dry run: " << config.rates.size() << " rates x "
                  << config.replicates << " replicates = " << jobs
                  << " planned jobs (n = " << config.n << ", steps = " << config.steps
                  << ")\n";
        return 0;
    }
    if (opt.output.empty()) throw UsageError("experiment needs --output for the results CSV");

    const StudyOutput output = run_study(config, opt.threads);
    {
        std::ofstream out(opt.output);
        if (!out) throw ParseError("cannot open '" + opt.output + "' for writing");
        write_results_csv(out, output.results);
    }

    const auto summaries = summarize(output.results);
    std::string summary_path = opt.summary;
    if (summary_path.empty()) {
        summary_path = opt.output;
        const auto dot = summary_path.rfind(".csv");
        if (dot != std::string::npos && dot == summary_path.size() - 4)
            summary_path.resize(dot);
        summary_path += "_summary.csv";
    }
    {
        std::ofstream out(summary_path);
        if (!out) throw ParseError("cannot open '" + summary_path + "' for writing");
        write_summary_csv(out, summaries);
    }

    std::cout << "rate\tmean_velocity\tmean_rmse_eq\tmean_rmse_pert\n";
    for (const auto& s : summaries)
        std::cout << s.rate << '\t' << s.mean_velocity << '\t' << s.mean_rmse_eq << '\t'
                  << s.mean_rmse_pert << "\n";
    if (output.aborted > 0)
        std::cerr << "note: " << output.aborted << " replicate(s) aborted and were "
                  << "excluded from summaries\n";
    std::cout << "wrote " << output.results.size() << " results to " << opt.output
              << " and " << summaries.size() << " rate summaries to " << summary_path
              << "\n";

    if (!opt.plot.empty()) {
        emit_plot_file(opt.plot, summaries);
        std::cout << "wrote plot to " << opt.plot << "\n";
    }
    return 0;
}

int cmd_velocity(const Options& opt) {
    const NetworkSequence seq = load_sequence_file(opt.inputs.at(0));
    if (seq.length() < 2)
        throw DomainError("velocity: the sequence needs at least two cross-sections");

    std::ostringstream profile;
    profile << "step,hamming_distance,graph_correlation\n";
    double corr_sum = 0.0;
    long corr_count = 0;
    for (long i = 1; i < seq.length(); ++i) {
        const auto& prev = seq.graphs[static_cast<std::size_t>(i - 1)];
        const auto& cur = seq.graphs[static_cast<std::size_t>(i)];
        profile << i << ',' << hamming_distance(prev, cur) << ',';
        try {
            const double c = graph_correlation(prev, cur);
            profile << format_double(c);
            corr_sum += c;
            ++corr_count;
        } catch (const DomainError&) {
            profile << "nan";
        }
        profile << '\n';
    }

    std::cout << "cross-sections: " << seq.length()
              << "\nmean Hamming velocity: " << format_double(mean_velocity(seq))
              << "\nmean graph correlation: "
              << (corr_count > 0 ? format_double(corr_sum / static_cast<double>(corr_count))
                                 : std::string("undefined"))
              << "\n";
    if (!opt.output.empty()) {
        std::ofstream out(opt.output);
        if (!out) throw ParseError("cannot open '" + opt.output + "' for writing");
        out << profile.str();
        std::cout << "wrote per-step profile to " << opt.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forced linear diffusion on static and dynamic networks"};
    app.require_subcommand(1);
    Options opt;

    const auto add_io = [&](CLI::App* cmd, int n_inputs, bool needs_output) {
        cmd->add_option("-i,--input", opt.inputs, "input file(s)")
            ->required()
            ->expected(n_inputs);
        auto* o = cmd->add_option("-o,--output", opt.output, "output file");
        if (needs_output) o->required();
    };

    auto* eq = app.add_subcommand("equilibrium",
                                  "fixed point (I-A)^{-1} z of a static model");
    add_io(eq, 1, true);
    eq->add_option("--forcing", opt.forcing, "forcing vector file")->required();
    eq->add_flag("--allow-nonconvergent", opt.allow_nonconvergent,
                 "solve even when rho(A) >= 1");

    auto* pe = app.add_subcommand("perturb",
                                  "first-order solution from two weight snapshots");
    add_io(pe, 2, true);
    pe->add_option("--forcing", opt.forcing, "forcing vector file")->required();

    auto* si = app.add_subcommand("simulate", "run dynamics over a network sequence");
    add_io(si, 1, true);
    si->add_option("--forcing", opt.forcing, "forcing vector file")->required();
    si->add_option("--y0", opt.y0, "initial state file (default: the forcing vector)");
    si->add_option("--alpha", opt.alpha, "weight applied to each tie")->required();

    auto* ce = app.add_subcommand("centrality", "named feedback-centrality models");
    add_io(ce, 1, true);
    ce->add_option("--model", opt.model, "katz|bonacich|pagerank|fj|salancik|nar")
        ->required();
    ce->add_option("--alpha", opt.alpha, "katz/bonacich attenuation");
    ce->add_option("--beta", opt.beta, "bonacich feedback weight (may be negative)");
    ce->add_option("--delta", opt.delta, "pagerank damping, in (0,1)");
    ce->add_option("--rho", opt.rho, "nar autocorrelation");
    ce->add_option("--forcing", opt.forcing, "fj exogenous attitude vector");
    ce->add_option("--susceptibility", opt.susceptibility, "fj susceptibility vector");
    ce->add_option("--membership", opt.membership, "salancik membership matrix (n x m)");
    ce->add_option("--importance", opt.importance, "salancik importance vector (m)");
    ce->add_option("--covariates", opt.covariates, "nar covariate matrix (n x p)");
    ce->add_option("--coeffs", opt.coeffs, "nar coefficient vector (p)");
    ce->add_option("--drift", opt.drift, "nar drift matrix (optional)");
    ce->add_flag("--allow-nonconvergent", opt.allow_nonconvergent,
                 "solve even when rho(A) >= 1");

    auto* ex = app.add_subcommand("experiment",
                                  "approximation-error study on churning networks");
    ex->add_option("--config", opt.config, "JSON study config")->required();
    ex->add_option("--seed", opt.seed, "base random seed (required for reproducibility)")
        ->required();
    ex->add_option("-o,--output", opt.output, "results CSV path");
    ex->add_option("--summary", opt.summary, "summary CSV path (default: derived)");
    ex->add_option("--plot", opt.plot, "SVG plot path");
    ex->add_option("--steps", opt.steps, "override the config's step count");
    ex->add_option("--threads", opt.threads, "worker threads (default: hardware)");
    ex->add_flag("--dry-run", opt.dry_run, "validate and print the job plan only");

    auto* ve = app.add_subcommand("velocity", "Hamming/correlation profile of a sequence");
    add_io(ve, 1, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        fail(1, std::string(e.get_name()) + ": " + e.what());
    }

    try {
        if (eq->parsed()) return cmd_equilibrium(opt);
        if (pe->parsed()) return cmd_perturb(opt);
        if (si->parsed()) return cmd_simulate(opt);
        if (ce->parsed()) return cmd_centrality(opt);
        if (ex->parsed()) return cmd_experiment(opt);
        if (ve->parsed()) return cmd_velocity(opt);
        fail(1, "no subcommand given");
    } catch (const UsageError& e) {
        fail(1, e.what());
    } catch (const ParseError& e) {
        fail(2, e.what());
    } catch (const DimensionError& e) {
        fail(2, e.what());
    } catch (const SingularSystemError& e) {
        fail(3, e.what());
    } catch (const NonConvergenceError& e) {
        fail(3, e.what());
    } catch (const DivergentModelError& e) {
        fail(3, e.what());
    } catch (const DomainError& e) {
        fail(2, e.what());
    } catch (const std::exception& e) {
        fail(3, e.what());
    }
    return 0;
}
