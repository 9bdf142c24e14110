// Command-line front end: seeded sweeps, exponent fits, universality and
// polytope experiments, net covering checks, and record summaries.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "ssvlab/anticoncentration.hpp"
#include "ssvlab/harness.hpp"
#include "ssvlab/universality.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
    std::string config_path;
    std::string out;
    long seed = -1;
    int trials = -1;
    std::string sizes;
    int workers = -1;
    double tolerance = -1.0;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required = true) {
    auto* opt = cmd->add_option("--config", f.config_path, "experiment config file");
    if (config_required) opt->required();
    cmd->add_option("--out", f.out, "records output path (overrides config)");
    cmd->add_option("--seed", f.seed, "root seed (overrides config)");
    cmd->add_option("--trials", f.trials, "trials per size (overrides config)");
    cmd->add_option("--sizes", f.sizes, "size list n:N,... (overrides config)");
    cmd->add_option("--workers", f.workers, "worker threads (overrides config)");
    cmd->add_option("--tolerance", f.tolerance, "spectral tolerance (overrides config)");
}

ssv::ExperimentConfig load_config(const CommonFlags& f) {
    ssv::KeyValueFile kv = ssv::KeyValueFile::load(f.config_path);
    if (f.seed >= 0) kv.set("seed", std::to_string(f.seed));
    if (f.trials >= 0) kv.set("trials", std::to_string(f.trials));
    if (!f.sizes.empty()) kv.set("sizes", f.sizes);
    if (f.workers >= 0) kv.set("workers", std::to_string(f.workers));
    if (f.tolerance >= 0.0) kv.set("tolerance", std::to_string(f.tolerance));
    if (!f.out.empty()) kv.set("out", f.out);
    return ssv::ExperimentConfig::from_kv(kv);
}

std::vector<ssv::TrialRecord> sweep_to_output(const ssv::ExperimentConfig& cfg) {
    if (cfg.out_path.empty()) return ssv::run_sweep(cfg, nullptr);
    std::ofstream out(cfg.out_path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    return ssv::run_sweep(cfg, &out);
}

void print_fit(const ssv::ScalingFit& fit, const std::string& value_key) {
    std::cout.precision(15);
    std::cout << "fit of log median " << value_key << " vs log n\n";
    std::cout << "  slope     " << fit.slope << "\n";
    std::cout << "  intercept " << fit.intercept << "\n";
    std::cout << "  stderr    " << fit.stderr_slope << "\n";
    std::cout << "  r2        " << fit.r_squared << "\n";
    if (fit.has_loglog) std::cout << "  loglog    " << fit.loglog_coeff << " (separate regressor)\n";
}

int cmd_sample(const std::string& kind, double alpha, double sigma, double beta, long count,
               long seed, double tau, const std::string& side) {
    ssv::CounterRng rng(ssv::derive_key(static_cast<std::uint64_t>(seed), 0x5a5aULL), 0);
    std::cout.precision(17);
    for (long i = 0; i < count; ++i) {
        double x = 0.0;
        if (kind == "gaussian") {
            x = rng.gaussian();
        } else {
            ssv::LawSpec spec;
            spec.kind = kind;
            spec.alpha = alpha;
            spec.sigma = sigma;
            spec.beta = beta;
            const ssv::TailLaw law = spec.tail_law();
            if (side.empty())
                x = ssv::sample_entry(law, rng);
            else
                x = ssv::sample_conditional(law, tau,
                                            side == "small" ? ssv::Side::Small : ssv::Side::Large,
                                            rng);
        }
        std::cout << x << "\n";
    }
    return kExitOk;
}

int cmd_report(const std::string& input, const std::string& out_dir) {
    const auto records = ssv::read_records_file(input);
    if (records.empty()) {
        std::cerr << "report: no records in " << input << "\n";
        return kExitUsage;
    }
    struct Group {
        std::vector<double> sigma_min, sigma_max;
    };
    std::map<std::tuple<std::string, int, int>, Group> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.experiment, r.n, r.N}];
        g.sigma_min.push_back(r.sigma_min);
        g.sigma_max.push_back(r.sigma_max);
    }
    std::ostringstream csv;
    csv << "experiment,n,N,trials,median_sigma_min,median_sigma_max\n";
    std::cout << "experiment        n      N   trials  median(sigma_min)  median(sigma_max)\n";
    for (auto& [key, g] : groups) {
        const auto& [exp, n, N] = key;
        const double msmin = ssv::median(g.sigma_min);
        const double msmax = ssv::median(g.sigma_max);
        csv << exp << "," << n << "," << N << "," << g.sigma_min.size() << "," << msmin << ","
            << msmax << "\n";
        std::printf("%-16s %5d  %5d   %5zu   %16.6g   %16.6g\n", exp.c_str(), n, N,
                    g.sigma_min.size(), msmin, msmax);
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(out_dir + "/summary.csv") << csv.str();
        // Plot data: x = n, y = median sigma_min, err = half interquartile range.
        std::map<std::string, std::ostringstream> plots;
        for (auto& [key, g] : groups) {
            const auto& [exp, n, N] = key;
            std::sort(g.sigma_min.begin(), g.sigma_min.end());
            const auto q = [&](double lvl) {
                return g.sigma_min[static_cast<std::size_t>(lvl * (g.sigma_min.size() - 1))];
            };
            plots[exp] << n << "\t" << ssv::median(g.sigma_min) << "\t"
                       << 0.5 * (q(0.75) - q(0.25)) << "\n";
        }
        for (auto& [exp, data] : plots)
            std::ofstream(out_dir + "/" + exp + "_sigma_min_vs_n.tsv") << data.str();
        std::cout << "wrote " << out_dir << "/summary.csv and plot data\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for extreme singular values of heavy-tailed random matrices"};
    app.require_subcommand(1);

    // --- sample ---
    auto* sample = app.add_subcommand("sample", "print entry draws from a law");
    std::string s_kind = "pareto", s_side;
    double s_alpha = 1.0, s_sigma = 1.0, s_beta = 0.0, s_tau = 0.0;
    long s_count = 10, s_seed = 0;
    sample->add_option("--law", s_kind, "pareto|stable|slowvarying|gaussian");
    sample->add_option("--alpha", s_alpha);
    sample->add_option("--sigma", s_sigma);
    sample->add_option("--beta", s_beta);
    sample->add_option("--count", s_count);
    sample->add_option("--seed", s_seed);
    sample->add_option("--tau", s_tau, "cutoff for conditional draws");
    sample->add_option("--side", s_side, "small|large for conditional draws");

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "run a registered experiment over sizes x trials");
    CommonFlags sweep_flags;
    add_common(sweep, sweep_flags);

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "OLS exponent fit over recorded medians");
    std::string fit_input, fit_value = "sigma_min", fit_group = "n";
    double fit_expect = NAN, fit_tol = 0.0;
    fit->add_option("--input", fit_input, "records file")->required();
    fit->add_option("--value", fit_value, "sigma_min|sigma_max|extras key");
    fit->add_option("--group", fit_group, "n|N|extras key");
    fit->add_option("--expect-slope", fit_expect, "assert the slope is near this value");
    fit->add_option("--slope-tolerance", fit_tol, "allowed deviation for --expect-slope");

    // --- universality ---
    auto* uni = app.add_subcommand("universality", "coupling and dilation Hausdorff experiments");
    CommonFlags uni_flags;
    add_common(uni, uni_flags);

    // --- polytope ---
    auto* poly = app.add_subcommand("polytope", "inradius certificate sweep with soundness checks");
    CommonFlags poly_flags;
    add_common(poly, poly_flags);

    // --- nets ---
    auto* nets = app.add_subcommand("nets", "sparse net covering check");
    int nets_n = 8, nets_m = 2, nets_probes = 10000;
    double nets_eps = 0.5;
    long nets_seed = 0, nets_budget = 5'000'000;
    nets->add_option("--n", nets_n);
    nets->add_option("--m", nets_m);
    nets->add_option("--epsilon", nets_eps);
    nets->add_option("--probes", nets_probes);
    nets->add_option("--seed", nets_seed);
    nets->add_option("--budget", nets_budget);

    // --- report ---
    auto* report = app.add_subcommand("report", "summarize a records file");
    std::string report_input, report_out_dir;
    report->add_option("--input", report_input, "records file")->required();
    report->add_option("--out-dir", report_out_dir, "directory for csv/tsv summaries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample->parsed()) {
            if (!s_side.empty() && s_tau <= 0.0) {
                std::cerr << "sample: --side requires a positive --tau\n";
                return kExitUsage;
            }
            return cmd_sample(s_kind, s_alpha, s_sigma, s_beta, s_count, s_seed, s_tau, s_side);
        }
        if (sweep->parsed()) {
            const auto cfg = load_config(sweep_flags);
            const auto records = sweep_to_output(cfg);
            std::cout << "wrote " << records.size() << " records";
            if (!cfg.out_path.empty()) std::cout << " to " << cfg.out_path;
            std::cout << "\n";
            return kExitOk;
        }
        if (fit->parsed()) {
            const auto records = ssv::read_records_file(fit_input);
            const auto result = ssv::fit_exponent(records, fit_value, fit_group);
            print_fit(result, fit_value);
            if (!std::isnan(fit_expect)) {
                const double tol = fit_tol > 0.0 ? fit_tol : 0.15;
                if (std::abs(result.slope - fit_expect) > tol) {
                    std::cerr << "fit: slope " << result.slope << " outside " << fit_expect
                              << " +/- " << tol << "\n";
                    return kExitAssertion;
                }
            }
            return kExitOk;
        }
        if (uni->parsed()) {
            const auto cfg = load_config(uni_flags);
            const ssv::TailLaw law = cfg.law.tail_law();
            bool ok = true;
            for (const auto& [n, N] : cfg.sizes) {
                const auto rep = ssv::coupling_experiment(
                    law, cfg.scheme, n, N, cfg.trials,
                    ssv::trial_stream_key(cfg.root_seed, n, N, 0),
                    cfg.raw.number_or("coupling.C", 1.0));
                std::cout << "coupling n=" << n << " N=" << N << " trials=" << cfg.trials
                          << " median_delta=" << rep.median_delta << " q=" << rep.q
                          << " median_within_eps=" << (rep.median_within_eps ? "yes" : "no")
                          << " c_hat=" << rep.c_hat << "\n";
                ok = ok && rep.median_within_eps;
                const double eps = cfg.raw.number_or("hausdorff.epsilon", 0.25);
                const auto hrep = ssv::hausdorff_universality(
                    law, cfg.scheme, n, N, eps, cfg.trials,
                    ssv::trial_stream_key(cfg.root_seed, n, N, 1));
                std::cout << "hausdorff n=" << n << " N=" << N << " eps=" << eps
                          << " premise_count=" << hrep.premise_count
                          << " violations=" << hrep.violation_count << " c_hat=" << hrep.c_hat
                          << "\n";
                ok = ok && hrep.violation_count == 0;
            }
            return ok ? kExitOk : kExitAssertion;
        }
        if (poly->parsed()) {
            const auto cfg = load_config(poly_flags);
            const auto records = sweep_to_output(cfg);
            std::size_t unsound = 0, checked = 0;
            for (const auto& r : records)
                if (r.has_extra("sound")) {
                    ++checked;
                    if (!r.extras.at("sound").get<bool>()) ++unsound;
                }
            std::cout << "polytope: " << records.size() << " trials, " << checked
                      << " exact comparisons, " << unsound << " soundness violations\n";
            return unsound == 0 ? kExitOk : kExitAssertion;
        }
        if (nets->parsed()) {
            const auto net = ssv::sparse_net(nets_n, nets_m, nets_eps,
                                             static_cast<std::uint64_t>(nets_budget));
            ssv::CounterRng rng(ssv::derive_key(static_cast<std::uint64_t>(nets_seed), 0xebebULL), 0);
            int covered = 0;
            double worst = 0.0;
            for (int p = 0; p < nets_probes; ++p) {
                ssv::Vec probe = ssv::Vec::Zero(nets_n);
                for (int picked = 0; picked < nets_m;) {
                    const int idx = static_cast<int>(rng.next_u64() % nets_n);
                    if (probe(idx) == 0.0) {
                        double g = 0.0;
                        while (g == 0.0) g = rng.gaussian();
                        probe(idx) = g;
                        ++picked;
                    }
                }
                probe.normalize();
                double best = 0.0;
                if (ssv::net_covers(net, probe, &best)) ++covered;
                worst = std::max(worst, best);
            }
            std::cout << "net size " << net.points.size() << ", covered " << covered << "/"
                      << nets_probes << ", worst distance " << worst << " (epsilon " << nets_eps
                      << ")\n";
            return covered == nets_probes ? kExitOk : kExitAssertion;
        }
        if (report->parsed()) return cmd_report(report_input, report_out_dir);
    } catch (const ssv::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssertion;
    }
    return kExitUsage;
}
