#include <cmath>

#include "ssvlab/anticoncentration.hpp"
#include "ssvlab/decomposition.hpp"
#include "ssvlab/harness.hpp"
#include "ssvlab/polytope.hpp"
#include "ssvlab/spectra.hpp"
#include "ssvlab/universality.hpp"
#include "ssvlab/upper_bound.hpp"

namespace ssv {

namespace {

TrialRecord base_record(const ExperimentConfig& cfg, int n, int N, std::uint64_t key) {
    TrialRecord rec;
    rec.experiment = cfg.experiment;
    rec.n = n;
    rec.N = N;
    rec.alpha = cfg.law.is_gaussian() ? 2.0 : cfg.law.alpha;
    rec.regime = cfg.scheme.regime_name();
    rec.seed = key;
    rec.extras["law"] = cfg.law.kind;
    return rec;
}

Mat draw_entry_matrix(const ExperimentConfig& cfg, int N, int n, std::uint64_t key) {
    if (cfg.law.is_gaussian()) return sample_gaussian_matrix(N, n, key);
    return sample_matrix(cfg.law.tail_law(), N, n, key);
}

TrialRecord run_sigma_min(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const Mat x = draw_entry_matrix(cfg, N, n, key);
    const SpectralSummary s = singular_extremes(x, cfg.tolerance);
    rec.sigma_min = s.sigma_min;
    rec.sigma_max = s.sigma_max;
    return rec;
}

TrialRecord run_bai_yin(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    rec.extras["law"] = "gaussian";
    rec.alpha = 2.0;
    const Mat x = sample_gaussian_matrix(N, n, key);
    const SpectralSummary s = singular_extremes(x, cfg.tolerance);
    rec.sigma_min = s.sigma_min;
    rec.sigma_max = s.sigma_max;
    rec.extras["ratio"] = s.sigma_min / std::sqrt(static_cast<double>(n));
    return rec;
}

TrialRecord run_upper_bound(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const TailLaw law = cfg.law.tail_law();
    const Decomposition dec = sample_decomposition(law, cfg.scheme, n, N, key);
    const Mat x = assemble(dec);
    const double constant = cfg.raw.number_or("bound.constant", 1.0);
    const MinorReport rep = minor_upper_bound(dec, x, constant, cfg.tolerance * 100.0);
    const SpectralSummary s = singular_extremes(x, cfg.tolerance);
    rec.sigma_min = s.sigma_min;
    rec.sigma_max = s.sigma_max;
    rec.extras["applicable"] = rep.applicable;
    rec.extras["all_ones_count"] = static_cast<int>(rep.all_ones_columns.size());
    rec.extras["minor_norm"] = rep.minor_norm;
    rec.extras["sigma_le_minor"] = rep.sigma_le_minor;
    rec.extras["bound_value"] = rep.bound_value;
    rec.extras["predicate_holds"] = rep.predicate_holds;
    rec.extras["c_hat"] = rep.c_hat;
    rec.extras["p_no_all_ones_exact"] = rep.p_no_all_ones_exact;
    rec.extras["p_no_all_ones_bound"] = rep.p_no_all_ones_bound;
    rec.extras["tau"] = dec.cutoff.tau;
    rec.extras["epsilon_tilde"] = dec.cutoff.epsilon_tilde;
    return rec;
}

TrialRecord run_coupling(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const TailLaw law = cfg.law.tail_law();
    const Decomposition dec = sample_decomposition(law, cfg.scheme, n, N, key);
    const NormalizedPair pair = normalize(dec);
    const SpectralSummary st = singular_extremes(pair.total(), cfg.tolerance);
    const double sg = singular_extremes(gaussian_surrogate(pair, key), cfg.tolerance).sigma_min;
    rec.sigma_min = st.sigma_min;
    rec.sigma_max = st.sigma_max;
    rec.extras["sigma_min_g"] = sg;
    rec.extras["delta"] = std::abs(st.sigma_min - sg);
    rec.extras["q"] = pair.entry_bound_limit;
    rec.extras["q_realized"] = pair.entry_bound;
    rec.extras["m_scale"] = pair.variance_scale;
    rec.extras["c"] = cfg.scheme.c;
    return rec;
}

TrialRecord run_hausdorff(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const TailLaw law = cfg.law.tail_law();
    const double eps = cfg.raw.number_or("hausdorff.epsilon", 0.25);
    const Decomposition dec = sample_decomposition(law, cfg.scheme, n, N, key);
    const NormalizedPair pair = normalize(dec);
    const Mat tmat = pair.total();
    const Mat gmat = gaussian_surrogate(pair, key);
    const DilationSpectrum dt = dilation_spectrum(tmat, eps);
    const DilationSpectrum dg = dilation_spectrum(gmat, eps);
    const double dh = hausdorff_distance(dt.eigenvalues, dg.eigenvalues);
    const SpectralSummary st = singular_extremes(tmat, cfg.tolerance);
    const double sg = singular_extremes(gmat, cfg.tolerance).sigma_min;
    rec.sigma_min = st.sigma_min;
    rec.sigma_max = st.sigma_max;
    rec.extras["epsilon"] = eps;
    rec.extras["d_h"] = dh;
    rec.extras["premise"] = dh <= eps;
    rec.extras["sigma_min_g"] = sg;
    rec.extras["lambda_plus_t"] = dt.lambda_plus;
    rec.extras["lambda_plus_g"] = dg.lambda_plus;
    rec.extras["lambda_minus_t"] = dt.lambda_minus;
    rec.extras["lambda_minus_g"] = dg.lambda_minus;
    rec.extras["sigma_chain_ok"] = st.sigma_min >= sg - 3.0 * eps - 1e-8;
    return rec;
}

TrialRecord run_polytope(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const Mat x = draw_entry_matrix(cfg, N, n, key);
    const InradiusCertificate cert = certificate(x, cfg.tolerance);
    rec.sigma_min = cert.sigma_min_used;
    rec.sigma_max = singular_extremes(x, cfg.tolerance).sigma_max;
    rec.extras["radius"] = cert.radius;
    if (n == 2) {
        std::vector<Eigen::Vector2d> rows;
        rows.reserve(N);
        for (int i = 0; i < N; ++i) rows.emplace_back(x(i, 0), x(i, 1));
        const double exact = exact_inradius_2d(rows);
        rec.extras["exact_2d"] = exact;
        rec.extras["sound"] = cert.radius <= exact * (1.0 + 1e-8) + 1e-12;
    }
    return rec;
}

TrialRecord run_perturbed(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const Mat x = draw_entry_matrix(cfg, N, n, key);
    const double lo = cfg.raw.number_or("weights.lower", 1.0);
    const double hi = cfg.raw.number_or("weights.upper", 1.0);
    const double shift_mag = cfg.raw.number_or("shift.magnitude", 0.0);
    WeightProfile w;
    w.lower = lo;
    w.upper = hi;
    w.a.resize(N, n);
    const std::uint64_t wk = role_key(key, StreamRole::Aux);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < N; ++i) {
            CounterRng rng = CounterRng::for_entry(wk, static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j));
            w.a(i, j) = lo + (hi - lo) * rng.uniform_oo();
        }
    w.validate();
    const Mat shift = shift_mag * Mat::Ones(N, n);
    const Mat a = apply_weights_and_shift(x, w, shift);
    const SpectralSummary s = singular_extremes(a, cfg.tolerance);
    rec.sigma_min = s.sigma_min;
    rec.sigma_max = s.sigma_max;
    rec.extras["shift_magnitude"] = shift_mag;
    rec.extras["weights_lower"] = lo;
    rec.extras["weights_upper"] = hi;
    return rec;
}

TrialRecord run_seginer(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const TailLaw law = cfg.law.tail_law();
    const TruncationScheme scheme = cfg.scheme;
    const Threshold th = threshold(scheme, law, n, N);
    const int q = static_cast<int>(cfg.raw.integer_or("seginer.q", 2));
    const int inner = static_cast<int>(cfg.raw.integer_or("seginer.trials", 200));
    const auto sampler = [&law, &th](CounterRng& rng) {
        return sample_conditional(law, th.tau, Side::Small, rng);
    };
    const SeginerReport rep = seginer_check(sampler, N, n, q, inner, key);
    rec.extras["lhs"] = rep.lhs;
    rec.extras["rhs_rows"] = rep.rhs_rows;
    rec.extras["rhs_cols"] = rep.rhs_cols;
    rec.extras["c_hat"] = rep.c_hat;
    rec.extras["q_moment"] = q;
    return rec;
}

TrialRecord run_rogozin(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const double h = cfg.raw.number_or("rogozin.h", 0.1);
    const int inner = static_cast<int>(cfg.raw.integer_or("rogozin.trials", 20000));
    std::vector<std::pair<std::function<double(CounterRng&)>, double>> comps;
    for (int j = 0; j < n; ++j)
        comps.emplace_back([](CounterRng& rng) { return rng.uniform_oo(); }, h);
    const RogozinReport rep = rogozin_check(comps, h, inner, key);
    rec.extras["k"] = rep.k;
    rec.extras["lhs"] = rep.lhs;
    rec.extras["rhs_bracket"] = rep.rhs_bracket;
    rec.extras["c_hat"] = rep.c_hat;
    return rec;
}

TrialRecord run_nets(const ExperimentConfig& cfg, int n, int N, int, std::uint64_t key) {
    TrialRecord rec = base_record(cfg, n, N, key);
    const int m = static_cast<int>(cfg.raw.integer_or("net.m", 2));
    const double eps = cfg.raw.number_or("net.epsilon", 0.5);
    const int probes = static_cast<int>(cfg.raw.integer_or("net.probes", 1000));
    const auto budget = static_cast<std::uint64_t>(cfg.raw.integer_or("net.budget", 5000000));
    const SparseNet net = sparse_net(n, m, eps, budget);
    int covered = 0;
    for (int p = 0; p < probes; ++p) {
        CounterRng rng(derive_key(key, 0xabcdULL), static_cast<std::uint64_t>(p));
        Vec probe = Vec::Zero(n);
        // Random support of size m, gaussian weights, normalized.
        for (int picked = 0; picked < m;) {
            const int idx = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
            if (probe(idx) == 0.0) {
                double g = 0.0;
                while (g == 0.0) g = rng.gaussian();
                probe(idx) = g;
                ++picked;
            }
        }
        probe.normalize();
        if (net_covers(net, probe)) ++covered;
    }
    rec.extras["net_size"] = static_cast<int>(net.points.size());
    rec.extras["m"] = m;
    rec.extras["epsilon"] = eps;
    rec.extras["probes"] = probes;
    rec.extras["covered"] = covered;
    return rec;
}

} // namespace

const std::map<std::string, ExperimentFn>& experiment_registry() {
    static const std::map<std::string, ExperimentFn> registry = {
        {"sigma_min", run_sigma_min},   {"bai_yin", run_bai_yin},
        {"upper_bound", run_upper_bound}, {"coupling", run_coupling},
        {"hausdorff", run_hausdorff},   {"polytope", run_polytope},
        {"perturbed", run_perturbed},   {"seginer", run_seginer},
        {"rogozin", run_rogozin},       {"nets", run_nets},
    };
    return registry;
}

} // namespace ssv
