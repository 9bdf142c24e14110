#include "ssvlab/decomposition.hpp"

#include <cmath>
#include <stdexcept>

namespace ssv {

Decomposition sample_decomposition(const TailLaw& law, const TruncationScheme& scheme,
                                   int n, int N, std::uint64_t key) {
    Decomposition dec;
    dec.law = law;
    dec.scheme = scheme;
    dec.cutoff = threshold(scheme, law, n, N);
    dec.labels = sample_label_matrix(law, dec.cutoff.tau, N, n, key);
    dec.small = sample_conditional_matrix(law, dec.cutoff.tau, Side::Small, N, n, key);
    dec.large = sample_conditional_matrix(law, dec.cutoff.tau, Side::Large, N, n, key);
    return dec;
}

Mat assemble(const LabelMatrix& labels, const Mat& small, const Mat& large) {
    if (labels.rows() != small.rows() || labels.cols() != small.cols() ||
        small.rows() != large.rows() || small.cols() != large.cols())
        throw std::invalid_argument("assemble: shape mismatch");
    const Mat psi = labels.bits.cast<double>();
    return psi.cwiseProduct(small) + (1.0 - psi.array()).matrix().cwiseProduct(large);
}

Mat assemble(const Decomposition& dec) { return assemble(dec.labels, dec.small, dec.large); }

NormalizedPair normalize(const Decomposition& dec) {
    if (dec.scheme.regime != Regime::Lower)
        throw std::invalid_argument("normalize: only the lower regime has a defined normalization");
    const double alpha = dec.law.alpha;
    const double base = static_cast<double>(dec.cutoff.base_size);
    const double eps = dec.cutoff.epsilon_tilde;
    const double s = std::pow(base, -1.0 / alpha + (1.0 - 0.5 * alpha) * eps);

    NormalizedPair pair;
    pair.scale_factor = s;
    const Mat psi = dec.labels.bits.cast<double>();
    pair.random_part = s * psi.cwiseProduct(dec.small);
    pair.fixed_part = s * (1.0 - psi.array()).matrix().cwiseProduct(dec.large);

    const double var_y = dec.law.truncated_second_moment(dec.cutoff.tau);
    pair.variance_profile = (s * s * var_y) * psi;

    pair.entry_bound = pair.random_part.cwiseAbs().maxCoeff();
    const double lb = std::log(base);
    pair.entry_bound_limit = 1.0 / (std::sqrt(dec.scheme.c) * lb * lb);
    pair.second_moment_ratio = base * s * s * var_y;
    const double cols = static_cast<double>(dec.cols());
    pair.variance_scale = std::max(1.0, std::sqrt(cols * s * s * var_y));
    return pair;
}

Mat gaussian_surrogate(const NormalizedPair& pair, std::uint64_t key) {
    if (!pair.variance_profile.allFinite())
        throw std::invalid_argument("gaussian_surrogate: variance profile not finite");
    const std::uint64_t k = role_key(key, StreamRole::Surrogate);
    const int N = static_cast<int>(pair.fixed_part.rows());
    const int n = static_cast<int>(pair.fixed_part.cols());
    Mat g = pair.fixed_part;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            const double v = pair.variance_profile(i, j);
            if (v == 0.0) continue;
            CounterRng rng = CounterRng::for_entry(k, static_cast<std::uint32_t>(i),
                                                   static_cast<std::uint32_t>(j));
            g(i, j) += std::sqrt(v) * rng.gaussian();
        }
    }
    return g;
}

void WeightProfile::validate() const {
    if (!(lower > 0.0) || !(upper >= lower))
        throw std::invalid_argument("WeightProfile: need 0 < lower <= upper");
    if ((a.array() < lower).any() || (a.array() > upper).any())
        throw std::invalid_argument("WeightProfile: entries out of [lower, upper]");
}

Mat apply_weights_and_shift(const Mat& x, const WeightProfile& w, const Mat& shift) {
    if (w.a.rows() != x.rows() || w.a.cols() != x.cols() || shift.rows() != x.rows() ||
        shift.cols() != x.cols())
        throw std::invalid_argument("apply_weights_and_shift: shape mismatch");
    return w.a.cwiseProduct(x) + shift;
}

} // namespace ssv
