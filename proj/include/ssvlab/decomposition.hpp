#pragma once

#include <cstdint>

#include "ssvlab/sampler.hpp"

namespace ssv {

/// Resampling decomposition of a heavy-tailed matrix: labels pick entrywise
/// between the small conditional matrix and the large one, reconstructing the
/// entry law exactly.
struct Decomposition {
    TailLaw law;
    TruncationScheme scheme;
    Threshold cutoff;
    LabelMatrix labels;
    Mat small; // every entry has |.| <= tau
    Mat large; // every entry has |.| >= tau

    int rows() const { return static_cast<int>(small.rows()); }
    int cols() const { return static_cast<int>(small.cols()); }
};

/// Samples labels and both conditional matrices under the scheme's cutoff.
Decomposition sample_decomposition(const TailLaw& law, const TruncationScheme& scheme,
                                   int n, int N, std::uint64_t key);

/// Entrywise mixture labels o small + (1 - labels) o large.
Mat assemble(const Decomposition& dec);
Mat assemble(const LabelMatrix& labels, const Mat& small, const Mat& large);

/// T = T0 + T1 after the lower-regime normalization, together with the
/// variance profile that the Gaussian surrogate must match.
struct NormalizedPair {
    Mat fixed_part;       // scaled large part (plus any absorbed shift)
    Mat random_part;      // scaled labeled small part, realized draw
    Mat variance_profile; // Var of each random_part entry given its label
    double scale_factor = 0.0;       // base^(-1/alpha + (1 - alpha/2) eps)
    double entry_bound = 0.0;        // realized max |random_part entry|
    double entry_bound_limit = 0.0;  // c^{-1/2} (log base)^{-2}
    double variance_scale = 1.0;     // M with sup profile <= M^2 / cols
    double second_moment_ratio = 0.0; // C_n = base * scale^2 * E[y^2]

    Mat total() const { return fixed_part + random_part; }
};

/// Lower-regime normalization of a decomposition. Throws for upper-regime
/// input, whose normalization is undefined.
NormalizedPair normalize(const Decomposition& dec);

/// G = T0 + G1 with independent mean-zero gaussians matching the variance
/// profile entry by entry.
Mat gaussian_surrogate(const NormalizedPair& pair, std::uint64_t key);

/// Entrywise weights a_ij confined to [lower, upper].
struct WeightProfile {
    Mat a;
    double lower = 1.0;
    double upper = 1.0;

    void validate() const;
};

/// Entrywise a_ij * x_ij + shift_ij.
Mat apply_weights_and_shift(const Mat& x, const WeightProfile& w, const Mat& shift);

} // namespace ssv
