#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "ssvlab/rng.hpp"

namespace ssv {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thrown when a threshold formula has no admissible solution at the given
/// base size. Carries the smallest base that would work.
class SizingError : public std::runtime_error {
public:
    SizingError(const std::string& msg, std::uint64_t minimal_base)
        : std::runtime_error(msg), minimal_base_(minimal_base) {}
    std::uint64_t minimal_base() const { return minimal_base_; }

private:
    std::uint64_t minimal_base_;
};

enum class TailKind { SymmetricPareto, AlphaStable, SlowVaryingPareto };

/// Symmetric heavy-tailed entry law with tail index alpha in (0, 2).
///
/// SymmetricPareto has the exact tail P(|x| >= t) = min(1, t^-alpha), so its
/// tail constants are both 1. AlphaStable has characteristic function
/// exp(-sigma^alpha |t|^alpha). SlowVaryingPareto has tail
/// (1 + log t)^beta t^-alpha for t >= t0, with t0 the smallest point where
/// that expression is a valid (monotone, <= 1) tail.
struct TailLaw {
    TailKind kind = TailKind::SymmetricPareto;
    double alpha = 1.0;
    double sigma = 1.0; // AlphaStable only
    double beta = 0.0;  // SlowVaryingPareto only

    static TailLaw symmetric_pareto(double alpha);
    static TailLaw alpha_stable(double alpha, double sigma = 1.0);
    static TailLaw slow_varying_pareto(double alpha, double beta);

    void validate() const;

    /// Smallest magnitude in the support (1 for Pareto, t0 for the
    /// slow-varying variant, 0 for stable).
    double support_floor() const;

    /// P(|x| >= t).
    double tail_prob(double t) const;
    /// P(|x| <= t).
    double cdf_abs(double t) const { return 1.0 - tail_prob(t); }

    /// Magnitude with tail probability u, i.e. the solution of
    /// P(|x| >= m) = u. Closed form for Pareto, Newton on the log scale for
    /// the slow-varying tail; not available for AlphaStable.
    double magnitude_from_tail(double u) const;

    /// E[x^2 | |x| <= tau], the exact truncated second moment. Closed form
    /// for Pareto, quadrature for the other laws.
    double truncated_second_moment(double tau) const;

    std::string name() const;
};

enum class Regime { Upper, Lower };
enum class ThresholdBase { Cols, Rows }; // build the cutoff from n or from N

/// Truncation rule that fixes epsilon-tilde.
///
/// Upper regime solves base^(alpha e) = b log(base) / (delta Cu); lower
/// regime solves base^(alpha e) = c (log base)^4. The cutoff separating
/// small from large entries is tau = base^(1/alpha - e).
struct TruncationScheme {
    Regime regime = Regime::Lower;
    ThresholdBase base = ThresholdBase::Cols;
    double b = 0.5;    // upper regime parameter, in (0,1)
    double c = 1.0;    // lower regime parameter, > 0
    double delta = 2.0; // aspect-ratio lower bound, > 1
    double c_u = 1.0;  // tail constant used in the formula

    void validate() const;
    std::string regime_name() const { return regime == Regime::Upper ? "upper" : "lower"; }
};

struct Threshold {
    double epsilon_tilde = 0.0;
    double tau = 0.0;
    std::uint64_t base_size = 0;
};

/// Solves the scheme's equation at the scheme's base (n or N). Throws
/// SizingError when the resulting epsilon-tilde falls outside (0, 1/alpha),
/// naming the minimal admissible base.
Threshold threshold(const TruncationScheme& scheme, const TailLaw& law, int n, int N);

/// Smallest base size at which the scheme admits epsilon-tilde in (0, 1/alpha).
std::uint64_t minimal_admissible_base(const TruncationScheme& scheme, double alpha);

/// Bernoulli labels: 1 marks an entry conditioned to be small (|x| <= tau).
struct LabelMatrix {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits;

    int rows() const { return static_cast<int>(bits.rows()); }
    int cols() const { return static_cast<int>(bits.cols()); }
    double fill_fraction() const { return bits.cast<double>().mean(); }
};

/// P(|x| <= tau) used for the label Bernoulli. Closed form for Pareto
/// (requires tau >= 1), high-accuracy numerical CDF otherwise.
double small_entry_prob(const TailLaw& law, double tau);

LabelMatrix sample_label_matrix(const TailLaw& law, double tau, int N, int n, std::uint64_t key);

/// One unconditional draw of the entry law.
double sample_entry(const TailLaw& law, CounterRng& rng);

enum class Side { Small, Large };

/// One draw of x conditioned on |x| <= tau (Small) or |x| >= tau (Large).
/// Closed-form inverse CDFs for Pareto and the slow-varying tail; rejection
/// against the unconditional law for AlphaStable.
double sample_conditional(const TailLaw& law, double tau, Side side, CounterRng& rng);

/// Matrix of i.i.d. entries; entry (i, j) draws from the stream
/// (key, role, i, j).
Mat sample_matrix(const TailLaw& law, int N, int n, std::uint64_t key);
Mat sample_conditional_matrix(const TailLaw& law, double tau, Side side, int N, int n, std::uint64_t key);
Mat sample_gaussian_matrix(int N, int n, std::uint64_t key);

} // namespace ssv
