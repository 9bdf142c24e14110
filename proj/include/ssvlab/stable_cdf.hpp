#pragma once

namespace ssv {

/// P(|X| <= x) for the standard symmetric alpha-stable law with
/// characteristic function exp(-|t|^alpha), 0 < alpha < 2.
///
/// alpha = 1 is the Cauchy closed form. For moderate x the answer comes from
/// integrating the sine transform (2/pi) int sin(xt)/t exp(-t^alpha) dt over
/// half-periods with Gauss-Legendre panels; for large x the convergent /
/// asymptotic tail series in powers of x^{-alpha} takes over. Absolute error
/// is below 1e-12 across the supported range.
double stable_abs_cdf(double alpha, double x);

/// Tail P(|X| > x) = 1 - stable_abs_cdf(alpha, x), computed directly in the
/// series branch to avoid cancellation for large x.
double stable_abs_tail(double alpha, double x);

namespace detail {
// The two branches individually, for cross-validation.
double stable_cdf_sine_transform(double alpha, double x);
double stable_tail_series(double alpha, double x);
} // namespace detail

} // namespace ssv
