#pragma once

#include <complex>

#include "ml2v/core.hpp"

namespace ml2v {

struct GammaConfig {
    /// Bound on the error of recip_gamma, absolute for |1/Gamma| <= 1 and
    /// relative above that. Must lie in [1e-15, 1e-6].
    double accuracy_target = 1e-15;
};

/// 1/Gamma(s) on the whole complex plane; exactly zero at s = 0, -1, -2, ...
///
/// Computed in extended precision from the Stirling series of log Gamma,
/// after shifting Re(s) far enough to the right that the truncated series'
/// remainder bound meets the accuracy target. Far in the left half-plane the
/// reflection formula is applied first.
cplx recip_gamma(cplx s, const GammaConfig& config = {});

/// Extended-precision variant used by the series summation.
std::complex<long double> recip_gamma_ext(std::complex<long double> s);

/// (1/2 pi i) times the Hankel integral of e^u u^(-s) along the contour,
/// evaluated by adaptive quadrature. Needs theta > pi/2 for decay.
cplx recip_gamma_hankel(cplx s, const ContourSpec& contour, double tol);

namespace detail {
/// log Gamma(s) (any branch); used only for magnitude estimates.
std::complex<long double> log_gamma_ext(std::complex<long double> s);
}  // namespace detail

}  // namespace ml2v
