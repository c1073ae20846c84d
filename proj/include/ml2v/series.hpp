#pragma once

#include "ml2v/core.hpp"

namespace ml2v {

struct SeriesBudget {
    /// Target for the certified tail, in the sense of within_tolerance.
    double tol = 1e-12;
    /// Cap on the number of anti-diagonal blocks n + m = k.
    int max_terms = 2000;
};

/// Sums E_{alpha,beta}(x, y; mu) = sum x^n y^m / Gamma(n alpha + m beta + mu)
/// by anti-diagonal blocks in extended precision.
///
/// The tail is certified once the largest term of two consecutive blocks has
/// at least halved; it is then bounded by twice the last block's absolute sum.
/// est_error adds a rounding bound proportional to the sum of |terms|, so
/// heavy cancellation shows up as a large estimate. When that estimate misses
/// the tolerance the sum is redone in MPFR with a cancellation-aware precision.
Evaluation eval_double_series(cplx x, cplx y, const Parameters& params,
                              const SeriesBudget& budget = {});

/// One-variable two-parametric Mittag-Leffler function
/// E_rho(z; kappa) = sum z^n / Gamma(rho n + kappa).
Evaluation eval_ml_one(cplx z, double rho, cplx kappa, const SeriesBudget& budget = {});

}  // namespace ml2v
