#pragma once

#include <optional>

#include "ml2v/core.hpp"

namespace ml2v {

struct TruncationOrders {
    int p_alpha = 3;  ///< upper limit of the m-sum (powers of 1/y)
    int p_beta = 3;   ///< upper limit of the n-sum (powers of 1/x)
};

/// Arguments below this magnitude are rejected by eval_asymptotic.
inline constexpr double kAsymptoticFloor = 5.0;

/// Sector table: x is compared against tau1/beta, y against tau1/alpha.
AsymptoticCase classify_case(cplx x, cplx y, const Parameters& params, double tau1);

/// sum_{n=1}^{p_beta} sum_{m=1}^{p_alpha} x^-n y^-m / Gamma(mu - alpha n - beta m).
cplx asympt_tail_sum(cplx x, cplx y, const Parameters& params, const TruncationOrders& orders);

/// |xy|^-1 (|x|^-p_beta + |y|^-p_alpha).
double error_model(cplx x, cplx y, const TruncationOrders& orders);

/// Twice the largest |1/Gamma(mu - alpha n - beta m)| over the two rings of
/// terms just beyond the truncation.
double default_error_constant(const Parameters& params, const TruncationOrders& orders);

/// tau1 inside the admissible window that keeps both arguments as far as
/// possible from the sector boundaries.
double default_tau1(cplx x, cplx y, const Parameters& params);

/// Residues selected by the case plus the truncated double sum. est_error is
/// c * error_model + rounding, plus the size of every omitted residue whose
/// exponential factor decays; c comes from default_error_constant unless
/// supplied.
Evaluation eval_asymptotic(cplx x, cplx y, const Parameters& params,
                           const TruncationOrders& orders, double tau1,
                           std::optional<double> error_constant = std::nullopt);

/// Calibrates c against the dispatcher (integral or series) at
/// t = 10, 20, 40 along x = t * dir_x, y = t * dir_y.
double calibrate_error_constant(const Parameters& params, const TruncationOrders& orders,
                                cplx dir_x, cplx dir_y);

/// Right-hand side of the finite expansion of 1/((A - x)(B - y)) with
/// A = zeta^(1/beta), B = zeta^(1/alpha); equal to the left side exactly.
cplx expansion_rhs(cplx zeta, cplx x, cplx y, const Parameters& params,
                   const TruncationOrders& orders);

/// (1/2 pi i)(1/alpha beta) times the contour integral of
/// e^(zeta^(1/alpha beta)) zeta^((1-s)/(alpha beta) - 1); equals 1/Gamma(s).
cplx hankel_term(cplx s, const Parameters& params, const ContourSpec& spec, double tol);

}  // namespace ml2v
