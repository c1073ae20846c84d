#pragma once

#include <optional>
#include <vector>

#include "ml2v/contour.hpp"
#include "ml2v/core.hpp"

namespace ml2v {

enum class PoleSource { XPole, YPole };

struct ResidueTerm {
    PoleSource source;
    cplx value;
};

/// (1/alpha) e^(x^(1/alpha)) x^((1+beta-mu)/alpha) / (x^(beta/alpha) - y).
/// Throws DegenerateDenominator when the denominator is below the floor.
ResidueTerm residue_x(cplx x, cplx y, const Parameters& params);
/// (1/beta) e^(y^(1/beta)) y^((1+alpha-mu)/beta) / (y^(alpha/beta) - x).
ResidueTerm residue_y(cplx x, cplx y, const Parameters& params);

/// 1e-6 (1 + |x|^beta + |y|^alpha), the floor for |x^beta - y^alpha|.
double degeneracy_floor(cplx x, cplx y, const Parameters& params);
bool is_degenerate(cplx x, cplx y, const Parameters& params);

/// Region of x relative to gamma(eps^(1/beta); theta/beta) and of y relative
/// to gamma(eps^(1/alpha); theta/alpha).
///
/// When the variable-plane angle exceeds pi (possible only on the boundary
/// alpha = 2 or beta = 2) the contour wraps past the negative axis. Then only
/// points inside the disk are classified (OmegaMinus); anything outside it
/// raises RegionError.
struct ArgumentRegions {
    RegionLabel x;
    RegionLabel y;
};
ArgumentRegions classify_arguments(cplx x, cplx y, const Parameters& params,
                                   const ContourSpec& spec);

/// Preimages in the zeta plane of the poles zeta^(1/beta) = x and
/// zeta^(1/alpha) = y on the principal sheet.
std::vector<cplx> integrand_poles(cplx x, cplx y, const Parameters& params);

struct RepresentationOptions {
    /// Poles must stay at least pole_floor_factor * epsilon from the contour.
    double pole_floor_factor = 1e-3;
    long node_budget = default_node_budget();
};

/// (1/2 pi i)(1/alpha beta) times the contour integral of
/// e^(zeta^(1/alpha beta)) zeta^c / ((zeta^(1/alpha) - y)(zeta^(1/beta) - x)),
/// c = (1+alpha+beta-mu)/(alpha beta) - 1, with an absolute tolerance.
QuadratureResult integral_term(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                               double tol, const RepresentationOptions& opts = {});

/// Both arguments in Omega-minus: the bare contour integral.
Evaluation eval_lemma1(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts = {});
/// x in Omega-minus, y in Omega-plus: y residue plus the integral.
Evaluation eval_lemma2(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts = {});
/// x in Omega-plus, y in Omega-minus: x residue plus the integral.
Evaluation eval_remark1(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                        double tol, const RepresentationOptions& opts = {});
/// Both in Omega-plus: both residues plus the integral.
Evaluation eval_lemma3(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts = {});

/// Picks whichever of the four representations the regions call for.
Evaluation eval_representation(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                               double tol, const RepresentationOptions& opts = {});

/// Scores a set of admissible (epsilon, theta) pairs by how far the integrand
/// poles sit from the contour and returns the best, or nothing if every
/// candidate leaves a pole too close (or an argument unclassifiable).
std::optional<ContourSpec> choose_contour(cplx x, cplx y, const Parameters& params);

struct AutoOptions {
    bool allow_series = true;
    bool allow_asymptotic = true;
    /// Asymptotics are tried once min(|x|, |y|) reaches this.
    double asymptotic_threshold = 12.0;
    /// Both |x| and |y| at most this: sum the series directly.
    double series_radius = 1.0;
};

/// Regime dispatcher: series for small arguments, asymptotics for large ones,
/// otherwise the integral representation that fits, with the series as the
/// last resort. Only BudgetExceeded escapes.
Evaluation eval_auto(cplx x, cplx y, const Parameters& params, double tol,
                     const AutoOptions& opts = {});

}  // namespace ml2v
