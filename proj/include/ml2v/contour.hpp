#pragma once

#include <functional>
#include <vector>

#include "ml2v/core.hpp"

namespace ml2v {

enum class SegmentKind { InRay, Arc, OutRay };

/// One oriented piece of a truncated Hankel contour. Rays are parameterised by
/// radius r in [lower, upper] (the in-ray is traversed from upper to lower),
/// the arc by angle phi in [lower, upper].
struct Segment {
    SegmentKind kind;
    double lower;
    double upper;
    double angle;  ///< ray angle (+-theta); unused for the arc
};

struct DiscretizedContour {
    ContourSpec spec;
    double truncation_radius;
    std::vector<Segment> segments;  ///< in-ray, arc, out-ray
    double decay_exponent;          ///< p in exp(zeta^p); 1/(alpha*beta) for the M-L kernels
};

/// A node on the contour together with the polar coordinates that pick the
/// branch of every fractional power. On the doubled ray of theta = pi the
/// lower passage carries phi = -pi and the upper passage phi = +pi.
struct ContourPoint {
    cplx z;
    double r;
    double phi;
};

struct IntegrandSpec {
    std::function<cplx(const ContourPoint&)> f;
    double decay_exponent = 1.0;
    /// Declared poles must stay at least this far from the contour.
    double pole_floor = 0.0;
    std::vector<cplx> poles;
};

struct QuadratureResult {
    cplx value;
    double est_error;
    long nodes;
};

/// Node budget for one integration; ML2V_NODE_BUDGET overrides the default of 2e5.
long default_node_budget();

/// Multiplier applied to every quadrature and truncation tolerance;
/// ML2V_QUAD_TOL_SCALE overrides the default of 1. Used for negative controls.
double quadrature_tolerance_scale();

/// Truncates gamma(epsilon; theta) at the radius R where
/// exp(cos(theta * decay) * R^decay) drops below trunc_tol.
DiscretizedContour build_contour(const ContourSpec& spec, double decay, double trunc_tol);

/// Adaptive Gauss-Kronrod (7/15) integration of f(zeta) dzeta along the
/// oriented contour. Rays start from geometrically graded panels
/// [eps 2^j, eps 2^(j+1)], the arc from uniform-angle panels; the panel with
/// the largest embedded error estimate is bisected until the total estimate
/// drops below tol. When rounding dominates (the estimate cannot fall below
/// a multiple of eps * integral of |f|) the target is relaxed to that floor
/// and the reported est_error says so.
QuadratureResult integrate(const DiscretizedContour& contour, const IntegrandSpec& f, double tol,
                           long node_budget = default_node_budget());

/// Non-adaptive composite Gauss-Legendre (7 point) rule with the given number
/// of equal panels per segment. Exposed for convergence-order checks.
cplx integrate_fixed(const DiscretizedContour& contour, const IntegrandSpec& f,
                     int panels_per_segment);

}  // namespace ml2v
