#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace ml2v {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Error hierarchy. Every numeric entry point reports failure by throwing one
// of these; the CLI maps them onto its exit-code contract.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters outside every supported regime.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An argument lies in the wrong region for the requested representation.
class RegionError : public Error {
public:
    using Error::Error;
};

/// A pole of the integrand is closer to the contour than the declared floor.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of nodes before reaching its tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// The contour has no exponential decay along its rays.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A residue denominator (or x^beta - y^alpha) is below the degeneracy floor.
class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

/// Arguments too small for the large-argument expansions to mean anything.
class MagnitudeFloor : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Regime {
    Standard,  ///< 0 < alpha, beta < 2 and alpha*beta < 2
    Boundary,  ///< alpha == 2 or beta == 2 with Re(mu) > 0
};

struct Parameters {
    double alpha = 1.0;
    double beta = 1.0;
    cplx mu{1.0, 0.0};
    Regime regime = Regime::Standard;
    /// Set when the admissible theta window is narrower than 5% of pi.
    bool thin_window = false;
};

/// Hankel contour gamma(epsilon; theta): two rays at +-theta joined by an arc
/// of radius epsilon, traversed with non-decreasing argument.
struct ContourSpec {
    double epsilon = 1.0;
    double theta = kPi / 2;
};

struct DerivedContour {
    double eps_alpha;    ///< arc radius of the x-plane contour, epsilon^(1/beta)
    double eps_beta;     ///< arc radius of the y-plane contour, epsilon^(1/alpha)
    double theta_alpha;  ///< theta / beta
    double theta_beta;   ///< theta / alpha
};

enum class RegionLabel { OmegaMinus, OmegaPlus, OnContour };

enum class Method { Series, Lemma1, Lemma2, Remark1, Lemma3, Asymptotic, Oracle };

enum class AsymptoticCase { Case1, Case2, Case3, Case4 };

struct Evaluation {
    cplx value{0.0, 0.0};
    /// Absolute a-posteriori error bound; +inf when the tolerance was not met.
    double est_error = 0.0;
    Method method = Method::Series;
    std::optional<AsymptoticCase> asymptotic_case;
    /// Constant of the asymptotic error model, when one was used.
    std::optional<double> error_constant;
};

/// Raised when a summation or the dispatcher cannot certify its tolerance.
/// Carries the best partial result (est_error = +inf).
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, Evaluation partial)
        : Error(what), partial_(partial) {}
    const Evaluation& partial() const noexcept { return partial_; }

private:
    Evaluation partial_;
};

std::string to_string(Method m);
std::string to_string(RegionLabel r);
std::string to_string(AsymptoticCase c);
std::string to_string(Regime r);
/// "series", "lemma1", ..., "asymptotic-case3", "oracle".
std::string method_tag(const Evaluation& e);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Checks (alpha, beta, mu) against the standard and boundary regimes.
Parameters validate_params(double alpha, double beta, cplx mu);

/// Theta window (lower, upper]: lower = pi*alpha*beta/2, upper = min(pi, pi*alpha*beta).
struct ThetaWindow {
    double lower;
    double upper;
    /// Upper limit that additionally keeps theta/alpha and theta/beta <= pi,
    /// so both variable-plane contours are genuine Hankel contours.
    double upper_unwrapped;
    bool empty() const { return !(upper > lower); }
};
ThetaWindow theta_window(const Parameters& params);

/// Throws DomainError unless epsilon > 0 and theta lies in (0, pi].
void check_contour(const ContourSpec& spec);
/// Throws DomainError unless the contour also satisfies the theta window.
void check_admissible(const ContourSpec& spec, const Parameters& params);

DerivedContour derived_contour_params(const ContourSpec& spec, const Parameters& params);

/// Euclidean distance from a point to gamma(epsilon; theta).
double distance_to_contour(cplx point, const ContourSpec& contour);

double default_boundary_tolerance(cplx point);

RegionLabel classify_region(cplx point, const ContourSpec& contour, double delta_b);
RegionLabel classify_region(cplx point, const ContourSpec& contour);

/// True when est <= tol * max(1, |value|); the acceptance test used by every
/// evaluator when deciding whether a tolerance has been met.
inline bool within_tolerance(double est, cplx value, double tol) {
    const double scale = std::max(1.0, std::abs(value));
    return est <= tol * scale;
}

}  // namespace ml2v
