#include "ml2v/core.hpp"

#include <cmath>
#include <sstream>

namespace ml2v {

std::string to_string(Method m) {
    switch (m) {
        case Method::Series: return "series";
        case Method::Lemma1: return "lemma1";
        case Method::Lemma2: return "lemma2";
        case Method::Remark1: return "remark1";
        case Method::Lemma3: return "lemma3";
        case Method::Asymptotic: return "asymptotic";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

std::string to_string(RegionLabel r) {
    switch (r) {
        case RegionLabel::OmegaMinus: return "omega-minus";
        case RegionLabel::OmegaPlus: return "omega-plus";
        case RegionLabel::OnContour: return "on-contour";
    }
    return "unknown";
}

std::string to_string(AsymptoticCase c) {
    switch (c) {
        case AsymptoticCase::Case1: return "case1";
        case AsymptoticCase::Case2: return "case2";
        case AsymptoticCase::Case3: return "case3";
        case AsymptoticCase::Case4: return "case4";
    }
    return "unknown";
}

std::string to_string(Regime r) {
    return r == Regime::Standard ? "standard" : "boundary";
}

std::string method_tag(const Evaluation& e) {
    if (e.method == Method::Asymptotic && e.asymptotic_case) {
        return "asymptotic-" + to_string(*e.asymptotic_case);
    }
    return to_string(e.method);
}

Parameters validate_params(double alpha, double beta, cplx mu) {
    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "invalid parameters (alpha=" << alpha << ", beta=" << beta << ", mu=" << mu
           << "): " << why;
        throw DomainError(os.str());
    };
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(mu.real()) ||
        !std::isfinite(mu.imag())) {
        fail("non-finite value");
    }
    if (alpha <= 0.0 || beta <= 0.0) fail("alpha and beta must be positive");
    if (alpha > 2.0 || beta > 2.0) fail("alpha and beta must not exceed 2");

    Parameters p{alpha, beta, mu, Regime::Standard, false};
    if (alpha == 2.0 || beta == 2.0) {
        if (mu.real() <= 0.0) fail("alpha = 2 or beta = 2 requires Re(mu) > 0");
        p.regime = Regime::Boundary;
        if (alpha * beta >= 2.0) fail("alpha*beta must be < 2 (empty theta window)");
    } else if (alpha * beta >= 2.0) {
        fail("alpha*beta must be < 2");
    }
    const ThetaWindow w = theta_window(p);
    p.thin_window = (w.upper - w.lower) < 0.05 * kPi;
    return p;
}

ThetaWindow theta_window(const Parameters& params) {
    const double ab = params.alpha * params.beta;
    ThetaWindow w;
    w.lower = kPi * ab / 2.0;
    w.upper = std::min(kPi, kPi * ab);
    w.upper_unwrapped = std::min(w.upper, kPi * std::min(params.alpha, params.beta));
    return w;
}

void check_contour(const ContourSpec& spec) {
    if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) {
        throw DomainError("contour radius epsilon must be positive");
    }
    if (!(spec.theta > 0.0) || spec.theta > kPi) {
        throw DomainError("contour angle theta must lie in (0, pi]");
    }
}

void check_admissible(const ContourSpec& spec, const Parameters& params) {
    check_contour(spec);
    const ThetaWindow w = theta_window(params);
    if (!(spec.theta > w.lower) || spec.theta > w.upper) {
        std::ostringstream os;
        os << "theta=" << spec.theta << " outside (" << w.lower << ", " << w.upper
           << "] for alpha*beta=" << params.alpha * params.beta;
        throw DomainError(os.str());
    }
}

DerivedContour derived_contour_params(const ContourSpec& spec, const Parameters& params) {
    check_contour(spec);
    return DerivedContour{
        std::pow(spec.epsilon, 1.0 / params.beta),
        std::pow(spec.epsilon, 1.0 / params.alpha),
        spec.theta / params.beta,
        spec.theta / params.alpha,
    };
}

double distance_to_contour(cplx point, const ContourSpec& c) {
    const double r = std::abs(point);
    const double phi = std::arg(point);
    const cplx upper_end = std::polar(c.epsilon, c.theta);
    const cplx lower_end = std::polar(c.epsilon, -c.theta);

    double best = std::abs(phi) <= c.theta
                      ? std::abs(r - c.epsilon)
                      : std::min(std::abs(point - upper_end), std::abs(point - lower_end));

    for (const double angle : {c.theta, -c.theta}) {
        const cplx dir = std::polar(1.0, angle);
        const double t = std::max(c.epsilon, (point * std::conj(dir)).real());
        best = std::min(best, std::abs(point - t * dir));
    }
    return best;
}

double default_boundary_tolerance(cplx point) {
    return 1e-9 * std::max(1.0, std::abs(point));
}

RegionLabel classify_region(cplx point, const ContourSpec& contour, double delta_b) {
    if (distance_to_contour(point, contour) <= delta_b) return RegionLabel::OnContour;
    const bool inside_sector = std::abs(std::arg(point)) < contour.theta;
    const bool outside_arc = std::abs(point) > contour.epsilon;
    return inside_sector && outside_arc ? RegionLabel::OmegaPlus : RegionLabel::OmegaMinus;
}

RegionLabel classify_region(cplx point, const ContourSpec& contour) {
    return classify_region(point, contour, default_boundary_tolerance(point));
}

}  // namespace ml2v
