#include "ml2v/representations.hpp"

#include <cmath>
#include <sstream>

namespace ml2v {
namespace {

using ld = long double;
using cld = std::complex<long double>;

cld widen(cplx v) { return {v.real(), v.imag()}; }
cplx narrow(cld v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

// (1/p) e^(v^(1/p)) v^((1+q-mu)/p) / (v^(q/p) - w); (p, q) = (alpha, beta)
// for the x pole and (beta, alpha) for the y pole.
cld residue_generic(cplx v, cplx w, double p, double q, cplx mu, const char* name) {
    if (v == 0.0) {
        throw DegenerateDenominator(std::string(name) + " residue undefined at zero");
    }
    const cld lv = std::log(widen(v));
    const cld den = std::exp(lv * static_cast<ld>(q / p)) - widen(w);
    const double floor =
        1e-6 * (1.0 + std::pow(std::abs(v), q / p) + std::abs(w));
    if (std::abs(den) < floor) {
        std::ostringstream os;
        os << name << " residue denominator |" << narrow(den) << "| below floor " << floor;
        throw DegenerateDenominator(os.str());
    }
    const cld expo = (1.0L + static_cast<ld>(q) - widen(mu)) / static_cast<ld>(p);
    const cld num = std::exp(std::exp(lv / static_cast<ld>(p)) + expo * lv);
    return num / (static_cast<ld>(p) * den);
}

RegionLabel classify_variable(cplx v, double eps_v, double theta_v) {
    if (theta_v <= kPi) return classify_region(v, ContourSpec{eps_v, theta_v});
    const double r = std::abs(v);
    if (std::abs(r - eps_v) <= default_boundary_tolerance(v)) return RegionLabel::OnContour;
    if (r < eps_v) return RegionLabel::OmegaMinus;
    std::ostringstream os;
    os << "argument " << v << " lies outside the disk of a wrapped contour (angle " << theta_v
       << " > pi)";
    throw RegionError(os.str());
}

void push_preimages(std::vector<cplx>& out, cplx v, double p) {
    if (v == 0.0) {
        out.emplace_back(0.0, 0.0);
        return;
    }
    const double r = std::pow(std::abs(v), p);
    const double a = std::arg(v);
    const int kmax = static_cast<int>(std::ceil(1.0 / (2.0 * p))) + 1;
    for (int k = -kmax; k <= kmax; ++k) {
        const double phi = p * (a + 2.0 * kPi * k);
        if (std::abs(phi) <= kPi) out.push_back(std::polar(r, phi));
    }
}

Evaluation eval_core(cplx x, cplx y, const Parameters& params, const ContourSpec& spec, double tol,
                     const RepresentationOptions& opts, bool x_plus, bool y_plus, Method method) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    check_admissible(spec, params);
    if (x_plus && y_plus && is_degenerate(x, y, params)) {
        throw DegenerateDenominator("x^beta = y^alpha to within the degeneracy floor");
    }
    cld residues = 0.0L;
    if (x_plus) residues += residue_generic(x, y, params.alpha, params.beta, params.mu, "x");
    if (y_plus) residues += residue_generic(y, x, params.beta, params.alpha, params.mu, "y");
    const ArgumentRegions reg = classify_arguments(x, y, params, spec);
    const RegionLabel want_x = x_plus ? RegionLabel::OmegaPlus : RegionLabel::OmegaMinus;
    const RegionLabel want_y = y_plus ? RegionLabel::OmegaPlus : RegionLabel::OmegaMinus;
    if (reg.x != want_x || reg.y != want_y) {
        std::ostringstream os;
        os << to_string(method) << " needs x in " << to_string(want_x) << " and y in "
           << to_string(want_y) << ", got " << to_string(reg.x) << " and " << to_string(reg.y);
        throw RegionError(os.str());
    }

    const double scale = std::max(1.0, static_cast<double>(std::abs(residues)));
    const QuadratureResult q = integral_term(x, y, params, spec, 0.5 * tol * scale, opts);

    Evaluation ev;
    ev.method = method;
    ev.value = narrow(residues + widen(q.value));
    ev.est_error = q.est_error + 4.0 * std::numeric_limits<double>::epsilon() *
                                     static_cast<double>(std::abs(residues));
    return ev;
}

}  // namespace

ResidueTerm residue_x(cplx x, cplx y, const Parameters& params) {
    return {PoleSource::XPole,
            narrow(residue_generic(x, y, params.alpha, params.beta, params.mu, "x"))};
}

ResidueTerm residue_y(cplx x, cplx y, const Parameters& params) {
    return {PoleSource::YPole,
            narrow(residue_generic(y, x, params.beta, params.alpha, params.mu, "y"))};
}

double degeneracy_floor(cplx x, cplx y, const Parameters& params) {
    return 1e-6 * (1.0 + std::pow(std::abs(x), params.beta) + std::pow(std::abs(y), params.alpha));
}

bool is_degenerate(cplx x, cplx y, const Parameters& params) {
    const cplx d = std::pow(x, params.beta) - std::pow(y, params.alpha);
    return std::abs(d) < degeneracy_floor(x, y, params);
}

ArgumentRegions classify_arguments(cplx x, cplx y, const Parameters& params,
                                   const ContourSpec& spec) {
    const DerivedContour d = derived_contour_params(spec, params);
    return {classify_variable(x, d.eps_alpha, d.theta_alpha),
            classify_variable(y, d.eps_beta, d.theta_beta)};
}

std::vector<cplx> integrand_poles(cplx x, cplx y, const Parameters& params) {
    std::vector<cplx> poles;
    push_preimages(poles, x, params.beta);
    push_preimages(poles, y, params.alpha);
    return poles;
}

QuadratureResult integral_term(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                               double tol, const RepresentationOptions& opts) {
    check_contour(spec);
    const double ab = params.alpha * params.beta;
    const double decay = 1.0 / ab;
    const double inv_a = 1.0 / params.alpha;
    const double inv_b = 1.0 / params.beta;
    const cplx c = (1.0 + params.alpha + params.beta - params.mu) / ab - 1.0;

    IntegrandSpec f;
    f.decay_exponent = decay;
    f.pole_floor = opts.pole_floor_factor * spec.epsilon;
    f.poles = integrand_poles(x, y, params);
    f.f = [=](const ContourPoint& p) {
        const cplx lz(std::log(p.r), p.phi);
        const cplx za = std::exp(lz * inv_a);
        const cplx zb = std::exp(lz * inv_b);
        return std::exp(std::exp(lz * decay) + c * lz) / ((za - y) * (zb - x));
    };

    const double norm = 2.0 * kPi * ab;
    const DiscretizedContour path = build_contour(spec, decay, std::max(1e-300, tol * 1e-3));
    QuadratureResult q = integrate(path, f, tol * norm, opts.node_budget);
    q.value /= cplx(0.0, norm);
    q.est_error /= norm;
    return q;
}

Evaluation eval_lemma1(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts) {
    return eval_core(x, y, params, spec, tol, opts, false, false, Method::Lemma1);
}

Evaluation eval_lemma2(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts) {
    return eval_core(x, y, params, spec, tol, opts, false, true, Method::Lemma2);
}

Evaluation eval_remark1(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                        double tol, const RepresentationOptions& opts) {
    return eval_core(x, y, params, spec, tol, opts, true, false, Method::Remark1);
}

Evaluation eval_lemma3(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                       double tol, const RepresentationOptions& opts) {
    return eval_core(x, y, params, spec, tol, opts, true, true, Method::Lemma3);
}

Evaluation eval_representation(cplx x, cplx y, const Parameters& params, const ContourSpec& spec,
                               double tol, const RepresentationOptions& opts) {
    const ArgumentRegions reg = classify_arguments(x, y, params, spec);
    if (reg.x == RegionLabel::OnContour || reg.y == RegionLabel::OnContour) {
        throw RegionError("argument lies on the contour image");
    }
    const bool xp = reg.x == RegionLabel::OmegaPlus;
    const bool yp = reg.y == RegionLabel::OmegaPlus;
    if (!xp && !yp) return eval_lemma1(x, y, params, spec, tol, opts);
    if (!xp) return eval_lemma2(x, y, params, spec, tol, opts);
    if (!yp) return eval_remark1(x, y, params, spec, tol, opts);
    return eval_lemma3(x, y, params, spec, tol, opts);
}

std::optional<ContourSpec> choose_contour(cplx x, cplx y, const Parameters& params) {
    const ThetaWindow w = theta_window(params);
    if (w.empty()) return std::nullopt;
    const double hi = w.upper_unwrapped > w.lower ? w.upper_unwrapped : w.upper;
    const double ab = params.alpha * params.beta;
    const std::vector<cplx> poles = integrand_poles(x, y, params);

    std::vector<double> radii;
    for (int k = -6; k <= 6; ++k) radii.push_back(std::pow(2.0, 0.5 * k));
    for (const cplx& p : poles) {
        const double r = std::abs(p);
        if (r > 0.0) {
            radii.push_back(1.5 * r);
            radii.push_back(r / 1.5);
        }
    }
    // Keeps e^(zeta^(1/alpha beta)) on the arc below e^12.
    const double eps_max = std::pow(12.0, ab);

    std::optional<ContourSpec> best;
    double best_score = -0.5;
    for (const double frac : {0.999, 0.85, 0.7, 0.55}) {
        const double theta = w.lower + frac * (hi - w.lower);
        for (const double eps : radii) {
            if (eps > eps_max) continue;
            const ContourSpec spec{eps, theta};
            try {
                const ArgumentRegions reg = classify_arguments(x, y, params, spec);
                if (reg.x == RegionLabel::OnContour || reg.y == RegionLabel::OnContour) continue;
            } catch (const RegionError&) {
                continue;
            }
            double clearance = 1.0;
            for (const cplx& p : poles) {
                clearance = std::min(clearance,
                                     distance_to_contour(p, spec) / std::max(eps, std::abs(p)));
            }
            // e^(eps^(1/alpha beta)) on the arc costs digits to cancellation.
            const double score = clearance - 0.04 * std::pow(eps, 1.0 / ab) -
                                 0.01 * std::abs(std::log2(eps)) - 0.02 * (0.999 - frac);
            if (score > best_score) {
                best_score = score;
                best = spec;
            }
        }
    }
    return best;
}

}  // namespace ml2v
