#include "ml2v/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "ml2v/contour.hpp"
#include "ml2v/gamma.hpp"
#include "ml2v/representations.hpp"

namespace ml2v {
namespace {

using ld = long double;
using cld = std::complex<long double>;

void check_orders(const TruncationOrders& o) {
    if (o.p_alpha < 1 || o.p_beta < 1) throw DomainError("truncation orders must be >= 1");
}

double tau_upper(const ThetaWindow& w) {
    return w.upper_unwrapped > w.lower ? w.upper_unwrapped : w.upper;
}

// An omitted pole only leaves a trace in the remainder when its exponential
// factor e^(v^(1/a)) is small; in the growth sector it is simply absent.
bool decays(cplx v, double a) { return std::real(std::pow(v, 1.0 / a)) <= 0.0; }

// Size of an omitted residue pair that coincides (x^(beta/alpha) = y): the
// limit is a derivative of the residue numerator, bounded generously here.

double degenerate_pair_bound(cplx x, cplx y, const Parameters& p) {
    auto num = [&](cplx v, double a, double b) {
        const cplx lv = std::log(v);
        const cplx expo = (1.0 + b - p.mu) / a;
        return std::abs(std::exp(std::exp(lv / a) + expo * lv)) / a;
    };
    const double fx = decays(x, p.alpha) ? num(x, p.alpha, p.beta) : 0.0;
    const double fy = decays(y, p.beta) ? num(y, p.beta, p.alpha) : 0.0;
    const double spread = 2.0 + std::pow(std::abs(x), 1.0 / p.alpha) +
                          std::pow(std::abs(y), 1.0 / p.beta) +
                          std::abs((1.0 + p.beta - p.mu) / p.alpha) +
                          std::abs((1.0 + p.alpha - p.mu) / p.beta);
    const double slope =
        (p.beta / p.alpha) * std::pow(std::abs(x), p.beta / p.alpha - 1.0);
    return 2.0 * (fx + fy) * spread / std::min(1.0, slope);
}

}  // namespace

AsymptoticCase classify_case(cplx x, cplx y, const Parameters& params, double tau1) {
    const ThetaWindow w = theta_window(params);
    if (!(tau1 > w.lower) || tau1 > w.upper) {
        std::ostringstream os;
        os << "tau1=" << tau1 << " outside (" << w.lower << ", " << w.upper << "]";
        throw DomainError(os.str());
    }
    const bool x_in = std::abs(std::arg(x)) <= tau1 / params.beta;
    const bool y_in = std::abs(std::arg(y)) <= tau1 / params.alpha;
    if (x_in && y_in) return AsymptoticCase::Case1;
    if (x_in) return AsymptoticCase::Case2;
    if (y_in) return AsymptoticCase::Case3;
    return AsymptoticCase::Case4;
}

cplx asympt_tail_sum(cplx x, cplx y, const Parameters& params, const TruncationOrders& orders) {
    check_orders(orders);
    if (x == 0.0 || y == 0.0) throw DomainError("asymptotic sum needs x, y != 0");
    const cld ix = 1.0L / cld(x.real(), x.imag());
    const cld iy = 1.0L / cld(y.real(), y.imag());
    const cld mu(params.mu.real(), params.mu.imag());
    cld sum = 0.0L;
    cld xp = 1.0L;
    for (int n = 1; n <= orders.p_beta; ++n) {
        xp *= ix;
        cld yp = 1.0L;
        for (int m = 1; m <= orders.p_alpha; ++m) {
            yp *= iy;
            const cld s = mu - static_cast<ld>(n) * params.alpha - static_cast<ld>(m) * params.beta;
            sum += xp * yp * recip_gamma_ext(s);
        }
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

double error_model(cplx x, cplx y, const TruncationOrders& orders) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    return (std::pow(ax, -orders.p_beta) + std::pow(ay, -orders.p_alpha)) / (ax * ay);
}

double default_error_constant(const Parameters& params, const TruncationOrders& orders) {
    check_orders(orders);
    double c = 0.0;
    for (int n = 1; n <= orders.p_beta + 2; ++n) {
        for (int m = 1; m <= orders.p_alpha + 2; ++m) {
            if (n <= orders.p_beta && m <= orders.p_alpha) continue;
            const cplx s = params.mu - static_cast<double>(n) * params.alpha -
                           static_cast<double>(m) * params.beta;
            c = std::max(c, std::abs(recip_gamma(s)));
        }
    }
    return 2.0 * c;
}

double default_tau1(cplx x, cplx y, const Parameters& params) {
    const ThetaWindow w = theta_window(params);
    if (w.empty()) throw DomainError("empty theta window");
    const double hi = tau_upper(w);
    const double px = params.beta * std::abs(std::arg(x));
    const double py = params.alpha * std::abs(std::arg(y));
    double best = hi;
    double best_margin = -1.0;
    for (int i = 64; i >= 1; --i) {
        const double tau = w.lower + (hi - w.lower) * i / 64.0;
        const double margin = std::min(std::abs(px - tau), std::abs(py - tau));
        if (margin > best_margin + 1e-12) {
            best_margin = margin;
            best = tau;
        }
    }
    return best;
}

Evaluation eval_asymptotic(cplx x, cplx y, const Parameters& params,
                           const TruncationOrders& orders, double tau1,
                           std::optional<double> error_constant) {
    check_orders(orders);
    if (std::abs(x) < kAsymptoticFloor || std::abs(y) < kAsymptoticFloor) {
        std::ostringstream os;
        os << "|x|, |y| must be at least " << kAsymptoticFloor << " for the expansion";
        throw MagnitudeFloor(os.str());
    }
    const AsymptoticCase kase = classify_case(x, y, params, tau1);
    const bool use_x = kase == AsymptoticCase::Case1 || kase == AsymptoticCase::Case2;
    const bool use_y = kase == AsymptoticCase::Case1 || kase == AsymptoticCase::Case3;

    cplx value = asympt_tail_sum(x, y, params, orders);
    double magnitude = std::abs(value);
    if (use_x) {
        const cplx r = residue_x(x, y, params).value;
        value += r;
        magnitude += std::abs(r);
    }
    if (use_y) {
        const cplx r = residue_y(x, y, params).value;
        value += r;
        magnitude += std::abs(r);
    }

    double dropped = 0.0;
    try {
        if (!use_x && decays(x, params.alpha)) dropped += std::abs(residue_x(x, y, params).value);
        if (!use_y && decays(y, params.beta)) dropped += std::abs(residue_y(x, y, params).value);
    } catch (const DegenerateDenominator&) {
        dropped = degenerate_pair_bound(x, y, params);
    }

    const double c = error_constant ? *error_constant : default_error_constant(params, orders);
    Evaluation ev;
    ev.method = Method::Asymptotic;
    ev.asymptotic_case = kase;
    ev.error_constant = c;
    ev.value = value;
    ev.est_error = c * error_model(x, y, orders) + dropped +
                   8.0 * std::numeric_limits<double>::epsilon() * magnitude;
    return ev;
}

double calibrate_error_constant(const Parameters& params, const TruncationOrders& orders,
                                cplx dir_x, cplx dir_y) {
    double c = 0.0;
    AutoOptions ref;
    ref.allow_asymptotic = false;
    for (const double t : {10.0, 20.0, 40.0}) {
        const cplx x = t * dir_x;
        const cplx y = t * dir_y;
        const Evaluation truth = eval_auto(x, y, params, 1e-14, ref);
        const Evaluation a =
            eval_asymptotic(x, y, params, orders, default_tau1(x, y, params), 0.0);
        // Omitted residues are already accounted for separately.
        const double err = std::max(0.0, std::abs(a.value - truth.value) - truth.est_error -
                                             a.est_error);
        c = std::max(c, err / error_model(x, y, orders));
    }
    return 2.0 * c;
}

cplx expansion_rhs(cplx zeta, cplx x, cplx y, const Parameters& params,
                   const TruncationOrders& orders) {
    check_orders(orders);
    const cld z(zeta.real(), zeta.imag());
    const cld xl(x.real(), x.imag());
    const cld yl(y.real(), y.imag());
    const cld a = std::pow(z, 1.0L / static_cast<ld>(params.beta));
    const cld b = std::pow(z, 1.0L / static_cast<ld>(params.alpha));
    const int pn = orders.p_beta;
    const int pm = orders.p_alpha;

    cld sum = 0.0L;
    cld an = 1.0L;  // A^(n-1) / x^n
    for (int n = 1; n <= pn; ++n) {
        an = (n == 1) ? 1.0L / xl : an * a / xl;
        cld bm = 1.0L;
        for (int m = 1; m <= pm; ++m) {
            bm = (m == 1) ? 1.0L / yl : bm * b / yl;
            sum += an * bm;
        }
    }
    const cld ap = std::pow(a, static_cast<ld>(pn));
    const cld bq = std::pow(b, static_cast<ld>(pm));
    const cld xp = std::pow(xl, static_cast<ld>(pn));
    const cld yq = std::pow(yl, static_cast<ld>(pm));
    const cld rest = (xp * bq + yq * ap - ap * bq) / (xp * yq * (a - xl) * (b - yl));
    const cld total = sum + rest;
    return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

cplx hankel_term(cplx s, const Parameters& params, const ContourSpec& spec, double tol) {
    if (!(tol > 0.0)) throw DomainError("hankel_term: tol must be positive");
    check_admissible(spec, params);
    const double ab = params.alpha * params.beta;
    const double decay = 1.0 / ab;
    const cplx c = (1.0 - s) / ab - 1.0;
    IntegrandSpec f;
    f.decay_exponent = decay;
    f.f = [=](const ContourPoint& p) {
        const cplx lz(std::log(p.r), p.phi);
        return std::exp(std::exp(lz * decay) + c * lz);
    };
    const double norm = 2.0 * kPi * ab;
    const DiscretizedContour path = build_contour(spec, decay, tol * 1e-3);
    const QuadratureResult q = integrate(path, f, tol * norm);
    return q.value / cplx(0.0, norm);
}

}  // namespace ml2v
