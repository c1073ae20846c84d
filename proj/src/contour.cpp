#include "ml2v/contour.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <sstream>

namespace ml2v {
namespace {

// 15-point Kronrod abscissae (non-negative half) and weights; the odd
// entries are the 7-point Gauss abscissae.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    int segment;
    double a;
    double b;
    cplx kronrod;
    double err;
    double abs_integral;
};

class PanelEvaluator {
public:
    PanelEvaluator(const DiscretizedContour& c, const IntegrandSpec& f) : c_(c), f_(f) {}

    // Integrand times dzeta/dt, including the segment orientation.
    cplx weighted(const Segment& s, double t) const {
        ContourPoint p;
        cplx jac;
        if (s.kind == SegmentKind::Arc) {
            p.r = c_.spec.epsilon;
            p.phi = t;
            p.z = std::polar(p.r, t);
            jac = cplx(0.0, 1.0) * p.z;
        } else {
            p.r = t;
            p.phi = s.angle;
            const cplx dir = std::polar(1.0, s.angle);
            p.z = t * dir;
            jac = s.kind == SegmentKind::InRay ? -dir : dir;
        }
        const cplx v = f_.f(p) * jac;
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "non-finite integrand at zeta=" << p.z;
            throw QuadratureError(os.str());
        }
        return v;
    }

    Panel eval(int seg, double a, double b) const {
        const Segment& s = c_.segments[seg];
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const cplx fc = weighted(s, center);
        cplx k = fc * kWgk[7];
        cplx g = fc * kWg[3];
        double abs_k = std::abs(fc) * kWgk[7];
        for (int j = 0; j < 7; ++j) {
            const double dx = half * kXgk[j];
            const cplx f1 = weighted(s, center - dx);
            const cplx f2 = weighted(s, center + dx);
            k += kWgk[j] * (f1 + f2);
            abs_k += kWgk[j] * (std::abs(f1) + std::abs(f2));
            if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
        }
        k *= half;
        g *= half;
        return Panel{seg, a, b, k, std::abs(k - g), abs_k * std::abs(half)};
    }

private:
    const DiscretizedContour& c_;
    const IntegrandSpec& f_;
};

double env_double(const char* name, double fallback) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return fallback;
    char* end = nullptr;
    const double d = std::strtod(v, &end);
    return (end != v && d > 0.0) ? d : fallback;
}

}  // namespace

long default_node_budget() {
    return static_cast<long>(env_double("ML2V_NODE_BUDGET", 2e5));
}

double quadrature_tolerance_scale() { return env_double("ML2V_QUAD_TOL_SCALE", 1.0); }

DiscretizedContour build_contour(const ContourSpec& spec, double decay, double trunc_tol) {
    check_contour(spec);
    if (!(decay > 0.0)) throw GeometryError("decay exponent must be positive");
    if (!(trunc_tol > 0.0)) throw GeometryError("truncation tolerance must be positive");
    const double cos_decay = std::cos(spec.theta * decay);
    if (cos_decay >= 0.0) {
        std::ostringstream os;
        os << "no decay along the rays: cos(theta*decay) = " << cos_decay << " >= 0";
        throw GeometryError(os.str());
    }
    const double tol = std::min(0.5, trunc_tol * quadrature_tolerance_scale());
    double radius = std::pow(std::log(tol) / cos_decay, 1.0 / decay);
    radius = std::max(radius, 2.0 * spec.epsilon);

    DiscretizedContour c;
    c.spec = spec;
    c.truncation_radius = radius;
    c.decay_exponent = decay;
    c.segments = {
        Segment{SegmentKind::InRay, spec.epsilon, radius, -spec.theta},
        Segment{SegmentKind::Arc, -spec.theta, spec.theta, 0.0},
        Segment{SegmentKind::OutRay, spec.epsilon, radius, spec.theta},
    };
    return c;
}

QuadratureResult integrate(const DiscretizedContour& contour_in, const IntegrandSpec& f,
                           double tol, long node_budget) {
    if (!(tol > 0.0)) throw QuadratureError("tolerance must be positive");
    const double tol_eff = tol * quadrature_tolerance_scale();
    for (const cplx& pole : f.poles) {
        const double d = distance_to_contour(pole, contour_in.spec);
        if (d < f.pole_floor) {
            std::ostringstream os;
            os << "pole " << pole << " at distance " << d << " from the contour (floor "
               << f.pole_floor << ")";
            throw PoleProximityError(os.str());
        }
    }

    DiscretizedContour contour = contour_in;
    PanelEvaluator ev(contour, f);
    const double eps = contour.spec.epsilon;

    // Push the truncation radius out while the integrand is still visible at
    // the far end of either ray.
    auto tail_size = [&](double r) {
        double m = 0.0;
        for (int seg : {0, 2}) m = std::max(m, std::abs(ev.weighted(contour.segments[seg], r)));
        return m * r;
    };
    double radius = contour.truncation_radius;
    for (int i = 0; i < 64 && tail_size(radius) > 1e-3 * tol_eff && radius < 1e15 * eps; ++i) {
        radius *= 2.0;
    }
    contour.truncation_radius = radius;
    contour.segments[0].upper = radius;
    contour.segments[2].upper = radius;
    const double tail_est = tail_size(radius);

    std::vector<Panel> panels;
    long nodes = 0;
    auto add = [&](int seg, double a, double b) {
        panels.push_back(ev.eval(seg, a, b));
        nodes += 15;
    };

    const double theta = contour.spec.theta;
    const int n_arc =
        std::max(2, static_cast<int>(std::ceil(2.0 * theta * (1.0 + contour.decay_exponent))));
    for (int i = 0; i < n_arc; ++i) {
        const double a = -theta + 2.0 * theta * i / n_arc;
        const double b = -theta + 2.0 * theta * (i + 1) / n_arc;
        add(1, a, b);
    }
    for (int seg : {0, 2}) {
        double a = eps;
        while (a < radius) {
            const double b = std::min(2.0 * a, radius);
            add(seg, a, b);
            a = b;
        }
    }

    auto cmp = [&](int i, int j) { return panels[i].err < panels[j].err; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
    for (int i = 0; i < static_cast<int>(panels.size()); ++i) heap.push(i);

    auto totals = [&](long double& err, long double& absval, cplx& value) {
        err = 0.0L;
        absval = 0.0L;
        std::complex<long double> v = 0.0L;
        for (const Panel& p : panels) {
            err += p.err;
            absval += p.abs_integral;
            v += std::complex<long double>(p.kronrod.real(), p.kronrod.imag());
        }
        value = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    };

    long double err_sum = 0.0L;
    long double abs_sum = 0.0L;
    cplx value;
    totals(err_sum, abs_sum, value);

    for (long iter = 0;; ++iter) {
        const double floor = 64.0 * kEps * static_cast<double>(abs_sum);
        const double target = std::max(tol_eff, floor);
        if (static_cast<double>(err_sum) <= target) break;
        if (nodes + 30 > node_budget) {
            std::ostringstream os;
            os << "quadrature budget of " << node_budget << " nodes exhausted with error estimate "
               << static_cast<double>(err_sum) << " > " << target;
            throw QuadratureError(os.str());
        }
        const int worst = heap.top();
        heap.pop();
        const Panel old = panels[worst];
        const double mid = 0.5 * (old.a + old.b);
        panels[worst] = ev.eval(old.segment, old.a, mid);
        panels.push_back(ev.eval(old.segment, mid, old.b));
        nodes += 30;
        heap.push(worst);
        heap.push(static_cast<int>(panels.size()) - 1);

        err_sum += panels[worst].err + panels.back().err - old.err;
        abs_sum += panels[worst].abs_integral + panels.back().abs_integral - old.abs_integral;
        if (iter % 256 == 255) totals(err_sum, abs_sum, value);
    }
    totals(err_sum, abs_sum, value);
    const double floor = 64.0 * kEps * static_cast<double>(abs_sum);
    const double est = std::max(static_cast<double>(err_sum), floor) + tail_est;
    return QuadratureResult{value, est, nodes};
}

cplx integrate_fixed(const DiscretizedContour& contour, const IntegrandSpec& f,
                     int panels_per_segment) {
    PanelEvaluator ev(contour, f);
    std::complex<long double> sum = 0.0L;
    for (int seg = 0; seg < 3; ++seg) {
        const Segment& s = contour.segments[seg];
        const double width = (s.upper - s.lower) / panels_per_segment;
        for (int i = 0; i < panels_per_segment; ++i) {
            const double a = s.lower + width * i;
            const double center = a + 0.5 * width;
            const double half = 0.5 * width;
            cplx acc = ev.weighted(s, center) * kWg[3];
            for (int j = 1; j < 7; j += 2) {
                const double dx = half * kXgk[j];
                acc += kWg[j / 2] * (ev.weighted(s, center - dx) + ev.weighted(s, center + dx));
            }
            acc *= half;
            sum += std::complex<long double>(acc.real(), acc.imag());
        }
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace ml2v
