#include "ml2v/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "ml2v/asymptotics.hpp"
#include "ml2v/contour.hpp"
#include "ml2v/gamma.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/series.hpp"

namespace ml2v {
namespace {

class Checker {
public:
    explicit Checker(std::string name) { result_.name = std::move(name); result_.passed = true; }

    void expect(bool ok, const std::string& what) {
        ++result_.checks;
        if (!ok && result_.passed) {
            result_.passed = false;
            result_.detail = what;
        }
    }
    void close(double got, double limit, const std::string& what) {
        std::ostringstream os;
        os << what << ": " << got << " > " << limit;
        expect(got <= limit, os.str());
    }
    SuiteResult finish() {
        if (result_.passed && result_.detail.empty()) result_.detail = "ok";
        return result_;
    }

private:
    SuiteResult result_;
};

template <class F>
void guarded(Checker& c, const std::string& what, F&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        c.expect(false, what + ": " + e.what());
    }
}

SuiteResult gamma_suite() {
    Checker c("gamma");
    const double tol = 1e-15;
    for (const cplx s : {cplx(0.3, 0.2), cplx(1.7, -1.1), cplx(-2.4, 0.5), cplx(4.2, 3.0),
                         cplx(-0.6, -1.5), cplx(0.5, 0.0)}) {
        const cplx refl = recip_gamma(s) * recip_gamma(1.0 - s) * kPi / std::sin(kPi * s);
        c.close(std::abs(refl - 1.0), 10 * tol, "reflection");
        const cplx rec = recip_gamma(s + 1.0) * s - recip_gamma(s);
        c.close(std::abs(rec), 10 * tol * std::max(1.0, std::abs(recip_gamma(s))), "recurrence");
    }
    guarded(c, "hankel", [&] {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 4; ++j) {
                const cplx s(-3.0 + 7.0 * i / 4.0, -2.0 + 4.0 * j / 3.0);
                const cplx h = recip_gamma_hankel(s, ContourSpec{1.0, 0.75 * kPi}, 1e-10);
                c.close(std::abs(h - recip_gamma(s)), 1e-8, "hankel identity");
            }
        }
    });
    return c.finish();
}

SuiteResult contour_suite() {
    Checker c("contour");
    guarded(c, "deformation", [&] {
        const Parameters p = validate_params(0.5, 0.8, 1.0);
        const double theta = 0.35 * kPi;
        const double tol = 1e-10;
        for (const auto& [x, y] : {std::pair<cplx, cplx>{-1.0, -1.0}, {-2.0, -0.5}, {cplx(0, 3), -3.0}}) {
            const cplx a = integral_term(x, y, p, ContourSpec{0.5, theta}, tol).value;
            const cplx b = integral_term(x, y, p, ContourSpec{0.25, 0.3 * kPi}, tol).value;
            c.close(std::abs(a - b), 2 * tol, "contour deformation");
        }
    });
    guarded(c, "conjugate symmetry", [&] {
        IntegrandSpec f;
        f.f = [](const ContourPoint& u) {
            return std::exp(u.z - 2.5 * cplx(std::log(u.r), u.phi));
        };
        const DiscretizedContour path = build_contour(ContourSpec{1.0, 0.75 * kPi}, 1.0, 1e-14);
        const cplx v = integrate(path, f, 1e-10).value / cplx(0.0, 2.0 * kPi);
        c.close(std::abs(v.imag()), 1e-9, "imaginary part");
        c.close(std::abs(v - recip_gamma(2.5)), 1e-9, "value");
    });
    return c.finish();
}

SuiteResult series_suite() {
    Checker c("series");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ab(0.5, 1.4);
    const double tol = 1e-12;
    const SeriesBudget budget{tol, 2000};
    guarded(c, "identities", [&] {
        for (int k = 0; k < 20; ++k) {
            const double alpha = ab(rng);
            const double beta = std::min(ab(rng), 1.9 / alpha);
            const cplx mu(1.0 + u(rng), 0.5 * u(rng));
            const cplx x = std::polar(1.0 + u(rng), kPi * u(rng));
            const cplx y = std::polar(1.0 + u(rng), kPi * u(rng));
            const Parameters p = validate_params(alpha, beta, mu);
            auto e = [&](cplx m) {
                return eval_double_series(x, y, validate_params(alpha, beta, m), budget).value;
            };
            const cplx lhs = e(mu);
            const cplx rhs = recip_gamma(mu) + x * e(mu + alpha) + y * e(mu + beta) -
                             x * y * e(mu + alpha + beta);
            const double scale = std::max(1.0, std::abs(lhs));
            c.close(std::abs(lhs - rhs), 4 * tol * scale, "recurrence");
            const cplx sw =
                eval_double_series(y, x, validate_params(beta, alpha, mu), budget).value;
            c.close(std::abs(lhs - sw), 2 * tol * scale, "swap symmetry");
            const cplx red = eval_double_series(x, 0.0, p, budget).value;
            const cplx one = eval_ml_one(x, alpha, mu, budget).value;
            c.close(std::abs(red - one), 2 * tol * std::max(1.0, std::abs(one)), "reduction");
        }
    });
    return c.finish();
}

SuiteResult expansion_suite() {
    Checker c("expansion");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> ord(1, 4);
    for (int k = 0; k < 50; ++k) {
        const double alpha = 0.4 + 0.5 * (u(rng) + 1.0);
        const double beta = 0.4 + 0.5 * (u(rng) + 1.0);
        const Parameters p = validate_params(alpha, beta, 1.0);
        const cplx zeta = std::polar(0.5 + 2.0 * (u(rng) + 1.0), 2.5 * u(rng));
        const cplx x = std::polar(2.0 + 3.0 * (u(rng) + 1.0), 3.0 * u(rng));
        const cplx y = std::polar(2.0 + 3.0 * (u(rng) + 1.0), 3.0 * u(rng));
        const TruncationOrders o{ord(rng), ord(rng)};
        const cplx lhs =
            1.0 / ((std::pow(zeta, 1.0 / beta) - x) * (std::pow(zeta, 1.0 / alpha) - y));
        const cplx rhs = expansion_rhs(zeta, x, y, p, o);
        c.close(std::abs(rhs - lhs) / std::abs(lhs), 1e-12, "expansion identity");
    }
    guarded(c, "hankel term", [&] {
        const Parameters p = validate_params(0.5, 0.8, 1.0);
        const ContourSpec spec{1.0, 0.38 * kPi};
        for (const cplx s : {cplx(1.0, 0.0), cplx(-0.3, 0.0), cplx(-1.3, 0.4), cplx(2.5, 1.0)}) {
            c.close(std::abs(hankel_term(s, p, spec, 1e-10) - recip_gamma(s)), 1e-8,
                    "hankel term");
        }
    });
    return c.finish();
}

SuiteResult representations_suite() {
    Checker c("representations");
    struct Case {
        double alpha, beta;
        cplx mu, x, y;
    };
    const Case cases[] = {
        {1.0, 1.0, 1.0, -2.0, -3.0}, {1.0, 1.0, 1.0, -1.0, 2.0},  {1.2, 0.9, 1.0, 3.0, -2.0},
        {1.0, 1.0, 1.0, 2.0, 3.0},   {0.5, 0.8, cplx(1, 0.5), -1.0, -1.0},
        {0.7, 0.7, 2.0, -0.5, 3.0},  {0.6, 0.9, 1.5, 1.5, 2.0},
    };
    for (const Case& k : cases) {
        guarded(c, "cross-method", [&] {
            const Parameters p = validate_params(k.alpha, k.beta, k.mu);
            const auto spec = choose_contour(k.x, k.y, p);
            c.expect(spec.has_value(), "no contour chosen");
            if (!spec) return;
            const Evaluation e = eval_representation(k.x, k.y, p, *spec, 1e-11);
            const Evaluation s = eval_double_series(k.x, k.y, p, SeriesBudget{1e-14, 2000});
            c.close(std::abs(e.value - s.value), 1e-8 * std::max(1.0, std::abs(s.value)),
                    "representation vs series");
        });
    }
    return c.finish();
}

SuiteResult asymptotics_suite() {
    Checker c("asymptotics");
    guarded(c, "decay", [&] {
        const Parameters p = validate_params(0.5, 0.5, 1.0);
        const ContourSpec spec{1.0, 0.2 * kPi};
        for (const int order : {1, 3}) {
            const TruncationOrders o{order, order};
            std::vector<double> scaled;
            for (const double t : {10.0, 20.0, 40.0}) {
                const cplx x(-t, 0.0);
                const double ref = eval_lemma1(x, x, p, spec, 1e-15).value.real();
                const Evaluation a = eval_asymptotic(x, x, p, o, default_tau1(x, x, p));
                scaled.push_back(std::abs(a.value.real() - ref) * std::pow(t, 2 + order));
            }
            for (size_t i = 1; i < scaled.size(); ++i) {
                c.close(scaled[i], 2.0 * scaled[i - 1], "scaled error growth");
            }
        }
    });
    guarded(c, "closed form", [&] {
        const Parameters p = validate_params(1.0, 1.0, 1.0);
        const double t = 20.0;
        const Evaluation a = eval_asymptotic(t, t / 2, p, TruncationOrders{}, default_tau1(t, t / 2, p));
        const double exact = (t * std::exp(t) - t / 2 * std::exp(t / 2)) / (t / 2);
        c.close(std::abs(a.value.real() - exact) / exact, 1e-6, "case1 closed form");
    });
    return c.finish();
}

const std::vector<std::pair<std::string, std::function<SuiteResult()>>>& registry() {
    static const std::vector<std::pair<std::string, std::function<SuiteResult()>>> r = {
        {"gamma", gamma_suite},
        {"contour", contour_suite},
        {"series", series_suite},
        {"expansion", expansion_suite},
        {"representations", representations_suite},
        {"asymptotics", asymptotics_suite},
    };
    return r;
}

}  // namespace

std::vector<std::string> selftest_suites() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

std::vector<SuiteResult> run_selftest(const std::string& filter) {
    std::vector<SuiteResult> out;
    for (const auto& [name, fn] : registry()) {
        if (filter.empty() || filter == name) out.push_back(fn());
    }
    return out;
}

}  // namespace ml2v
