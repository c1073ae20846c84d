#include "ml2v/series.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ml2v/gamma.hpp"
#include "ml2v/oracle.hpp"

namespace ml2v {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld kUnitLd = std::numeric_limits<ld>::epsilon() / 2;
constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

// Neumaier-compensated complex accumulator.
struct Accumulator {
    ld re = 0.0L, im = 0.0L, cre = 0.0L, cim = 0.0L;

    static void add1(ld& s, ld& c, ld v) {
        const ld t = s + v;
        if (std::fabs(s) >= std::fabs(v)) {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    void add(cld v) {
        add1(re, cre, v.real());
        add1(im, cim, v.imag());
    }
    cld value() const { return {re + cre, im + cim}; }
};

cplx to_double(cld v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

// Block-wise certification shared by both sums.
class TailCertificate {
public:
    TailCertificate(double tol, double min_step, double mu_re)
        : tol_(tol), min_step_(min_step), mu_re_(mu_re) {}

    bool done(int k, ld block_max, ld block_abs, cld total) {
        const bool halved = k > 0 && (block_max <= 0.5L * prev_max_);
        halvings_ = halved ? halvings_ + 1 : 0;
        prev_max_ = block_max;
        tail_ = 2.0L * block_abs;
        if (halvings_ < 2) return false;
        // Blocks can vanish by accident while Gamma still has poles ahead.
        if (k * min_step_ + mu_re_ < 1.0) return false;
        const ld scale = std::max(1.0L, std::abs(total));
        return tail_ <= 1e-4L * tol_ * scale || tail_ <= 1e-21L * scale;
    }

    ld tail() const { return tail_; }

private:
    double tol_;
    double min_step_;
    double mu_re_;
    ld prev_max_ = 0.0L;
    ld tail_ = 0.0L;
    int halvings_ = 0;
};

double finish_error(ld tail, ld abs_sum, cld total) {
    const ld roundoff = 16.0L * kUnitLd * abs_sum;
    return static_cast<double>(tail + roundoff) + 2.0 * kUnit * static_cast<double>(std::abs(total));
}

void check_budget(const SeriesBudget& b) {
    if (!(b.tol > 0.0)) throw DomainError("series tolerance must be positive");
    if (b.max_terms < 4) throw DomainError("series max_terms must be at least 4");
}

}  // namespace

Evaluation eval_double_series(cplx x, cplx y, const Parameters& params, const SeriesBudget& budget) {
    check_budget(budget);
    const cld xl(x.real(), x.imag());
    const cld yl(y.real(), y.imag());
    const cld mu(params.mu.real(), params.mu.imag());
    const ld a = params.alpha;
    const ld b = params.beta;

    Evaluation ev;
    ev.method = Method::Series;
    if (x == 0.0 && y == 0.0) {
        const cld r = recip_gamma_ext(mu);
        ev.value = to_double(r);
        ev.est_error = 2.0 * kUnit * std::abs(ev.value);
        return ev;
    }

    std::vector<cld> xp{1.0L};
    std::vector<cld> yp{1.0L};
    Accumulator acc;
    ld abs_sum = 0.0L;
    TailCertificate cert(budget.tol, std::min(params.alpha, params.beta), params.mu.real());

    for (int k = 0;; ++k) {
        if (k >= budget.max_terms) {
            ev.value = to_double(acc.value());
            ev.est_error = std::numeric_limits<double>::infinity();
            std::ostringstream os;
            os << "double series not certified within " << budget.max_terms << " blocks";
            throw BudgetExceeded(os.str(), ev);
        }
        if (k > 0) {
            xp.push_back(xp.back() * xl);
            yp.push_back(yp.back() * yl);
        }
        ld block_max = 0.0L;
        ld block_abs = 0.0L;
        for (int n = 0; n <= k; ++n) {
            const int m = k - n;
            const cld p = xp[n] * yp[m];
            if (p == 0.0L) continue;
            const cld t = p * recip_gamma_ext(mu + static_cast<ld>(n) * a + static_cast<ld>(m) * b);
            const ld at = std::abs(t);
            acc.add(t);
            block_abs += at;
            block_max = std::max(block_max, at);
        }
        abs_sum += block_abs;
        if (cert.done(k, block_max, block_abs, acc.value())) break;
    }
    const cld total = acc.value();
    ev.value = to_double(total);
    ev.est_error = finish_error(cert.tail(), abs_sum, total);
    if (!within_tolerance(ev.est_error, ev.value, budget.tol)) {
        // Cancellation ate the extended precision; resum in MPFR.
        try {
            const OracleValue o = oracle_eval(x, y, params, 20);
            ev.value = o.approx;
            ev.est_error = o.tail_bound + 2.0 * kUnit * std::abs(o.approx);
        } catch (const BudgetExceeded&) {
        }
    }
    return ev;
}

Evaluation eval_ml_one(cplx z, double rho, cplx kappa, const SeriesBudget& budget) {
    check_budget(budget);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("eval_ml_one: rho must be positive");
    const cld zl(z.real(), z.imag());
    const cld kl(kappa.real(), kappa.imag());

    Evaluation ev;
    ev.method = Method::Series;
    Accumulator acc;
    ld abs_sum = 0.0L;
    TailCertificate cert(budget.tol, rho, kappa.real());
    cld zp = 1.0L;
    // A single series has one term per block, so allow proportionally more.
    const int limit = budget.max_terms * 8;
    for (int n = 0;; ++n) {
        if (n >= limit) {
            ev.value = to_double(acc.value());
            ev.est_error = std::numeric_limits<double>::infinity();
            throw BudgetExceeded("one-variable series not certified", ev);
        }
        if (n > 0) zp *= zl;
        const cld t = zp == 0.0L ? cld(0.0L) : zp * recip_gamma_ext(kl + static_cast<ld>(n) * rho);
        const ld at = std::abs(t);
        acc.add(t);
        abs_sum += at;
        if (z == 0.0) break;
        if (cert.done(n, at, at, acc.value())) break;
    }
    const cld total = acc.value();
    ev.value = to_double(total);
    ev.est_error = finish_error(cert.tail(), abs_sum, total);
    if (!within_tolerance(ev.est_error, ev.value, budget.tol)) {
        // E_rho(z; kappa) = E_{rho,beta}(z, 0; kappa) for any admissible beta.
        try {
            const OracleValue o = oracle_eval(z, 0.0, validate_params(rho, 0.5, kappa), 20);
            ev.value = o.approx;
            ev.est_error = o.tail_bound + 2.0 * kUnit * std::abs(o.approx);
        } catch (const Error&) {
        }
    }
    return ev;
}

}  // namespace ml2v
