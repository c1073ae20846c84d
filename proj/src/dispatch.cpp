#include <cmath>
#include <sstream>

#include "ml2v/asymptotics.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/series.hpp"

namespace ml2v {

Evaluation eval_auto(cplx x, cplx y, const Parameters& params, double tol,
                     const AutoOptions& opts) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    std::optional<Evaluation> best;
    auto consider = [&](const Evaluation& e) {
        if (!best || !(best->est_error <= e.est_error)) best = e;
        return std::isfinite(e.value.real()) && std::isfinite(e.value.imag()) &&
               within_tolerance(e.est_error, e.value, tol);
    };
    auto try_series = [&]() -> std::optional<Evaluation> {
        try {
            const Evaluation e = eval_double_series(x, y, params, SeriesBudget{tol, 2000});
            if (consider(e)) return e;
        } catch (const BudgetExceeded& b) {
            consider(b.partial());
        }
        return std::nullopt;
    };

    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (opts.allow_series && ax <= opts.series_radius && ay <= opts.series_radius) {
        if (auto e = try_series()) return *e;
    }

    if (opts.allow_asymptotic && params.regime == Regime::Standard &&
        std::min(ax, ay) >= std::max(opts.asymptotic_threshold, kAsymptoticFloor)) {
        try {
            const double tau1 = default_tau1(x, y, params);
            double prev = std::numeric_limits<double>::infinity();
            int worse = 0;
            for (int p = 3; p <= 16 && worse < 2; ++p) {
                const Evaluation e = eval_asymptotic(x, y, params, TruncationOrders{p, p}, tau1);
                if (consider(e)) return e;
                worse = e.est_error >= prev ? worse + 1 : 0;
                prev = e.est_error;
            }
        } catch (const Error&) {
        }
    }

    if (const auto spec = choose_contour(x, y, params)) {
        try {
            const Evaluation e = eval_representation(x, y, params, *spec, tol);
            if (consider(e)) return e;
        } catch (const BudgetExceeded& b) {
            consider(b.partial());
        } catch (const Error&) {
        }
    }

    if (opts.allow_series) {
        if (auto e = try_series()) return *e;
    }

    std::ostringstream os;
    os << "no method met tol=" << tol << " at x=" << x << ", y=" << y;
    Evaluation partial;
    if (best) partial = *best;
    partial.est_error = std::numeric_limits<double>::infinity();
    if (!best) partial.value = {std::nan(""), std::nan("")};
    throw BudgetExceeded(os.str(), partial);
}

}  // namespace ml2v
