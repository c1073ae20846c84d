// Acceptance criteria; one PASS/FAIL line each. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "ml2v/asymptotics.hpp"
#include "ml2v/cli.hpp"
#include "ml2v/gamma.hpp"
#include "ml2v/oracle.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/series.hpp"

using namespace ml2v;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct ParamSet {
    double alpha, beta;
    cplx mu;
};

const ParamSet kGridParams[] = {{0.5, 0.8, 1.0}, {1.2, 0.9, 1.0}, {0.7, 0.7, cplx(0.5, 0.3)}};

std::vector<std::pair<cplx, cplx>> cross_grid() {
    std::vector<std::pair<cplx, cplx>> pts;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) pts.push_back({-4.0 + 2 * i, -4.0 + 2 * j});
    pts.push_back({cplx(4, 4), cplx(-4, 4)});
    pts.push_back({cplx(-4, -4), cplx(4, -4)});
    pts.push_back({cplx(4, 4), cplx(4, 4)});
    pts.push_back({cplx(-4, 4), cplx(-4, -4)});
    return pts;
}

// Admissible contours putting x and y in the requested regions, best pole
// clearance first.
std::vector<ContourSpec> contours_for(cplx x, cplx y, const Parameters& p, RegionLabel want_x,
                                      RegionLabel want_y) {
    const ThetaWindow w = theta_window(p);
    const double hi = w.upper_unwrapped > w.lower ? w.upper_unwrapped : w.upper;
    std::vector<std::pair<double, ContourSpec>> scored;
    for (double frac : {0.99, 0.8, 0.6, 0.4}) {
        const double theta = w.lower + frac * (hi - w.lower);
        for (double eps : {0.05, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}) {
            const ContourSpec spec{eps, theta};
            try {
                const ArgumentRegions r = classify_arguments(x, y, p, spec);
                if (r.x != want_x || r.y != want_y) continue;
            } catch (const RegionError&) {
                continue;
            }
            double clearance = 1e300;
            for (const cplx& pole : integrand_poles(x, y, p))
                clearance = std::min(clearance, distance_to_contour(pole, spec) / std::max(eps, std::abs(pole)));
            if (clearance < 0.05) continue;
            scored.push_back({clearance - 0.04 * std::pow(eps, 1.0 / (p.alpha * p.beta)), spec});
        }
    }
    std::sort(scored.begin(), scored.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<ContourSpec> out;
    for (auto& s : scored) out.push_back(s.second);
    return out;
}

Outcome criterion1() {
    const Parameters p = validate_params(1.0, 1.0, 1.0);
    const std::vector<std::pair<cplx, cplx>> pts = {
        {2.0, 1.0},   {1.0, 1.0},   {-2.0, -3.0}, {2.0, 3.0},   {-1.0, 2.0},  {3.0, -2.0},
        {0.0, 0.0},   {0.5, -0.5},  {-5.0, -5.0}, {5.0, 4.0},   {-4.0, 5.0},  {5.0, -5.0},
        {cplx(1, 2), cplx(-2, 1)},  {cplx(-3, -3), cplx(2, -1)}, {cplx(0, 4), cplx(0, -4)},
        {cplx(3, 1), cplx(3, -1)},  {-3.0, -3.0}, {4.0, 4.0},   {cplx(-2, 3), -4.0},
        {cplx(2.5, 2.5), cplx(-1, -3.5)}};
    double worst_series = 0.0, worst_rep = 0.0;
    int reps = 0;
    const double e = std::exp(1.0);
    const double anchor = std::abs(eval_double_series(2.0, 1.0, p, SeriesBudget{1e-13, 2000}).value -
                                   (2 * e * e - e)) / (2 * e * e - e);
    using Fn = Evaluation (*)(cplx, cplx, const Parameters&, const ContourSpec&, double,
                              const RepresentationOptions&);
    const struct {
        Fn fn;
        RegionLabel rx, ry;
    } methods[] = {{eval_lemma1, RegionLabel::OmegaMinus, RegionLabel::OmegaMinus},
                   {eval_lemma2, RegionLabel::OmegaMinus, RegionLabel::OmegaPlus},
                   {eval_remark1, RegionLabel::OmegaPlus, RegionLabel::OmegaMinus},
                   {eval_lemma3, RegionLabel::OmegaPlus, RegionLabel::OmegaPlus}};
    for (const auto& [x, y] : pts) {
        const cplx ref = std::abs(x - y) < 1e-14 ? (1.0 + x) * std::exp(x)
                                                 : (x * std::exp(x) - y * std::exp(y)) / (x - y);
        const cplx s = eval_double_series(x, y, p, SeriesBudget{1e-13, 2000}).value;
        worst_series = std::max(worst_series, std::abs(s - ref) / std::abs(ref));
        for (const auto& m : methods) {
            if (m.rx == RegionLabel::OmegaPlus && m.ry == RegionLabel::OmegaPlus && is_degenerate(x, y, p))
                continue;
            const auto specs = contours_for(x, y, p, m.rx, m.ry);
            if (specs.empty()) continue;
            const cplx v = m.fn(x, y, p, specs.front(), 1e-12, {}).value;
            worst_rep = std::max(worst_rep, std::abs(v - ref) / std::abs(ref));
            ++reps;
        }
    }
    const bool ok = worst_series <= 1e-10 && worst_rep <= 1e-7 && anchor <= 1e-10 && reps >= 20;
    return {ok, "series rel " + fmt("%.2e", worst_series) + ", representations rel " +
                    fmt("%.2e", worst_rep) + " over " + std::to_string(reps) + " evaluations"};
}

Outcome criterion2() {
    AutoOptions opts;
    opts.allow_series = false;
    opts.allow_asymptotic = false;
    opts.series_radius = -1.0;
    double worst = 0.0;
    int checked = 0, skipped = 0, failed = 0;
    for (const ParamSet& ps : kGridParams) {
        const Parameters p = validate_params(ps.alpha, ps.beta, ps.mu);
        for (const auto& [x, y] : cross_grid()) {
            if (is_degenerate(x, y, p)) {
                ++skipped;
                continue;
            }
            const Evaluation s = eval_double_series(x, y, p, SeriesBudget{1e-15, 4000});
            try {
                const Evaluation e = eval_auto(x, y, p, 1e-12, opts);
                worst = std::max(worst, std::abs(e.value - s.value));
                ++checked;
            } catch (const BudgetExceeded&) {
                ++failed;
            }
        }
    }
    return {failed == 0 && worst <= 1e-7,
            "max |delta| " + fmt("%.2e", worst) + " on " + std::to_string(checked) + " points, " +
                std::to_string(skipped) + " degenerate skipped, " + std::to_string(failed) + " failed"};
}

Outcome criterion3() {
    const ContourSpec c{1.0, 0.75 * kPi};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 4; ++j) {
            const cplx s(-3.0 + 7.0 * i / 4.0, -2.0 + 4.0 * j / 3.0);
            worst = std::max(worst, std::abs(recip_gamma_hankel(s, c, 1e-10) - recip_gamma(s)));
        }
    return {worst <= 1e-8, "max |delta| " + fmt("%.2e", worst) + " on 20 points"};
}

Outcome criterion4() {
    double worst = 0.0;
    int pairs = 0;
    for (const ParamSet& ps : kGridParams) {
        const Parameters p = validate_params(ps.alpha, ps.beta, ps.mu);
        for (const auto& [x, y] : cross_grid()) {
            if (is_degenerate(x, y, p)) continue;
            const auto a = choose_contour(x, y, p);
            if (!a) continue;
            const ArgumentRegions r = classify_arguments(x, y, p, *a);
            for (const ContourSpec& b : contours_for(x, y, p, r.x, r.y)) {
                if (std::abs(b.epsilon - a->epsilon) < 1e-12 && std::abs(b.theta - a->theta) < 1e-12) continue;
                try {
                    const cplx ia = integral_term(x, y, p, *a, 1e-12).value;
                    const cplx ib = integral_term(x, y, p, b, 1e-12).value;
                    worst = std::max(worst, std::abs(ia - ib));
                    ++pairs;
                    break;
                } catch (const QuadratureError&) {
                }
            }
        }
    }
    double worst_cross = 0.0;
    for (const ParamSet& ps : kGridParams) {
        const Parameters p = validate_params(ps.alpha, ps.beta, ps.mu);
        for (const auto& [x, y] : {std::pair<cplx, cplx>{-1.0, 2.0}, {-2.0, 3.0}, {cplx(-1, 1), cplx(2.5, 0.5)}}) {
            const auto outside = contours_for(x, y, p, RegionLabel::OmegaMinus, RegionLabel::OmegaPlus);
            const auto inside = contours_for(x, y, p, RegionLabel::OmegaMinus, RegionLabel::OmegaMinus);
            if (outside.empty() || inside.empty()) return {false, "no contour pair for the crossing check"};
            const cplx i_out = integral_term(x, y, p, outside.front(), 1e-12).value;
            const cplx i_in = integral_term(x, y, p, inside.front(), 1e-12).value;
            worst_cross = std::max(worst_cross, std::abs((i_in - i_out) - residue_y(x, y, p).value));
        }
    }
    return {worst <= 2e-7 && worst_cross <= 1e-6 && pairs > 50,
            "deformation max " + fmt("%.2e", worst) + " over " + std::to_string(pairs) +
                " pairs, crossing residue max " + fmt("%.2e", worst_cross)};
}

Outcome criterion5() {
    const Parameters p = validate_params(0.5, 0.5, 1.0);
    const ContourSpec ref_spec{1.0, 0.2 * kPi};
    const double ts[] = {10.0, 20.0, 40.0, 80.0};
    std::vector<double> refs;
    for (double t : ts) refs.push_back(eval_lemma1(-t, -t, p, ref_spec, 1e-16).value.real());
    std::ostringstream os;
    bool ok = true;
    for (int order : {1, 2, 3}) {
        std::vector<double> scaled;
        for (size_t i = 0; i < 4; ++i) {
            const cplx x(-ts[i], 0.0);
            const Evaluation a = eval_asymptotic(x, x, p, TruncationOrders{order, order}, default_tau1(x, x, p));
            if (a.asymptotic_case != AsymptoticCase::Case4) ok = false;
            scaled.push_back(std::abs(a.value.real() - refs[i]) * std::pow(ts[i], 2 + order));
        }
        for (size_t i = 1; i < scaled.size(); ++i)
            if (scaled[i] > 2.0 * scaled[i - 1]) ok = false;
        os << "p=" << order << " [";
        for (size_t i = 0; i < scaled.size(); ++i) os << (i ? " " : "") << fmt("%.3g", scaled[i]);
        os << "] ";
    }
    return {ok, os.str()};
}

Outcome criterion6() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> ord(1, 4);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Parameters p = validate_params(0.9 + 0.5 * u(rng), 0.9 + 0.5 * u(rng), 1.0);
        const cplx zeta = std::polar(1.5 + u(rng), 2.5 * u(rng));
        const cplx x = std::polar(4.0 + 2.0 * u(rng), 3.0 * u(rng));
        const cplx y = std::polar(4.0 + 2.0 * u(rng), 3.0 * u(rng));
        const cplx lhs = 1.0 / ((std::pow(zeta, 1.0 / p.beta) - x) * (std::pow(zeta, 1.0 / p.alpha) - y));
        const cplx rhs = expansion_rhs(zeta, x, y, p, TruncationOrders{ord(rng), ord(rng)});
        worst = std::max(worst, std::abs(rhs - lhs) / std::abs(lhs));
    }
    return {worst <= 1e-12, "max relative residual " + fmt("%.2e", worst) + " over 100 samples"};
}

Outcome criterion7() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ab(0.5, 1.4);
    const double tol = 1e-12;
    const SeriesBudget budget{tol, 2000};
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double alpha = ab(rng);
        const double beta = std::min(ab(rng), 1.9 / alpha);
        const cplx mu(1.0 + u(rng), 0.5 * u(rng));
        const cplx x = std::polar(1.0 + u(rng), kPi * u(rng));
        const cplx y = std::polar(1.0 + u(rng), kPi * u(rng));
        auto e = [&](cplx m) { return eval_double_series(x, y, validate_params(alpha, beta, m), budget).value; };
        const cplx lhs = e(mu);
        const double unit = tol * std::max(1.0, std::abs(lhs));
        const cplx rhs = recip_gamma(mu) + x * e(mu + alpha) + y * e(mu + beta) - x * y * e(mu + alpha + beta);
        const cplx sw = eval_double_series(y, x, validate_params(beta, alpha, mu), budget).value;
        const cplx red = eval_double_series(x, 0.0, validate_params(alpha, beta, mu), budget).value;
        const cplx one = eval_ml_one(x, alpha, mu, budget).value;
        worst = std::max({worst, std::abs(lhs - rhs) / unit, std::abs(lhs - sw) / unit,
                          std::abs(red - one) / (tol * std::max(1.0, std::abs(one)))});
    }
    return {worst <= 4.0, "max residual " + fmt("%.2e", worst) + " x tol over 200 points"};
}

Outcome criterion8() {
    const auto records = read_corpus(ML2V_CORPUS);
    double worst_digits = 1e9;
    for (const CorpusRecord& r : records) {
        const Parameters p = validate_params(r.point.alpha, r.point.beta, r.point.mu);
        const OracleValue low = oracle_eval(r.point.x, r.point.y, p, 30);
        worst_digits = std::min(worst_digits, agreement_digits(low, r.value));
    }
    std::ostringstream out, err;
    const int code = cli::run({"ml2v", "compare", "--corpus", ML2V_CORPUS}, out, err);
    std::smatch m;
    const std::string text = out.str();
    double max_delta = 1e300;
    if (std::regex_search(text, m, std::regex(R"(max \|delta\| = ([^,]+), flags = (\d+))")))
        max_delta = std::stod(m[1]);
    const bool ok = !records.empty() && worst_digits >= 25.0 && code == 0 && max_delta <= 1e-7;
    return {ok, std::to_string(records.size()) + " records, min agreement " + fmt("%.1f", worst_digits) +
                    " digits, replay max |delta| " + fmt("%.2e", max_delta) + ", exit " + std::to_string(code)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"closed-form anchor", criterion1},
        {"cross-method agreement", criterion2},
        {"reciprocal gamma Hankel identity", criterion3},
        {"contour deformation", criterion4},
        {"asymptotic decay", criterion5},
        {"expansion identity", criterion6},
        {"recurrence and symmetry", criterion7},
        {"oracle self-consistency", criterion8},
    };
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu (%s): %s - %s [%.1fs]\n", i + 1, criteria[i].first.c_str(),
                    o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
