#include <doctest.h>

#include <random>

#include "ml2v/oracle.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/series.hpp"

using namespace ml2v;

namespace {

const Parameters kOne = validate_params(1.0, 1.0, 1.0);
const ContourSpec kWide{1.0, 0.75 * kPi};

cplx closed_form(cplx x, cplx y) { return (x * std::exp(x) - y * std::exp(y)) / (x - y); }

cplx series(cplx x, cplx y, const Parameters& p) {
    return eval_double_series(x, y, p, SeriesBudget{1e-15, 4000}).value;
}

cplx oracle(cplx x, cplx y, const Parameters& p) { return oracle_eval(x, y, p, 30).approx; }

}  // namespace

TEST_CASE("residue terms") {
    const ResidueTerm ry = residue_y(-1.0, 2.0, kOne);
    CHECK(ry.source == PoleSource::YPole);
    CHECK(std::abs(ry.value - 2.0 * std::exp(2.0) / 3.0) < 1e-14);
    const ResidueTerm rx = residue_x(2.0, -1.0, kOne);
    CHECK(rx.source == PoleSource::XPole);
    CHECK(std::abs(rx.value - ry.value) < 1e-14);
    CHECK_THROWS_AS(residue_x(2.0, 2.0, kOne), DegenerateDenominator);
    CHECK(is_degenerate(3.0, 3.0, kOne));
    CHECK_FALSE(is_degenerate(3.0, 3.1, kOne));
    CHECK(degeneracy_floor(4.0, 9.0, validate_params(0.5, 0.5, 1.0)) == doctest::Approx(6e-6));
}

TEST_CASE("pole preimages") {
    auto poles = integrand_poles(2.0, 3.0, kOne);
    REQUIRE(poles.size() == 2);
    CHECK(std::abs(poles[0] - 2.0) < 1e-15);
    CHECK(std::abs(poles[1] - 3.0) < 1e-15);
    const Parameters p = validate_params(0.5, 0.8, 1.0);
    for (const cplx z : integrand_poles(cplx(-2, 1), cplx(1, 3), p)) {
        const bool on_x = std::abs(std::pow(z, 1.0 / 0.8) - cplx(-2, 1)) < 1e-12;
        const bool on_y = std::abs(std::pow(z, 1.0 / 0.5) - cplx(1, 3)) < 1e-12;
        CHECK((on_x || on_y));
        CHECK(std::abs(std::arg(z)) <= kPi);
    }
}

TEST_CASE("lemma1") {
    const Evaluation e = eval_lemma1(-2.0, -3.0, kOne, kWide, 1e-12);
    CHECK(e.method == Method::Lemma1);
    CHECK(std::abs(e.value - series(-2.0, -3.0, kOne)) < 1e-8);
    CHECK(std::abs(e.value - closed_form(-2.0, -3.0)) < 1e-11);
    CHECK(e.est_error <= 1e-12);

    const Evaluation inside = eval_lemma1(0.3, cplx(0.1, 0.2), kOne, kWide, 1e-12);
    CHECK(std::abs(inside.value - series(0.3, cplx(0.1, 0.2), kOne)) < 1e-8);

    const Parameters p = validate_params(0.5, 0.8, cplx(1.0, 0.5));
    const auto spec = choose_contour(-1.0, -1.0, p);
    REQUIRE(spec.has_value());
    const Evaluation c = eval_lemma1(-1.0, -1.0, p, *spec, 1e-12);
    CHECK(std::abs(c.value - oracle(-1.0, -1.0, p)) < 1e-7);

    CHECK_THROWS_AS(eval_lemma1(2.0, -3.0, kOne, kWide, 1e-12), RegionError);
    CHECK_THROWS_AS(eval_lemma1(-2.0, -3.0, kOne, ContourSpec{1.0, 0.3 * kPi}, 1e-12), DomainError);
}

TEST_CASE("lemma2") {
    const Evaluation e = eval_lemma2(-1.0, 2.0, kOne, kWide, 1e-12);
    CHECK(e.method == Method::Lemma2);
    CHECK(std::abs(e.value - series(-1.0, 2.0, kOne)) < 1e-8);

    const double tol = 1e-12;
    const cplx res = residue_y(-1.0, 2.0, kOne).value;
    const cplx integral =
        integral_term(-1.0, 2.0, kOne, kWide, 0.5 * tol * std::abs(res)).value;
    CHECK(std::abs(e.value - (res + integral)) < 2 * tol * std::abs(res));

    const Parameters p = validate_params(0.7, 0.7, 2.0);
    const auto spec = choose_contour(-0.5, 3.0, p);
    REQUIRE(spec.has_value());
    CHECK(std::abs(eval_lemma2(-0.5, 3.0, p, *spec, 1e-12).value - oracle(-0.5, 3.0, p)) < 1e-7);
}

TEST_CASE("remark1") {
    const Evaluation a = eval_remark1(2.0, -1.0, kOne, kWide, 1e-12);
    const Evaluation b = eval_lemma2(-1.0, 2.0, kOne, kWide, 1e-12);
    CHECK(a.method == Method::Remark1);
    CHECK(std::abs(a.value - b.value) < 1e-11);

    const Parameters p = validate_params(1.2, 0.9, 1.0);
    const auto spec = choose_contour(3.0, -2.0, p);
    REQUIRE(spec.has_value());
    CHECK(std::abs(eval_remark1(3.0, -2.0, p, *spec, 1e-12).value - series(3.0, -2.0, p)) < 1e-8);

    const Parameters q = validate_params(0.8, 0.6, 1.0);
    const cplx x = 3.0;
    const cplx y = std::pow(x, 0.6 / 0.8);
    CHECK_THROWS_AS(eval_remark1(x, y, q, ContourSpec{1.0, 0.4 * kPi}, 1e-12), DegenerateDenominator);
}

TEST_CASE("lemma3") {
    const Evaluation e = eval_lemma3(2.0, 3.0, kOne, kWide, 1e-12);
    CHECK(e.method == Method::Lemma3);
    CHECK(std::abs(e.value - closed_form(2.0, 3.0)) < 1e-9);
    CHECK(e.value.real() == doctest::Approx(45.4785).epsilon(1e-5));
    CHECK_THROWS_AS(eval_lemma3(2.0, 2.0, kOne, kWide, 1e-12), DegenerateDenominator);

    const Parameters p = validate_params(0.6, 0.9, 1.5);
    const auto spec = choose_contour(1.5, 2.0, p);
    REQUIRE(spec.has_value());
    CHECK(std::abs(eval_lemma3(1.5, 2.0, p, *spec, 1e-12).value - oracle(1.5, 2.0, p)) < 1e-7);
}

TEST_CASE("crossing y over the contour adds the y residue") {
    const cplx x = -1.0, y = 2.0;
    const double tol = 1e-12;
    const cplx inside = integral_term(x, y, kOne, ContourSpec{3.0, 0.75 * kPi}, tol).value;
    const cplx outside = integral_term(x, y, kOne, kWide, tol).value;
    CHECK(std::abs((inside - outside) - residue_y(x, y, kOne).value) < 1e-9);
    const Evaluation l1 = eval_lemma1(x, y, kOne, ContourSpec{3.0, 0.75 * kPi}, tol);
    const Evaluation l2 = eval_lemma2(x, y, kOne, kWide, tol);
    CHECK(std::abs(l1.value - l2.value) < 1e-9);
}

TEST_CASE("contour parameter independence and swap symmetry") {
    const Parameters p = validate_params(0.5, 0.8, cplx(1.0, 0.3));
    const Parameters swapped = validate_params(0.8, 0.5, cplx(1.0, 0.3));
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int checked = 0;
    for (int i = 0; i < 12; ++i) {
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        const auto spec = choose_contour(x, y, p);
        if (!spec || is_degenerate(x, y, p)) continue;
        const Evaluation a = eval_representation(x, y, p, *spec, 1e-11);
        const Evaluation s = eval_representation(y, x, swapped, *spec, 1e-11);
        CHECK(std::abs(a.value - s.value) <= a.est_error + s.est_error + 1e-12 * std::max(1.0, std::abs(a.value)));
        CHECK(std::abs(a.value - series(x, y, p)) < 1e-8 * std::max(1.0, std::abs(a.value)));
        for (double theta : {0.25 * kPi, 0.3 * kPi, 0.39 * kPi}) {
            const ContourSpec alt{spec->epsilon, theta};
            try {
                const Evaluation b = eval_representation(x, y, p, alt, 1e-11);
                CHECK(std::abs(a.value - b.value) <= 2e-11 * std::max(1.0, std::abs(a.value)) +
                                                        a.est_error + b.est_error);
                ++checked;
            } catch (const RegionError&) {
            } catch (const PoleProximityError&) {
            }
        }
    }
    CHECK(checked > 5);
}

TEST_CASE("boundary regime") {
    const Parameters p = validate_params(2.0, 0.5, 1.0);
    const auto spec = choose_contour(-2.0, 1.5, p);
    REQUIRE(spec.has_value());
    CHECK(std::abs(eval_representation(-2.0, 1.5, p, *spec, 1e-12).value - oracle(-2.0, 1.5, p)) < 1e-7);
}

TEST_CASE("dispatcher") {
    const Parameters p = validate_params(0.8, 0.8, 1.0);
    CHECK(eval_auto(cplx(0.5, 0.5), -0.9, p, 1e-12).method == Method::Series);
    const Evaluation a = eval_auto(-5.0, -5.0, p, 1e-12);
    CHECK(a.method == Method::Lemma1);
    CHECK(std::abs(a.value - oracle(-5.0, -5.0, p)) < 1e-9 * std::max(1.0, std::abs(a.value)));
    const Evaluation b = eval_auto(6.0, 7.0, p, 1e-12);
    CHECK(b.method == Method::Lemma3);
    CHECK(std::abs(b.value - oracle(6.0, 7.0, p)) < 1e-9 * std::abs(b.value));
    const Evaluation d = eval_auto(3.0, 3.0, validate_params(0.7, 0.7, 1.0), 1e-10);
    CHECK(d.method == Method::Series);
    CHECK(within_tolerance(d.est_error, d.value, 1e-10));
}
