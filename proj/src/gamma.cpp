#include "ml2v/gamma.hpp"

#include <array>
#include <cmath>

#include "ml2v/contour.hpp"

namespace ml2v {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kHalfLog2Pi = 0.918938533204672741780329736405617640L;

// B_{2k} / (2k (2k-1)) for k = 1..10.
constexpr std::array<ld, 10> kStirling = {
    1.0L / 12.0L,
    -1.0L / 360.0L,
    1.0L / 1260.0L,
    -1.0L / 1680.0L,
    1.0L / 1188.0L,
    -691.0L / 360360.0L,
    1.0L / 156.0L,
    -3617.0L / 122400.0L,
    43867.0L / 244188.0L,
    -174611.0L / 125400.0L,
};
// |B_22| / (22 * 21), the first omitted coefficient.
constexpr ld kStirlingNext = (854513.0L / 138.0L) / 462.0L;

// Smallest Re(z) for which the 10-term remainder stays below tau for any
// arg z in [-pi/2, pi/2]; the sector factor sec^22(arg/2) is at most 2^11.
ld stirling_radius(ld tau) {
    return std::pow(4.0L * kStirlingNext * 2048.0L / tau, 1.0L / 21.0L);
}

cld stirling(cld z) {
    const cld inv = 1.0L / z;
    const cld inv2 = inv * inv;
    cld corr = 0.0L;
    cld p = inv;
    for (const ld c : kStirling) {
        corr += c * p;
        p *= inv2;
    }
    return (z - 0.5L) * std::log(z) - z + kHalfLog2Pi + corr;
}

// sin(pi a) with argument reduction, exact zero at integers.
ld sinpi(ld a) {
    ld r = std::fmod(a, 2.0L);
    if (r > 1.0L) r -= 2.0L;
    if (r < -1.0L) r += 2.0L;
    if (r > 0.5L) r = 1.0L - r;
    if (r < -0.5L) r = -1.0L - r;
    return std::sin(kPiL * r);
}

ld cospi(ld a) { return sinpi(a + 0.5L); }

cld sinpi(cld s) {
    const ld a = s.real();
    const ld b = s.imag();
    return {sinpi(a) * std::cosh(kPiL * b), cospi(a) * std::sinh(kPiL * b)};
}

// Gamma(w) for Re(w) > 0 via upward shift plus Stirling; returns the shift
// product separately so callers can divide without overflow concerns.
cld recip_gamma_right(cld s, ld tau) {
    const ld z0 = stirling_radius(tau);
    cld prod = 1.0L;
    cld z = s;
    while (z.real() < z0) {
        prod *= z;
        z += 1.0L;
    }
    return prod * std::exp(-stirling(z));
}

cld recip_gamma_impl(cld s, ld tau) {
    const ld n = std::round(s.real());
    if (n <= 0.0L && std::abs(s - cld(n, 0.0L)) < 1e-12L) return 0.0L;

    if (s.real() < -10.0L) {
        // 1/Gamma(s) = sin(pi s) Gamma(1 - s) / pi
        const cld w = 1.0L - s;
        return sinpi(s) / (kPiL * recip_gamma_right(w, tau));
    }
    return recip_gamma_right(s, tau);
}

}  // namespace

cplx recip_gamma(cplx s, const GammaConfig& config) {
    if (!(config.accuracy_target >= 1e-15 && config.accuracy_target <= 1e-6)) {
        throw DomainError("recip_gamma: accuracy_target must lie in [1e-15, 1e-6]");
    }
    const ld tau = std::max(1e-19L, static_cast<ld>(config.accuracy_target) * 1e-3L);
    const cld r = recip_gamma_impl(cld(s.real(), s.imag()), tau);
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

std::complex<long double> recip_gamma_ext(std::complex<long double> s) {
    return recip_gamma_impl(s, 1e-19L);
}

namespace detail {
std::complex<long double> log_gamma_ext(std::complex<long double> s) {
    if (s.real() < 0.5L) {
        // log Gamma(s) = log pi - log sin(pi s) - log Gamma(1 - s)
        const cld sn = sinpi(s);
        if (sn == 0.0L) return {std::numeric_limits<ld>::infinity(), 0.0L};
        return std::log(kPiL) - std::log(sn) - log_gamma_ext(1.0L - s);
    }
    const ld z0 = stirling_radius(1e-19L);
    cld z = s;
    cld log_prod = 0.0L;
    while (z.real() < z0) {
        log_prod += std::log(z);
        z += 1.0L;
    }
    return stirling(z) - log_prod;
}
}  // namespace detail

cplx recip_gamma_hankel(cplx s, const ContourSpec& contour, double tol) {
    if (!(tol > 0.0)) throw DomainError("recip_gamma_hankel: tol must be positive");
    const DiscretizedContour path = build_contour(contour, 1.0, tol * 1e-2);
    IntegrandSpec integrand;
    integrand.decay_exponent = 1.0;
    integrand.pole_floor = 0.0;
    integrand.f = [s](const ContourPoint& u) {
        // e^u u^{-s} with u^{-s} on the branch selected by the contour angle.
        const cplx log_u(std::log(u.r), u.phi);
        return std::exp(u.z - s * log_u);
    };
    const QuadratureResult q = integrate(path, integrand, 2.0 * kPi * tol);
    return q.value / cplx(0.0, 2.0 * kPi);
}

}  // namespace ml2v
