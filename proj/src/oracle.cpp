#include "ml2v/oracle.hpp"

#include <mpfr.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "ml2v/gamma.hpp"

namespace ml2v {
namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;
constexpr double kLog2_10 = 3.321928094887362;

mpfr_prec_t bits_for(int digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2_10)) + 16;
}

// Owning mpfr_t. Results of binary operations carry the larger precision of
// the operands, so each call controls its own precision.
class Real {
public:
    explicit Real(mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(mpfr_prec_t prec, double d) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, kRnd);
    }
    Real(mpfr_prec_t prec, const std::string& s) {
        mpfr_init2(v_, prec);
        if (mpfr_set_str(v_, s.c_str(), 10, kRnd) != 0) {
            throw DomainError("cannot parse decimal '" + s + "'");
        }
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, kRnd);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, kRnd);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, kRnd); }

    // log2 |v|, -inf for zero; safe far outside double range.
    double log2_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        long e = 0;
        const double m = mpfr_get_d_2exp(&e, v_, kRnd);
        return std::log2(std::abs(m)) + static_cast<double>(e);
    }

    std::string str(int digits) const {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

private:
    mpfr_t v_;
};

mpfr_prec_t pmax(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

#define ML2V_BINOP(op, fn)                                   \
    Real operator op(const Real& a, const Real& b) {         \
        Real r(pmax(a, b));                                  \
        fn(r.get(), a.get(), b.get(), kRnd);                 \
        return r;                                            \
    }
ML2V_BINOP(+, mpfr_add)
ML2V_BINOP(-, mpfr_sub)
ML2V_BINOP(*, mpfr_mul)
ML2V_BINOP(/, mpfr_div)
#undef ML2V_BINOP

Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.get(), a.get(), kRnd);
    return r;
}

#define ML2V_UNARY(name, fn)         \
    Real name(const Real& a) {       \
        Real r(a.prec());            \
        fn(r.get(), a.get(), kRnd);  \
        return r;                    \
    }
ML2V_UNARY(rexp, mpfr_exp)
ML2V_UNARY(rlog, mpfr_log)
ML2V_UNARY(rsqrt, mpfr_sqrt)
ML2V_UNARY(rabs, mpfr_abs)
#undef ML2V_UNARY

Real rpi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), kRnd);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }

struct Cx {
    Real re;
    Real im;

    explicit Cx(mpfr_prec_t p) : re(p), im(p) {}
    Cx(mpfr_prec_t p, cplx v) : re(p, v.real()), im(p, v.imag()) {}
    Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    mpfr_prec_t prec() const { return pmax(re, im); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    cplx approx() const { return {re.to_double(), im.to_double()}; }
};

Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Cx operator*(const Cx& a, const Real& b) { return {a.re * b, a.im * b}; }
Cx operator/(const Cx& a, const Cx& b) {
    const Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Cx operator/(const Cx& a, const Real& b) { return {a.re / b, a.im / b}; }

// r = a * b without temporaries; r must not alias a or b.
void mul_into(Cx& r, const Cx& a, const Cx& b) {
    mpfr_fmms(r.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), kRnd);
    mpfr_fmma(r.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), kRnd);
}

Real cabs(const Cx& a) {
    Real r(a.prec());
    mpfr_hypot(r.get(), a.re.get(), a.im.get(), kRnd);
    return r;
}

Cx cexp(const Cx& a) {
    const Real m = rexp(a.re);
    Real s(a.prec());
    Real c(a.prec());
    mpfr_sin_cos(s.get(), c.get(), a.im.get(), kRnd);
    return {m * c, m * s};
}

Cx clog(const Cx& a) {
    Real arg(a.prec());
    mpfr_atan2(arg.get(), a.im.get(), a.re.get(), kRnd);
    return {rlog(cabs(a)), std::move(arg)};
}

Cx with_prec(const Cx& a, mpfr_prec_t p) {
    Cx r(p);
    mpfr_set(r.re.get(), a.re.get(), kRnd);
    mpfr_set(r.im.get(), a.im.get(), kRnd);
    return r;
}

bool is_nonpositive_integer(const Cx& s) {
    return s.im.is_zero() && mpfr_integer_p(s.re.get()) && mpfr_sgn(s.re.get()) <= 0;
}

// Spouge: Gamma(z+1) = (z+a)^(z+1/2) e^-(z+a) [c0 + sum_k c_k/(z+k) + err],
// |err| relative below a^-1/2 (2 pi)^-(a+1/2) for Re z > 0.
class Spouge {
public:
    Spouge(int digits, mpfr_prec_t out_prec) : out_prec_(out_prec) {
        a_ = static_cast<int>(std::ceil(1.26 * digits)) + 2;
        prec_ = out_prec + static_cast<mpfr_prec_t>(std::ceil(0.55 * a_ * kLog2_10)) + 32;
        coeffs_ = &cache()[{a_, prec_}];
        if (coeffs_->empty()) build();
    }

    Cx recip_gamma(const Cx& s_in) const {
        if (is_nonpositive_integer(s_in)) return Cx(out_prec_);
        Cx s = with_prec(s_in, prec_);
        const Real one(prec_, 1.0);
        // 1/Gamma(s) = s (s+1) ... (s+N-1) / Gamma(s+N)
        Cx shift{Real(prec_, 1.0), Real(prec_)};
        while (mpfr_cmp_si(s.re.get(), 1) < 0) {
            shift = shift * s;
            s.re = s.re + one;
        }
        const Cx z{s.re - one, s.im};
        Cx sum{Real((*coeffs_)[0]), Real(prec_)};
        for (int k = 1; k < a_; ++k) {
            const Cx zk{z.re + Real(prec_, static_cast<double>(k)), z.im};
            sum = sum + Cx{Real((*coeffs_)[k]), Real(prec_)} / zk;
        }
        const Cx t{z.re + Real(prec_, static_cast<double>(a_)), z.im};
        const Cx zh{z.re + Real(prec_, 0.5), z.im};
        const Cx g = cexp(t - zh * clog(t)) / sum;
        return with_prec(g * shift, out_prec_);
    }

private:
    using Key = std::pair<int, mpfr_prec_t>;
    static std::map<Key, std::vector<Real>>& cache() {
        thread_local std::map<Key, std::vector<Real>> c;
        return c;
    }

    void build() {
        std::vector<Real>& c = *coeffs_;
        c.reserve(a_);
        c.push_back(rsqrt(rpi(prec_) * Real(prec_, 2.0)));
        Real fact(prec_, 1.0);  // (k-1)!
        for (int k = 1; k < a_; ++k) {
            if (k > 1) fact = fact * Real(prec_, static_cast<double>(k - 1));
            const Real ak(prec_, static_cast<double>(a_ - k));
            Real p(prec_);
            const Real expo(prec_, k - 0.5);
            mpfr_pow(p.get(), ak.get(), expo.get(), kRnd);
            Real v = p * rexp(ak) / fact;
            if (k % 2 == 0) v = -v;
            c.push_back(std::move(v));
        }
    }

    mpfr_prec_t out_prec_;
    mpfr_prec_t prec_;
    int a_;
    std::vector<Real>* coeffs_;
};

std::optional<long> small_denominator(double v) {
    for (long d = 1; d <= 1000; ++d) {
        const double t = v * static_cast<double>(d);
        const double r = std::round(t);
        if (r >= 1.0 && std::abs(t - r) <= 1e-15 * r) return d;
    }
    return std::nullopt;
}

// 1/Gamma(mu + n alpha + m beta), either directly or along the rational lattice.
class TermGamma {
public:
    TermGamma(const Parameters& p, int digits, mpfr_prec_t prec)
        : prec_(prec), spouge_(digits, prec), mu_(prec, p.mu), alpha_(prec, p.alpha),
          beta_(prec, p.beta) {
        const auto da = small_denominator(p.alpha);
        const auto db = small_denominator(p.beta);
        if (da && db) {
            const long q = std::lcm(*da, *db);
            if (q <= 200) {
                q_ = q;
                a_ = std::lround(p.alpha * q);
                b_ = std::lround(p.beta * q);
            }
        }
    }

    // The reference stays valid until the next call.
    const Cx& operator()(long n, long m) {
        if (q_ == 0) {
            const Cx s{mu_.re + alpha_ * Real(prec_, static_cast<double>(n)) +
                           beta_ * Real(prec_, static_cast<double>(m)),
                       mu_.im};
            direct_ = spouge_.recip_gamma(s);
            return direct_;
        }
        return lattice(n * a_ + m * b_);
    }

private:
    Cx s_of(long j) const {
        Real shift(prec_);
        if (j % q_ == 0) {
            mpfr_set_si(shift.get(), j / q_, kRnd);
        } else {
            mpfr_set_si(shift.get(), j, kRnd);
            mpfr_div_si(shift.get(), shift.get(), q_, kRnd);
        }
        return {mu_.re + shift, mu_.im};
    }

    const Cx& lattice(long j) {
        if (auto it = cache_.find(j); it != cache_.end()) return it->second;
        std::vector<long> chain;
        long base = j;
        while (base >= q_ && cache_.find(base - q_) == cache_.end()) {
            chain.push_back(base);
            base -= q_;
        }
        if (base < q_ && cache_.find(base) == cache_.end()) {
            cache_.emplace(base, spouge_.recip_gamma(s_of(base)));
        } else if (base >= q_) {
            chain.push_back(base);
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const long jj = *it;
            if (cache_.count(jj)) continue;
            const Cx& prev = cache_.at(jj - q_);
            if (prev.is_zero()) {
                cache_.emplace(jj, spouge_.recip_gamma(s_of(jj)));
            } else {
                cache_.emplace(jj, prev / s_of(jj - q_));
            }
        }
        return cache_.at(j);
    }

    mpfr_prec_t prec_;
    Spouge spouge_;
    Cx mu_;
    Real alpha_;
    Real beta_;
    long q_ = 0;
    long a_ = 0;
    long b_ = 0;
    std::unordered_map<long, Cx> cache_;
    Cx direct_{prec_};
};

struct PassResult {
    Cx sum;
    Real abs_sum;
    Real tail;
};

PassResult oracle_pass(cplx x, cplx y, const Parameters& params, int digits, int working) {
    const mpfr_prec_t prec = bits_for(working);
    TermGamma rg(params, working, prec);
    const Cx X(prec, x);
    const Cx Y(prec, y);
    std::vector<Cx> xp{Cx{Real(prec, 1.0), Real(prec)}};
    std::vector<Cx> yp{Cx{Real(prec, 1.0), Real(prec)}};
    Cx sum(prec);
    Real abs_sum(prec);
    Real tail(prec);

    if (x == 0.0 && y == 0.0) {
        sum = rg(0, 0);
        abs_sum = cabs(sum);
        return {sum, abs_sum, tail};
    }

    const double min_step = std::min(params.alpha, params.beta);
    const double tail_log2 = -(digits + 3) * kLog2_10;
    double prev_max = -std::numeric_limits<double>::infinity();
    int halvings = 0;
    Cx p(prec), t(prec);
    Real at(prec), block_abs(prec);
    constexpr int kMaxBlocks = 20000;
    for (int k = 0;; ++k) {
        if (k >= kMaxBlocks) {
            Evaluation partial;
            partial.method = Method::Oracle;
            partial.value = sum.approx();
            partial.est_error = std::numeric_limits<double>::infinity();
            throw BudgetExceeded("oracle series did not converge within the block cap", partial);
        }
        if (k > 0) {
            xp.push_back(xp.back() * X);
            yp.push_back(yp.back() * Y);
        }
        mpfr_set_zero(block_abs.get(), 1);
        double block_max = -std::numeric_limits<double>::infinity();
        for (int n = 0; n <= k; ++n) {
            const int m = k - n;
            mul_into(p, xp[n], yp[m]);
            if (p.is_zero()) continue;
            mul_into(t, p, rg(n, m));
            // |re| + |im| bounds |t| from above, which is all the tail needs.
            mpfr_abs(at.get(), t.re.get(), kRnd);
            if (mpfr_sgn(t.im.get()) < 0) {
                mpfr_sub(at.get(), at.get(), t.im.get(), kRnd);
            } else {
                mpfr_add(at.get(), at.get(), t.im.get(), kRnd);
            }
            mpfr_add(sum.re.get(), sum.re.get(), t.re.get(), kRnd);
            mpfr_add(sum.im.get(), sum.im.get(), t.im.get(), kRnd);
            mpfr_add(block_abs.get(), block_abs.get(), at.get(), kRnd);
            block_max = std::max(block_max, at.log2_abs());
        }
        mpfr_add(abs_sum.get(), abs_sum.get(), block_abs.get(), kRnd);
        halvings = (k > 0 && block_max <= prev_max - 1.0) ? halvings + 1 : 0;
        prev_max = block_max;
        mpfr_mul_2ui(tail.get(), block_abs.get(), 1, kRnd);
        if (halvings < 2 || k * min_step + params.mu.real() < 1.0) continue;
        const double scale = std::max(cabs(sum).log2_abs(), -2.0 * digits * kLog2_10);
        if (tail.log2_abs() <= scale + tail_log2) break;
    }
    return {sum, abs_sum, tail};
}

struct SeriesShape {
    int blocks;         // blocks until the terms fall below the target
    double peak_log10;  // largest term
};

// Term magnitudes from log Gamma in extended precision, without summing.
SeriesShape estimate_shape(cplx x, cplx y, const Parameters& params, int digits, int cap) {
    const double lx = x == 0.0 ? -INFINITY : std::log(std::abs(x));
    const double ly = y == 0.0 ? -INFINITY : std::log(std::abs(y));
    const double min_step = std::min(params.alpha, params.beta);
    double peak = -INFINITY;
    double prev = INFINITY;
    for (int k = 0; k <= cap; ++k) {
        double block = -INFINITY;
        for (int n = 0; n <= k; ++n) {
            const int m = k - n;
            const double lp = (n ? n * lx : 0.0) + (m ? m * ly : 0.0);
            if (!std::isfinite(lp)) continue;
            const std::complex<long double> s(n * params.alpha + m * params.beta + params.mu.real(),
                                              params.mu.imag());
            block = std::max(block, lp - static_cast<double>(detail::log_gamma_ext(s).real()));
        }
        peak = std::max(peak, block);
        const bool past = k * min_step + params.mu.real() >= 1.0 && (block < prev || block == -INFINITY);
        if (past && block < peak - (digits + 10) * std::log(10.0)) return {k, peak / std::log(10.0)};
        prev = block;
    }
    return {cap + 1, peak / std::log(10.0)};
}

OracleValue package(const Cx& v, const Real& tail, int digits, int working) {
    OracleValue o;
    o.re = v.re.str(digits);
    o.im = v.im.str(digits);
    o.approx = v.approx();
    o.tail_bound = tail.to_double();
    o.digits = digits;
    o.working_digits = working;
    return o;
}

void check_digits(int digits) {
    if (digits < 20 || digits > 100) throw DomainError("oracle digits must lie in [20, 100]");
}

}  // namespace

OracleValue oracle_eval(cplx x, cplx y, const Parameters& params, int digits) {
    check_digits(digits);
    const SeriesShape shape = estimate_shape(x, y, params, digits, 3000);
    if (shape.blocks > 3000 || shape.peak_log10 > 1000) {
        std::ostringstream os;
        os << "oracle series too long or too cancelling (largest term about 1e"
           << static_cast<long>(shape.peak_log10) << ", more than " << std::min(shape.blocks, 3000)
           << " blocks)";
        Evaluation partial;
        partial.method = Method::Oracle;
        partial.value = {NAN, NAN};
        partial.est_error = std::numeric_limits<double>::infinity();
        throw BudgetExceeded(os.str(), partial);
    }
    // Without cancellation the extra digits only cost time; with it they
    // save a pass.
    int working = digits + 15 + static_cast<int>(std::max(0.0, std::ceil(shape.peak_log10)));
    for (int pass = 0; pass < 8; ++pass) {
        const PassResult r = oracle_pass(x, y, params, digits, working);
        const double mag = cabs(r.sum).log2_abs();
        const double total = r.abs_sum.log2_abs();
        double loss = 0.0;
        if (!r.abs_sum.is_zero()) {
            loss = std::isfinite(mag) ? std::max(0.0, (total - mag) / kLog2_10) : working;
        }
        if (working - loss >= digits + 8) return package(r.sum, r.tail, digits, working);
        int next = static_cast<int>(std::ceil(digits + 15 + loss));
        if (loss >= working - 3) next = std::max(next, 2 * working);
        if (next > 1000) {
            Evaluation partial;
            partial.method = Method::Oracle;
            partial.value = r.sum.approx();
            partial.est_error = std::numeric_limits<double>::infinity();
            std::ostringstream os;
            os << "oracle needs more than 1000 working digits (cancellation of about " << loss
               << " digits)";
            throw BudgetExceeded(os.str(), partial);
        }
        working = next;
    }
    throw BudgetExceeded("oracle precision escalation did not settle", Evaluation{});
}

OracleValue oracle_recip_gamma(cplx s, int digits) {
    check_digits(digits);
    const int working = digits + 10;
    const mpfr_prec_t prec = bits_for(working);
    const Spouge sp(working, prec);
    return package(sp.recip_gamma(Cx(prec, s)), Real(prec), digits, working);
}

double agreement_digits(const OracleValue& a, const OracleValue& b) {
    const mpfr_prec_t prec = bits_for(std::max(a.digits, b.digits) + 10);
    const Cx va{Real(prec, a.re), Real(prec, a.im)};
    const Cx vb{Real(prec, b.re), Real(prec, b.im)};
    const Real diff = cabs(va - vb);
    const double cap = std::min(a.digits, b.digits);
    if (diff.is_zero()) return cap;
    const Real scale = cabs(va);
    const double d = scale.is_zero() ? -diff.log2_abs() / kLog2_10
                                     : (scale.log2_abs() - diff.log2_abs()) / kLog2_10;
    return std::min(d, cap);
}

std::vector<CorpusPoint> standard_corpus_points() {
    const cplx i(0.0, 1.0);
    return {
        {1.0, 1.0, 1.0, 2.0, 1.0},
        {1.0, 1.0, 1.0, 1.0, 1.0},
        {1.0, 1.0, 1.0, -2.0, -3.0},
        {1.0, 1.0, 1.0, 2.0, 3.0},
        {0.5, 0.8, 1.0, -1.0, -1.0},
        {0.5, 0.8, 1.0 + 0.5 * i, -1.0, -1.0},
        {0.7, 0.7, 2.0, -0.5, 3.0},
        {0.6, 0.9, 1.5, 1.5, 2.0},
        {1.2, 0.9, 1.0, 3.0, -2.0},
        {0.8, 0.8, 1.0, -5.0, -5.0},
        {0.8, 0.8, 1.0, 6.0, 7.0},
        {0.5, 0.8, 1.0, 4.0, -4.0},
        {0.5, 0.8, 1.0, 4.0 + 4.0 * i, -4.0 + 4.0 * i},
        {1.2, 0.9, 1.0, -4.0, 2.0},
        {0.7, 0.7, 0.5 + 0.3 * i, 2.0, -4.0 - 4.0 * i},
        {0.5, 0.5, 1.0, -10.0, -10.0},
        {2.0, 0.5, 1.0, -2.0, 1.5},
        {1.3, 0.4, 0.75, 3.0 - 1.0 * i, -2.5},
    };
}

namespace {
using nlohmann::json;

json cjson(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }
cplx from_cjson(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }
}  // namespace

std::string corpus_line(const CorpusRecord& r) {
    json j;
    j["alpha"] = r.point.alpha;
    j["beta"] = r.point.beta;
    j["mu"] = cjson(r.point.mu);
    j["x"] = cjson(r.point.x);
    j["y"] = cjson(r.point.y);
    j["digits"] = r.value.digits;
    j["working_digits"] = r.value.working_digits;
    j["value"] = json{{"re", r.value.re}, {"im", r.value.im}};
    j["tail_bound"] = r.value.tail_bound;
    return j.dump();
}

namespace {

CorpusRecord parse_corpus_json(const json& j) {
    CorpusRecord r;
    r.point.alpha = j.at("alpha").get<double>();
    r.point.beta = j.at("beta").get<double>();
    r.point.mu = from_cjson(j.at("mu"));
    r.point.x = from_cjson(j.at("x"));
    r.point.y = from_cjson(j.at("y"));
    r.value.digits = j.at("digits").get<int>();
    r.value.working_digits = j.value("working_digits", r.value.digits);
    r.value.re = j.at("value").at("re").get<std::string>();
    r.value.im = j.at("value").at("im").get<std::string>();
    r.value.tail_bound = j.at("tail_bound").get<double>();
    r.value.approx = {std::strtod(r.value.re.c_str(), nullptr),
                      std::strtod(r.value.im.c_str(), nullptr)};
    return r;
}

}  // namespace

CorpusRecord parse_corpus_line(const std::string& line) {
    try {
        return parse_corpus_json(json::parse(line));
    } catch (const json::exception& e) {
        throw Error(std::string("malformed corpus line: ") + e.what());
    }
}

std::vector<CorpusRecord> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus " + path);
    std::vector<CorpusRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_corpus_line(line));
    }
    return out;
}

void write_corpus(const std::string& path, const std::vector<CorpusRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write corpus " + path);
    for (const CorpusRecord& r : records) out << corpus_line(r) << '\n';
}

}  // namespace ml2v
