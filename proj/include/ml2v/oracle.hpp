#pragma once

#include <string>
#include <vector>

#include "ml2v/core.hpp"

namespace ml2v {

/// Extended-precision reference value.
struct OracleValue {
    std::string re;  ///< decimal, `digits` significant figures
    std::string im;
    cplx approx;
    /// Absolute bound on the neglected series remainder.
    double tail_bound = 0.0;
    int digits = 0;
    /// Precision the sum was actually carried at, after the cancellation guard.
    int working_digits = 0;
};

/// Sums the double series in MPFR arithmetic to `digits` significant figures
/// (20..100). The working precision grows with the observed cancellation; when
/// more than 1000 working digits would be needed BudgetExceeded is thrown.
///
/// If alpha and beta are (to 1e-15) rationals with a common denominator
/// q <= 200 they are taken as exact, and 1/Gamma along each residue class of
/// the lattice mu + j/q is propagated by 1/Gamma(s+1) = (1/Gamma(s))/s.
OracleValue oracle_eval(cplx x, cplx y, const Parameters& params, int digits);

/// 1/Gamma(s) in MPFR arithmetic (Spouge approximation with a shift for Re s < 1).
OracleValue oracle_recip_gamma(cplx s, int digits);

/// Number of matching significant digits, -log10(|a - b| / |a|).
double agreement_digits(const OracleValue& a, const OracleValue& b);

struct CorpusPoint {
    double alpha;
    double beta;
    cplx mu;
    cplx x;
    cplx y;
};

struct CorpusRecord {
    CorpusPoint point;
    OracleValue value;
};

/// The points frozen into the regression corpus.
std::vector<CorpusPoint> standard_corpus_points();

/// One JSON object per line:
/// {"alpha","beta","mu":{re,im},"x":{re,im},"y":{re,im},"digits",
///  "working_digits","value":{"re":"<decimal>","im":"<decimal>"},"tail_bound"}
std::string corpus_line(const CorpusRecord& r);
CorpusRecord parse_corpus_line(const std::string& line);
std::vector<CorpusRecord> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<CorpusRecord>& records);

}  // namespace ml2v
