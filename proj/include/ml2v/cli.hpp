#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ml2v/core.hpp"

namespace ml2v::cli {

/// Exit-code contract of the command-line tool.
enum ExitCode : int {
    kOk = 0,
    kSelftestFailed = 1,
    kDomainError = 2,
    kNumericFailure = 3,
};

/// Parses "a", "bi", "a+bi", "a-bi" (no spaces; "i" alone means 1i).
cplx parse_complex(const std::string& text);
/// Inverse of parse_complex at 17 significant digits.
std::string format_complex(cplx v);
/// "%.17g", with "inf", "-inf" and "nan" spelled out.
std::string format_double(double v);

enum class OutputFormat { Json, Csv };

struct EvalRequest {
    double alpha = 1.0;
    double beta = 1.0;
    cplx mu{1.0, 0.0};
    /// auto | series | lemma1 | lemma2 | remark1 | lemma3 | asymptotic | oracle
    std::string method = "auto";
    double tol = 1e-10;
    int p_alpha = 3;
    int p_beta = 3;
    std::optional<double> epsilon;
    std::optional<double> theta;
    OutputFormat format = OutputFormat::Json;
    int digits = 30;
};

struct GridSpec {
    cplx x_min{0.0, 0.0};
    cplx x_max{0.0, 0.0};
    int nx = 1;
    cplx y_min{0.0, 0.0};
    cplx y_max{0.0, 0.0};
    int ny = 1;
};

struct ResultRecord {
    double alpha = 0.0;
    double beta = 0.0;
    cplx mu;
    cplx x;
    cplx y;
    cplx value;
    double est_error = 0.0;
    std::string method;
    std::string case_tag;
    double ms = 0.0;
};

/// Evaluates one point with the requested method; throws on failure.
ResultRecord evaluate_point(const EvalRequest& req, cplx x, cplx y);

/// Grid points in x-major order.
std::vector<std::pair<cplx, cplx>> grid_points(const GridSpec& grid);

std::string csv_header();
std::string to_csv(const ResultRecord& r);
ResultRecord record_from_csv(const std::string& line);
std::string to_json(const ResultRecord& r);
ResultRecord record_from_json(const std::string& text);
/// Parses a JSON array of records as written by `grid --format json`.
std::vector<ResultRecord> records_from_json_array(const std::string& text);

/// Maps an exception thrown by the library onto the exit-code contract.
int exit_code_for(const std::exception& e);

/// Full command-line entry point (argv[0] included).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ml2v::cli
