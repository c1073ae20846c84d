#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ml2v/cli.hpp"

using namespace ml2v;
using namespace ml2v::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ml2v");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) v.push_back(l);
    return v;
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("2") == cplx(2, 0));
    CHECK(parse_complex("-1.5e-3") == cplx(-1.5e-3, 0));
    CHECK(parse_complex("1+2i") == cplx(1, 2));
    CHECK(parse_complex("1-2i") == cplx(1, -2));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("3i") == cplx(0, 3));
    CHECK(parse_complex("1e-3-4.5e2i") == cplx(1e-3, -450));
    CHECK_THROWS(parse_complex("1 + 2i"));
    CHECK_THROWS(parse_complex("abc"));
    const cplx v(0.1, -1.0 / 3.0);
    CHECK(parse_complex(format_complex(v)) == v);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("eval examples") {
    Run r = run_cli({"eval", "--alpha", "1", "--beta", "1", "--mu", "1", "--x", "2", "--y", "1",
                     "--method", "series", "--format", "csv"});
    CHECK(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == csv_header());
    const ResultRecord rec = record_from_csv(rows[1]);
    CHECK(rec.value.real() == doctest::Approx(2 * std::exp(2.0) - std::exp(1.0)).epsilon(1e-10));
    CHECK(rec.method == "series");

    r = run_cli({"eval", "--alpha", "1.5", "--beta", "1.5", "--mu", "1", "--x", "1", "--y", "1"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());

    r = run_cli({"eval", "--alpha", "1", "--beta", "1", "--mu", "1", "--x", "0", "--y", "0"});
    CHECK(r.code == 0);
    CHECK(record_from_json(r.out).value == cplx(1.0, 0.0));
}

TEST_CASE("eval error mapping") {
    CHECK(run_cli({"eval", "--x", "1+", "--y", "0"}).code == 2);
    CHECK(run_cli({"eval", "--x", "2", "--y", "2", "--method", "lemma3"}).code == 2);
    CHECK(run_cli({"eval", "--x", "-2", "--y", "-3", "--method", "lemma3"}).code == 2);
    CHECK(run_cli({"eval", "--x", "1", "--y", "1", "--method", "asymptotic"}).code == 2);
    CHECK(run_cli({"eval", "--x", "1", "--y", "1", "--tol", "0"}).code == 2);
    CHECK(run_cli({"eval", "--alpha", "0.5", "--beta", "0.5", "--x", "-120", "--y", "-120",
                   "--method", "oracle"}).code == 3);
    CHECK(exit_code_for(QuadratureError("q")) == 3);
    CHECK(exit_code_for(RegionError("r")) == 2);
    CHECK(exit_code_for(DegenerateDenominator("d")) == 2);
    CHECK(exit_code_for(MagnitudeFloor("m")) == 2);
}

TEST_CASE("methods through the CLI") {
    const std::vector<std::string> base = {"eval", "--alpha", "1", "--beta", "1", "--x", "-2", "--y", "3"};
    for (const char* m : {"auto", "series", "lemma2", "oracle"}) {
        auto args = base;
        args.insert(args.end(), {"--method", m});
        const Run r = run_cli(args);
        REQUIRE(r.code == 0);
        const ResultRecord rec = record_from_json(r.out);
        const double exact = (-2 * std::exp(-2.0) - 3 * std::exp(3.0)) / (-5.0);
        CHECK(rec.value.real() == doctest::Approx(exact).epsilon(1e-9));
    }
    const Run a = run_cli({"eval", "--alpha", "0.5", "--beta", "0.5", "--x", "-20", "--y", "-25",
                           "--method", "asymptotic", "--p-alpha", "2", "--p-beta", "2"});
    REQUIRE(a.code == 0);
    CHECK(record_from_json(a.out).case_tag == "case4");
}

TEST_CASE("grid csv and json") {
    const std::vector<std::string> g = {"grid", "--alpha", "1", "--beta", "1", "--mu", "1",
                                        "--x-min", "-1", "--x-max", "1", "--nx", "3",
                                        "--y-min", "-1", "--y-max", "1", "--ny", "3"};
    auto csv_args = g;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const Run c = run_cli(csv_args);
    REQUIRE(c.code == 0);
    auto rows = lines(c.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == "alpha,beta,mu_re,mu_im,x_re,x_im,y_re,y_im,val_re,val_im,est_error,method,case,ms");
    std::vector<ResultRecord> from_csv;
    for (size_t i = 1; i < rows.size(); ++i) from_csv.push_back(record_from_csv(rows[i]));
    CHECK(from_csv[4].x == cplx(0, 0));
    CHECK(from_csv[4].y == cplx(0, 0));
    CHECK(from_csv[4].value == cplx(1, 0));
    CHECK(from_csv[0].x == cplx(-1, 0));
    CHECK(from_csv[1].y == cplx(0, 0));

    auto json_args = g;
    json_args.insert(json_args.end(), {"--format", "json"});
    const Run j = run_cli(json_args);
    REQUIRE(j.code == 0);
    const auto from_json = records_from_json_array(j.out);
    REQUIRE(from_json.size() == 9);
    for (size_t i = 0; i < 9; ++i) {
        CHECK(from_json[i].value == from_csv[i].value);
        CHECK(from_json[i].est_error == from_csv[i].est_error);
        CHECK(from_json[i].method == from_csv[i].method);
        CHECK(record_from_json(to_json(from_json[i])).value == from_json[i].value);
        CHECK(record_from_csv(to_csv(from_json[i])).x == from_json[i].x);
    }
}

TEST_CASE("grid rows with failures keep going") {
    const Run r = run_cli({"grid", "--alpha", "1", "--beta", "1", "--method", "lemma3", "--x-min",
                           "-2", "--x-max", "2", "--nx", "2", "--y-min", "3", "--y-max", "3",
                           "--ny", "1", "--format", "csv"});
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(std::isinf(record_from_csv(rows[1]).est_error));
    CHECK(std::isfinite(record_from_csv(rows[2]).est_error));
    CHECK(r.code == 0);
}

TEST_CASE("grid along a ray switches to the asymptotic expansion") {
    const Run r = run_cli({"grid", "--alpha", "0.5", "--beta", "0.5", "--x-min", "-40", "--x-max",
                           "-10", "--nx", "7", "--y-min", "-20", "--y-max", "-20", "--ny", "1",
                           "--tol", "1e-7", "--format", "csv"});
    REQUIRE(r.code == 0);
    auto rows = lines(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(record_from_csv(rows[1]).method.rfind("asymptotic", 0) == 0);
    CHECK(record_from_csv(rows[7]).method.rfind("asymptotic", 0) != 0);
}

TEST_CASE("grid points are x-major") {
    GridSpec g;
    g.x_min = 0.0;
    g.x_max = 1.0;
    g.nx = 2;
    g.y_min = 5.0;
    g.y_max = 7.0;
    g.ny = 3;
    const auto pts = grid_points(g);
    REQUIRE(pts.size() == 6);
    CHECK(pts[0] == std::pair<cplx, cplx>{0.0, 5.0});
    CHECK(pts[1] == std::pair<cplx, cplx>{0.0, 6.0});
    CHECK(pts[3] == std::pair<cplx, cplx>{1.0, 5.0});
    g.nx = 0;
    CHECK_THROWS(grid_points(g));
}

TEST_CASE("compare") {
    Run r = run_cli({"compare", "--alpha", "0.8", "--beta", "0.8", "--mu", "1", "--x", "-5",
                     "--y", "-5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("lemma1") != std::string::npos);
    CHECK(r.out.find("flags = 0") != std::string::npos);

    r = run_cli({"compare", "--alpha", "1", "--beta", "1", "--x", "3", "--y", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("skipped: degenerate") != std::string::npos);

    r = run_cli({"compare", "--corpus", ML2V_CORPUS_PATH});
    CHECK(r.code == 0);
    CHECK(r.out.find("flags = 0") != std::string::npos);
}

TEST_CASE("selftest filter") {
    Run r = run_cli({"selftest", "--suite", "gamma"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma") != std::string::npos);
    CHECK(r.out.find("series") == std::string::npos);
    CHECK(run_cli({"selftest", "--suite", "nope"}).code == 2);
}

TEST_CASE("installed tool") {
    const std::string cmd = std::string(ML2V_TOOL) + " eval --x 0 --y 0 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    const std::string bad = std::string(ML2V_TOOL) + " eval --alpha 3 --x 0 --y 0 2> /dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}
