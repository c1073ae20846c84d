#include "ml2v/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ml2v/asymptotics.hpp"
#include "ml2v/oracle.hpp"
#include "ml2v/representations.hpp"
#include "ml2v/selftest.hpp"
#include "ml2v/series.hpp"

namespace ml2v::cli {

using nlohmann::json;

namespace {

double parse_real(const std::string& s, const std::string& whole) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw DomainError("cannot parse complex literal '" + whole + "'");
    return v;
}

const std::vector<std::string> kMethods = {"auto",   "series",  "lemma1",     "lemma2",
                                           "remark1", "lemma3", "asymptotic", "oracle"};

}  // namespace

cplx parse_complex(const std::string& text) {
    if (text.empty()) throw DomainError("empty complex literal");
    if (text.back() != 'i') return {parse_real(text, text), 0.0};
    const std::string body = text.substr(0, text.size() - 1);
    size_t split = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        if (body.empty()) return {0.0, 1.0};
        return {0.0, parse_real(body, text)};
    }
    return {parse_real(body.substr(0, split), text), parse_real(body.substr(split), text)};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(cplx v) {
    std::string im = format_double(v.imag());
    if (im[0] != '-') im = "+" + im;
    return format_double(v.real()) + im + "i";
}

ResultRecord evaluate_point(const EvalRequest& req, cplx x, cplx y) {
    if (!(req.tol > 0.0)) throw DomainError("tol must be positive");
    const Parameters params = validate_params(req.alpha, req.beta, req.mu);
    const auto start = std::chrono::steady_clock::now();

    auto contour = [&]() {
        if (req.epsilon && req.theta) return ContourSpec{*req.epsilon, *req.theta};
        ContourSpec spec;
        if (auto chosen = choose_contour(x, y, params)) spec = *chosen;
        else if (!req.epsilon || !req.theta) throw RegionError("no admissible contour clears the poles");
        if (req.epsilon) spec.epsilon = *req.epsilon;
        if (req.theta) spec.theta = *req.theta;
        return spec;
    };

    Evaluation ev;
    const std::string& m = req.method;
    if (m == "auto") {
        ev = eval_auto(x, y, params, req.tol);
    } else if (m == "series") {
        ev = eval_double_series(x, y, params, SeriesBudget{req.tol, 2000});
    } else if (m == "lemma1") {
        ev = eval_lemma1(x, y, params, contour(), req.tol);
    } else if (m == "lemma2") {
        ev = eval_lemma2(x, y, params, contour(), req.tol);
    } else if (m == "remark1") {
        ev = eval_remark1(x, y, params, contour(), req.tol);
    } else if (m == "lemma3") {
        ev = eval_lemma3(x, y, params, contour(), req.tol);
    } else if (m == "asymptotic") {
        const double tau1 = req.theta ? *req.theta : default_tau1(x, y, params);
        ev = eval_asymptotic(x, y, params, TruncationOrders{req.p_alpha, req.p_beta}, tau1);
    } else if (m == "oracle") {
        const OracleValue o = oracle_eval(x, y, params, req.digits);
        ev.method = Method::Oracle;
        ev.value = o.approx;
        ev.est_error = o.tail_bound + std::numeric_limits<double>::epsilon() * std::abs(o.approx);
    } else {
        throw DomainError("unknown method '" + m + "'");
    }
    const auto stop = std::chrono::steady_clock::now();

    ResultRecord r;
    r.alpha = req.alpha;
    r.beta = req.beta;
    r.mu = req.mu;
    r.x = x;
    r.y = y;
    r.value = ev.value;
    r.est_error = ev.est_error;
    r.method = to_string(ev.method);
    r.case_tag = ev.asymptotic_case ? to_string(*ev.asymptotic_case) : "";
    r.ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return r;
}

std::vector<std::pair<cplx, cplx>> grid_points(const GridSpec& g) {
    if (g.nx < 1 || g.ny < 1) throw DomainError("grid counts must be >= 1");
    auto lin = [](cplx a, cplx b, int n, int i) {
        return n == 1 ? a : a + (b - a) * (static_cast<double>(i) / (n - 1));
    };
    std::vector<std::pair<cplx, cplx>> pts;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.ny; ++j) pts.emplace_back(lin(g.x_min, g.x_max, g.nx, i), lin(g.y_min, g.y_max, g.ny, j));
    }
    return pts;
}

std::string csv_header() {
    return "alpha,beta,mu_re,mu_im,x_re,x_im,y_re,y_im,val_re,val_im,est_error,method,case,ms";
}

std::string to_csv(const ResultRecord& r) {
    std::ostringstream os;
    const double fields[] = {r.alpha,       r.beta,        r.mu.real(),    r.mu.imag(),
                             r.x.real(),    r.x.imag(),    r.y.real(),     r.y.imag(),
                             r.value.real(), r.value.imag(), r.est_error};
    for (double f : fields) os << format_double(f) << ',';
    os << r.method << ',' << r.case_tag << ',' << format_double(r.ms);
    return os.str();
}

ResultRecord record_from_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 14) throw DomainError("CSV row must have 14 fields");
    auto d = [&](int k) { return std::strtod(cells[k].c_str(), nullptr); };
    ResultRecord r;
    r.alpha = d(0);
    r.beta = d(1);
    r.mu = {d(2), d(3)};
    r.x = {d(4), d(5)};
    r.y = {d(6), d(7)};
    r.value = {d(8), d(9)};
    r.est_error = d(10);
    r.method = cells[11];
    r.case_tag = cells[12];
    r.ms = d(13);
    return r;
}

namespace {

json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double from_number(const json& j) {
    if (j.is_null()) return std::nan("");
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        return std::strtod(s.c_str(), nullptr);
    }
    return j.get<double>();
}

json record_json(const ResultRecord& r) {
    json j;
    j["alpha"] = number(r.alpha);
    j["beta"] = number(r.beta);
    j["mu_re"] = number(r.mu.real());
    j["mu_im"] = number(r.mu.imag());
    j["x_re"] = number(r.x.real());
    j["x_im"] = number(r.x.imag());
    j["y_re"] = number(r.y.real());
    j["y_im"] = number(r.y.imag());
    j["val_re"] = number(r.value.real());
    j["val_im"] = number(r.value.imag());
    j["est_error"] = number(r.est_error);
    j["method"] = r.method;
    j["case"] = r.case_tag;
    j["ms"] = number(r.ms);
    return j;
}

ResultRecord record_of(const json& j) {
    ResultRecord r;
    r.alpha = from_number(j.at("alpha"));
    r.beta = from_number(j.at("beta"));
    r.mu = {from_number(j.at("mu_re")), from_number(j.at("mu_im"))};
    r.x = {from_number(j.at("x_re")), from_number(j.at("x_im"))};
    r.y = {from_number(j.at("y_re")), from_number(j.at("y_im"))};
    r.value = {from_number(j.at("val_re")), from_number(j.at("val_im"))};
    r.est_error = from_number(j.at("est_error"));
    r.method = j.at("method").get<std::string>();
    r.case_tag = j.at("case").get<std::string>();
    r.ms = from_number(j.at("ms"));
    return r;
}

}  // namespace

std::string to_json(const ResultRecord& r) { return record_json(r).dump(); }

ResultRecord record_from_json(const std::string& text) { return record_of(json::parse(text)); }

std::vector<ResultRecord> records_from_json_array(const std::string& text) {
    std::vector<ResultRecord> out;
    for (const json& j : json::parse(text)) out.push_back(record_of(j));
    return out;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const RegionError*>(&e) ||
        dynamic_cast<const DegenerateDenominator*>(&e) || dynamic_cast<const MagnitudeFloor*>(&e)) {
        return kDomainError;
    }
    return kNumericFailure;
}

namespace {

struct Options {
    EvalRequest req;
    std::string mu = "1";
    std::string x = "0";
    std::string y = "0";
    std::string format = "json";
    std::string x_min = "0", x_max = "0", y_min = "0", y_max = "0";
    int nx = 1;
    int ny = 1;
    std::string corpus;
    bool with_oracle = false;
    std::string suite;
    std::string out_path;
    int freeze_digits = 50;
    int check_digits = 30;
};

void add_params(CLI::App* sc, Options& o) {
    sc->add_option("--alpha", o.req.alpha, "alpha in (0, 2]");
    sc->add_option("--beta", o.req.beta, "beta in (0, 2]");
    sc->add_option("--mu", o.mu, "complex mu, e.g. 1+0.5i");
    sc->add_option("--method", o.req.method, "auto|series|lemma1|lemma2|remark1|lemma3|asymptotic|oracle");
    sc->add_option("--tol", o.req.tol, "tolerance (absolute below |E| = 1, relative above)");
    sc->add_option("--p-alpha", o.req.p_alpha, "asymptotic order in 1/y");
    sc->add_option("--p-beta", o.req.p_beta, "asymptotic order in 1/x");
    sc->add_option("--epsilon", o.req.epsilon, "contour radius");
    sc->add_option("--theta", o.req.theta, "contour angle (tau1 for asymptotics)");
    sc->add_option("--digits", o.req.digits, "oracle digits");
    sc->add_option("--format", o.format, "json|csv");
}

void add_grid(CLI::App* sc, Options& o) {
    sc->add_option("--x-min", o.x_min);
    sc->add_option("--x-max", o.x_max);
    sc->add_option("--nx", o.nx);
    sc->add_option("--y-min", o.y_min);
    sc->add_option("--y-max", o.y_max);
    sc->add_option("--ny", o.ny);
}

void finish_request(Options& o) {
    o.req.mu = parse_complex(o.mu);
    if (o.format == "json") {
        o.req.format = OutputFormat::Json;
    } else if (o.format == "csv") {
        o.req.format = OutputFormat::Csv;
    } else {
        throw DomainError("unknown format '" + o.format + "'");
    }
    if (std::find(kMethods.begin(), kMethods.end(), o.req.method) == kMethods.end()) {
        throw DomainError("unknown method '" + o.req.method + "'");
    }
    validate_params(o.req.alpha, o.req.beta, o.req.mu);
}

GridSpec grid_of(const Options& o) {
    return GridSpec{parse_complex(o.x_min), parse_complex(o.x_max), o.nx,
                    parse_complex(o.y_min), parse_complex(o.y_max), o.ny};
}

int cmd_eval(const Options& o, std::ostream& out) {
    const ResultRecord r = evaluate_point(o.req, parse_complex(o.x), parse_complex(o.y));
    if (o.req.format == OutputFormat::Csv) {
        out << csv_header() << '\n' << to_csv(r) << '\n';
    } else {
        out << to_json(r) << '\n';
    }
    return kOk;
}

int cmd_grid(const Options& o, std::ostream& out, std::ostream& err) {
    const auto pts = grid_points(grid_of(o));
    json arr = json::array();
    if (o.req.format == OutputFormat::Csv) out << csv_header() << '\n';
    for (const auto& [x, y] : pts) {
        ResultRecord r;
        try {
            r = evaluate_point(o.req, x, y);
        } catch (const std::exception& e) {
            err << "x=" << format_complex(x) << " y=" << format_complex(y) << ": " << e.what() << '\n';
            r.alpha = o.req.alpha;
            r.beta = o.req.beta;
            r.mu = o.req.mu;
            r.x = x;
            r.y = y;
            r.value = {std::nan(""), std::nan("")};
            r.est_error = std::numeric_limits<double>::infinity();
            r.method = o.req.method;
        }
        if (o.req.format == OutputFormat::Csv) {
            out << to_csv(r) << '\n';
        } else {
            arr.push_back(record_json(r));
        }
    }
    if (o.req.format == OutputFormat::Json) out << arr.dump() << '\n';
    return kOk;
}

struct Candidate {
    std::string name;
    std::optional<Evaluation> ev;
    std::string skipped;
};

std::vector<Candidate> all_methods(cplx x, cplx y, const Parameters& params, const Options& o) {
    const double tol = o.req.tol;
    std::vector<Candidate> c;
    auto attempt = [&](const std::string& name, auto&& fn) {
        Candidate cand{name, std::nullopt, ""};
        try {
            cand.ev = fn();
        } catch (const DegenerateDenominator&) {
            cand.skipped = "degenerate";
        } catch (const BudgetExceeded& e) {
            cand.skipped = std::string("budget: ") + e.what();
        } catch (const Error& e) {
            cand.skipped = e.what();
        }
        c.push_back(std::move(cand));
    };

    attempt("series", [&] { return eval_double_series(x, y, params, SeriesBudget{tol, 2000}); });

    if (const auto spec = choose_contour(x, y, params)) {
        std::string name = "integral";
        try {
            const ArgumentRegions reg = classify_arguments(x, y, params, *spec);
            const bool xp = reg.x == RegionLabel::OmegaPlus;
            const bool yp = reg.y == RegionLabel::OmegaPlus;
            name = !xp && !yp ? "lemma1" : !xp ? "lemma2" : !yp ? "remark1" : "lemma3";
        } catch (const Error&) {
        }
        attempt(name, [&] { return eval_representation(x, y, params, *spec, tol); });
    } else {
        c.push_back({"integral", std::nullopt, "no admissible contour"});
    }

    if (params.regime == Regime::Standard && std::min(std::abs(x), std::abs(y)) >= kAsymptoticFloor) {
        attempt("asymptotic", [&] {
            return eval_asymptotic(x, y, params, TruncationOrders{o.req.p_alpha, o.req.p_beta},
                                   default_tau1(x, y, params));
        });
    } else {
        c.push_back({"asymptotic", std::nullopt, "below magnitude floor"});
    }

    if (o.with_oracle) {
        attempt("oracle", [&] {
            const OracleValue v = oracle_eval(x, y, params, o.req.digits);
            Evaluation e;
            e.method = Method::Oracle;
            e.value = v.approx;
            e.est_error = v.tail_bound + std::numeric_limits<double>::epsilon() * std::abs(v.approx);
            return e;
        });
    }
    return c;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const double tol = o.req.tol;
    int flags = 0;
    double max_delta = 0.0;

    if (!o.corpus.empty()) {
        const auto records = read_corpus(o.corpus);
        for (const CorpusRecord& rec : records) {
            const CorpusPoint& p = rec.point;
            const Parameters params = validate_params(p.alpha, p.beta, p.mu);
            const cplx ref = rec.value.approx;
            out << "alpha=" << format_double(p.alpha) << " beta=" << format_double(p.beta)
                << " mu=" << format_complex(p.mu) << " x=" << format_complex(p.x)
                << " y=" << format_complex(p.y);
            try {
                const Evaluation e = eval_auto(p.x, p.y, params, tol);
                const double delta = std::abs(e.value - ref);
                const double limit = e.est_error + tol * std::max(1.0, std::abs(ref));
                max_delta = std::max(max_delta, delta);
                const bool bad = !(delta <= limit);
                flags += bad;
                out << " method=" << method_tag(e) << " |delta|=" << format_double(delta)
                    << (bad ? " FLAG" : " ok") << '\n';
            } catch (const BudgetExceeded& e) {
                ++flags;
                max_delta = std::numeric_limits<double>::infinity();
                out << " FLAG " << e.what() << '\n';
            }
        }
        out << "corpus points " << records.size() << ", max |delta| = " << format_double(max_delta)
            << ", flags = " << flags << '\n';
        return flags == 0 ? kOk : kNumericFailure;
    }

    const Parameters params = validate_params(o.req.alpha, o.req.beta, o.req.mu);
    std::vector<std::pair<cplx, cplx>> pts;
    if (o.nx > 1 || o.ny > 1 || o.x_min != "0" || o.x_max != "0" || o.y_min != "0" || o.y_max != "0") {
        pts = grid_points(grid_of(o));
    } else {
        pts.emplace_back(parse_complex(o.x), parse_complex(o.y));
    }
    for (const auto& [x, y] : pts) {
        out << "point x=" << format_complex(x) << " y=" << format_complex(y) << '\n';
        const auto cands = all_methods(x, y, params, o);
        for (const Candidate& c : cands) {
            if (c.ev) {
                out << "  " << c.name << " value=" << format_complex(c.ev->value)
                    << " est=" << format_double(c.ev->est_error) << '\n';
            } else {
                out << "  " << c.name << " skipped: " << c.skipped << '\n';
            }
        }
        for (size_t a = 0; a < cands.size(); ++a) {
            for (size_t b = a + 1; b < cands.size(); ++b) {
                if (!cands[a].ev || !cands[b].ev) continue;
                const Evaluation& ea = *cands[a].ev;
                const Evaluation& eb = *cands[b].ev;
                const double delta = std::abs(ea.value - eb.value);
                const double limit =
                    ea.est_error + eb.est_error + tol * std::max(1.0, std::abs(ea.value));
                const bool bad = !(delta <= limit);
                flags += bad;
                max_delta = std::max(max_delta, delta);
                out << "  " << cands[a].name << " vs " << cands[b].name
                    << " |delta|=" << format_double(delta) << " limit=" << format_double(limit)
                    << (bad ? " FLAG" : " ok") << '\n';
            }
        }
    }
    out << "max |delta| = " << format_double(max_delta) << ", flags = " << flags << '\n';
    return flags == 0 ? kOk : kNumericFailure;
}

int cmd_selftest(const Options& o, std::ostream& out) {
    const auto results = run_selftest(o.suite);
    if (results.empty()) throw DomainError("unknown suite '" + o.suite + "'");
    bool ok = true;
    char line[256];
    for (const SuiteResult& r : results) {
        std::snprintf(line, sizeof line, "%-16s %-4s %4d checks  ", r.name.c_str(),
                      r.passed ? "PASS" : "FAIL", r.checks);
        out << line << r.detail << '\n';
        ok = ok && r.passed;
    }
    return ok ? kOk : kSelftestFailed;
}

int cmd_freeze(const Options& o, std::ostream& out) {
    std::vector<CorpusRecord> records;
    int failures = 0;
    for (const CorpusPoint& p : standard_corpus_points()) {
        const Parameters params = validate_params(p.alpha, p.beta, p.mu);
        const OracleValue hi = oracle_eval(p.x, p.y, params, o.freeze_digits);
        const OracleValue lo = oracle_eval(p.x, p.y, params, o.check_digits);
        const double agree = agreement_digits(hi, lo);
        const bool good = agree >= o.check_digits - 5;
        failures += !good;
        out << "alpha=" << format_double(p.alpha) << " beta=" << format_double(p.beta)
            << " x=" << format_complex(p.x) << " y=" << format_complex(p.y)
            << " agreement=" << agree << (good ? "" : " FAIL") << '\n';
        records.push_back({p, hi});
    }
    if (failures > 0) {
        out << failures << " points failed the dual-precision check; corpus not written\n";
        return kNumericFailure;
    }
    write_corpus(o.out_path, records);
    out << "wrote " << records.size() << " records to " << o.out_path << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-variable Mittag-Leffler function E_{alpha,beta}(x, y; mu)", "ml2v"};
    app.require_subcommand(1);
    Options o;

    CLI::App* eval = app.add_subcommand("eval", "evaluate one point");
    add_params(eval, o);
    eval->add_option("--x", o.x, "complex x");
    eval->add_option("--y", o.y, "complex y");

    CLI::App* grid = app.add_subcommand("grid", "evaluate a grid (x-major order)");
    add_params(grid, o);
    add_grid(grid, o);

    CLI::App* compare = app.add_subcommand("compare", "cross-check all applicable methods");
    add_params(compare, o);
    add_grid(compare, o);
    compare->add_option("--x", o.x, "complex x");
    compare->add_option("--y", o.y, "complex y");
    compare->add_option("--corpus", o.corpus, "replay a frozen oracle corpus");
    compare->add_flag("--with-oracle", o.with_oracle, "include the oracle");

    CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suites");
    selftest->add_option("--suite", o.suite, "run only this suite");

    CLI::App* freeze = app.add_subcommand("freeze", "regenerate the oracle corpus");
    freeze->add_option("--out", o.out_path, "output JSON-lines file")->required();
    freeze->add_option("--digits", o.freeze_digits, "stored digits");
    freeze->add_option("--check-digits", o.check_digits, "second precision for the agreement check");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }

    try {
        if (*selftest) return cmd_selftest(o, out);
        if (*freeze) return cmd_freeze(o, out);
        finish_request(o);
        if (*eval) return cmd_eval(o, out);
        if (*grid) return cmd_grid(o, out, err);
        return cmd_compare(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace ml2v::cli
