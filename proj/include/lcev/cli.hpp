// Command-line front end: enumerate, describe, eval and verify.
//
// run() takes the argument list and the three streams explicitly so the
// whole interface can be driven in-process. Exit codes: 0 success,
// 1 verification failure, 2 usage or parse error, 3 unavailable selection,
// 4 domain error.

#pragma once

#include "lcev/cev.hpp"
#include "lcev/descriptor.hpp"
#include "lcev/errors.hpp"
#include "lcev/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lcev::cli {

inline constexpr const char* kVersion = "1.0.0";

enum Exit : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kUnavailable = 3, kDomain = 4 };

inline int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidParams:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::ParamMismatch: return kUsage;
    case ErrorCode::Unavailable:
    case ErrorCode::NotTruncating:
    case ErrorCode::PochhammerZero:
    case ErrorCode::DegenerateDrift:
    case ErrorCode::IrrationalExponent:
    case ErrorCode::NotRetained:
    case ErrorCode::OutOfPipelineScope:
    case ErrorCode::UnsupportedPotential:
    case ErrorCode::OddPoleOrder:
    case ErrorCode::ZeroLeadingCoefficient: return kUnavailable;
    case ErrorCode::DomainError:
    case ErrorCode::NegativeDiscriminant: return kDomain;
    case ErrorCode::StepSizeUnderflow:
    case ErrorCode::VerificationFailed: return kVerifyFailed;
    }
    return kUsage;
}

enum class Format { Text, Csv, Json };

struct Selection {
    std::string cls; // "1".."4" or "beta0"
    int n = 0;
};

struct Grid {
    Rational s_min{ratio(1, 2)}, s_max{2};
    int s_count = 5;
    Rational t_min{0}, t_max{1};
    int t_count = 3;

    std::vector<Rational> s() const { return verify::linspace(s_min, s_max, s_count); }
    std::vector<Rational> t() const { return verify::linspace(t_min, t_max, t_count); }
};

struct RunConfig {
    std::string command;
    Rational r{ratio(7, 100)}, q{ratio(3, 100)}, alpha{ratio(1, 5)};
    std::optional<int> two_beta;
    std::vector<Selection> selection;
    std::vector<Rational> coeffs;
    std::optional<Rational> lambda;
    Grid grid;
    unsigned precision = 30;
    std::optional<Format> format;
    std::string out_path;
    std::size_t count = 4;
    bool mutate = false;
    std::size_t mutate_index = 0;
    bool from_stdin = false;
    bool oracle = true;
    std::string oracle_tol = "1e-22";

    cev::CevParams params(int tb) const { return {r, q, alpha, tb}; }
    cev::CevParams params() const {
        if (!two_beta) throw InvalidParams("--two-beta is required for '" + command + "'");
        return params(*two_beta);
    }
    Format format_or(Format f) const { return format.value_or(f); }
};

/// Two-beta values of the default verification grid.
inline std::vector<int> default_grid() { return {-6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6}; }

namespace detail {

using Json = descriptor::Json;

inline Json envelope(const RunConfig& cfg, Json params, Json results) {
    Json j;
    j["version"] = kVersion;
    j["command"] = cfg.command;
    j["params"] = std::move(params);
    j["results"] = std::move(results);
    return j;
}

inline Json params_json(const RunConfig& cfg, const Json& two_beta) {
    Json p;
    p["twoBeta"] = two_beta;
    p["r"] = to_string(cfg.r);
    p["q"] = to_string(cfg.q);
    p["alpha"] = to_string(cfg.alpha);
    return p;
}

inline Json params_json(const RunConfig& cfg) {
    return params_json(cfg, cfg.two_beta ? Json(*cfg.two_beta) : Json(nullptr));
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
}

inline void write_table(std::ostream& os, const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    const auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            os << r[i];
            if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

inline cev::SpacetimeSolution build(const cev::CevParams& p, const Selection& s, const Rational& lambda) {
    if (s.cls == "beta0") {
        if (p.two_beta() != 0) throw Unavailable("beta0 solutions need 2beta = 0");
        if (s.n != 1 && s.n != -1) throw InvalidParams("beta0 takes --n 1 (plus root) or --n -1 (minus root)");
        return cev::beta_zero_solution(p, lambda, s.n);
    }
    if (s.cls.size() != 1 || s.cls[0] < '1' || s.cls[0] > '4')
        throw ParseError("--class must be 1, 2, 3, 4 or beta0, got '" + s.cls + "'");
    return cev::solution_class(s.cls[0] - '0', s.n, p);
}

inline Rational beta_zero_lambda(const RunConfig& cfg) { return cfg.lambda.value_or(Rational(0)); }

inline std::vector<cev::SpacetimeSolution> selected(const RunConfig& cfg) {
    if (cfg.selection.empty()) throw InvalidParams("'" + cfg.command + "' needs at least one --class");
    const cev::CevParams p = cfg.params();
    std::vector<cev::SpacetimeSolution> out;
    for (const auto& s : cfg.selection) out.push_back(build(p, s, beta_zero_lambda(cfg)));
    return out;
}

/// Every available catalogue entry for one 2beta with the first `count` n.
inline std::vector<cev::SpacetimeSolution> catalogue(const cev::CevParams& p, std::size_t count, const Rational& lambda0) {
    std::vector<cev::SpacetimeSolution> out;
    const int tb = p.two_beta();
    if (tb == 0) {
        for (int root : {+1, -1}) out.push_back(cev::beta_zero_solution(p, lambda0, root));
        return out;
    }
    for (int cls : cev::availability(tb).classes)
        for (int n : cev::admissible_n(tb, count)) out.push_back(cev::solution_class(cls, n, p));
    return out;
}

inline std::ostream& sink(const RunConfig& cfg, std::ostream& out, std::ofstream& file) {
    if (cfg.out_path.empty()) return out;
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw InvalidParams("cannot open --out file '" + cfg.out_path + "'");
    return file;
}

inline Json residual_json(const LaurentPoly& r) {
    Json terms = Json::array();
    for (const auto& [e, c] : r.terms()) terms.push_back(Json{{"exponent", e}, {"coeff", to_string(c)}});
    return terms;
}

} // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_enumerate(const RunConfig& cfg, std::ostream& os) {
    using detail::Json;
    const cev::CevParams p = cfg.params();
    const int tb = p.two_beta();
    const Format fmt = cfg.format_or(Format::Text);
    int status = kOk;

    if (tb == 0) {
        const Rational lambda = detail::beta_zero_lambda(cfg);
        const cev::BetaZeroExponents ex = cev::beta_zero(p, lambda, cfg.precision);
        const std::vector<std::string> header = {"class", "n", "lambda", "exponent", "exact", "formula"};
        std::vector<std::vector<std::string>> rows;
        Json results = Json::array();
        for (int i = 0; i < 2; ++i) {
            const std::string expo = ex.is_exact() ? to_string((*ex.exact)[static_cast<std::size_t>(i)])
                                                   : format_real(ex.exponents[static_cast<std::size_t>(i)], cfg.precision);
            const std::string formula = i == 0 ? "(xi1 + zeta1)/(2 sigma^2)" : "(xi1 - zeta1)/(2 sigma^2)";
            rows.push_back({"beta0", i == 0 ? "1" : "-1", to_string(lambda), expo, ex.is_exact() ? "yes" : "no", formula});
            Json r;
            r["class"] = "beta0";
            r["n"] = i == 0 ? 1 : -1;
            r["lambda"] = to_string(lambda);
            r["exponent"] = expo;
            r["exact"] = ex.is_exact();
            r["formula"] = formula;
            r["xi1"] = to_string(ex.xi1);
            r["discriminant"] = to_string(ex.discriminant);
            results.push_back(std::move(r));
        }
        if (fmt == Format::Json)
            os << detail::envelope(cfg, detail::params_json(cfg), std::move(results)).dump(2) << '\n';
        else if (fmt == Format::Csv) {
            detail::write_csv_row(os, header);
            for (const auto& r : rows) detail::write_csv_row(os, r);
        } else {
            os << "2beta = 0: power solutions S^e exp(-lambda t), xi1 = " << to_string(ex.xi1)
               << ", discriminant = " << to_string(ex.discriminant) << "\n";
            detail::write_table(os, header, rows);
        }
        return kOk;
    }

    const std::vector<std::string> header = {"class", "n", "lambda", "pipeline", "spatial"};
    std::vector<std::vector<std::string>> rows;
    Json results = Json::array();
    for (int cls : cev::availability(tb).classes) {
        for (int n : cev::admissible_n(tb, cfg.count)) {
            std::string lambda, pipeline = "-", spatial;
            Json spatial_json;
            try {
                const auto sol = cev::solution_class(cls, n, p);
                lambda = to_string(sol.lambda());
                spatial = sol.spatial().str();
                spatial_json = descriptor::spatial_json(sol.spatial());
            } catch (const Error& e) {
                lambda = to_string(cev::lambda_for(static_cast<cev::Family>(cls), n, p));
                spatial = std::string("unavailable: ") + std::string(error_name(e.code()));
            }
            if (tb >= 2) {
                try {
                    const auto a = cev::check_agreement(p, static_cast<cev::Family>(cls), n);
                    pipeline = a.ok() ? "agree" : "DISAGREE";
                    if (!a.ok()) status = kVerifyFailed;
                } catch (const Error& e) {
                    pipeline = std::string("n/a (") + std::string(error_name(e.code())) + ")";
                }
            }
            rows.push_back({std::to_string(cls), std::to_string(n), lambda, pipeline, spatial});
            Json r;
            r["class"] = cls;
            r["n"] = n;
            r["lambda"] = lambda;
            r["pipeline"] = pipeline;
            r["spatial"] = spatial_json.is_null() ? Json(spatial) : spatial_json;
            results.push_back(std::move(r));
        }
    }
    if (fmt == Format::Json) {
        os << detail::envelope(cfg, detail::params_json(cfg), std::move(results)).dump(2) << '\n';
    } else if (fmt == Format::Csv) {
        detail::write_csv_row(os, header);
        for (const auto& r : rows) detail::write_csv_row(os, r);
    } else {
        const auto av = cev::availability(tb);
        os << "2beta = " << tb << ": classes";
        for (int c : av.classes) os << ' ' << c;
        os << "; n: " << av.n_rule << "\n";
        detail::write_table(os, header, rows);
    }
    return status;
}

inline int cmd_describe(const RunConfig& cfg, std::ostream& os) {
    using detail::Json;
    const auto sols = detail::selected(cfg);
    if (cfg.format_or(Format::Json) == Format::Text) {
        for (const auto& s : sols)
            os << s.provenance().str() << ": lambda = " << to_string(s.lambda()) << ", C(S) = " << s.spatial().str() << '\n';
        return kOk;
    }
    Json results = Json::array();
    for (const auto& s : sols) results.push_back(descriptor::to_json(s));
    os << detail::envelope(cfg, detail::params_json(cfg), std::move(results)).dump(2) << '\n';
    return kOk;
}

inline int cmd_eval(const RunConfig& cfg, std::ostream& os) {
    using detail::Json;
    const auto sols = detail::selected(cfg);
    std::vector<Rational> coeffs = cfg.coeffs;
    if (coeffs.empty()) coeffs.assign(sols.size(), Rational(1));
    if (coeffs.size() != sols.size())
        throw InvalidParams("--coeff given " + std::to_string(coeffs.size()) + " times for " + std::to_string(sols.size()) +
                            " selected solutions");
    std::vector<cev::Superposition::Term> terms;
    for (std::size_t i = 0; i < sols.size(); ++i) terms.push_back({coeffs[i], sols[i]});
    const cev::Superposition sum(std::move(terms));

    const auto s_grid = cfg.grid.s();
    const auto t_grid = cfg.grid.t();
    for (const auto& s : s_grid)
        if (s <= 0) throw DomainError("grid node S = " + to_string(s) + " is not positive");

    PrecisionScope scope(cfg.precision + kGuardDigits);
    const unsigned digits = cfg.precision;
    const bool per_term = sols.size() > 1;
    std::vector<std::string> header = {"S", "t", "V"};
    if (per_term)
        for (std::size_t i = 0; i < sols.size(); ++i) header.push_back("term" + std::to_string(i + 1));

    std::vector<std::vector<std::string>> rows;
    for (const auto& sr : s_grid) {
        const Real s = to_real(sr);
        for (const auto& tr : t_grid) {
            const Real t = to_real(tr);
            std::vector<std::string> row = {format_real(s, digits), format_real(t, digits), ""};
            Real total(0);
            for (const auto& term : sum.terms()) {
                const Real v = to_real(term.coeff) * term.solution.eval(s, t);
                total += v;
                if (per_term) row.push_back(format_real(v, digits));
            }
            row[2] = format_real(total, digits);
            rows.push_back(std::move(row));
        }
    }

    if (cfg.format_or(Format::Csv) == Format::Json) {
        Json items = Json::array();
        for (const auto& term : sum.terms())
            items.push_back(Json{{"coeff", to_string(term.coeff)}, {"solution", descriptor::to_json(term.solution)}});
        Json grid = Json::array();
        for (const auto& r : rows) {
            Json node{{"S", r[0]}, {"t", r[1]}, {"V", r[2]}};
            if (per_term) node["terms"] = Json(std::vector<std::string>(r.begin() + 3, r.end()));
            grid.push_back(std::move(node));
        }
        Json results{{"terms", std::move(items)}, {"grid", std::move(grid)}};
        os << detail::envelope(cfg, detail::params_json(cfg), std::move(results)).dump(2) << '\n';
    } else if (cfg.format_or(Format::Csv) == Format::Text) {
        detail::write_table(os, header, rows);
    } else {
        detail::write_csv_row(os, header);
        for (const auto& r : rows) detail::write_csv_row(os, r);
    }
    return kOk;
}

struct VerifyEntry {
    verify::Candidate candidate;
    bool run_oracle = false;
};

struct VerifyOutcome {
    verify::ResidualCertificate certificate;
    Real numeric;
    bool numeric_ok = false;
    std::optional<verify::OracleReport> oracle;
    std::string oracle_error;
    bool oracle_ok = true;

    bool passed() const { return certificate.is_zero && numeric_ok && oracle_ok; }
};

namespace detail {

inline std::vector<VerifyEntry> verify_entries(const RunConfig& cfg, std::istream& in) {
    std::vector<VerifyEntry> out;
    if (cfg.from_stdin) {
        const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        for (const auto& d : descriptor::parse_many(text)) out.push_back({d.candidate(), true});
        return out;
    }
    if (!cfg.selection.empty()) {
        for (const auto& s : selected(cfg)) out.push_back({verify::Candidate::from(s), true});
        return out;
    }
    const std::vector<int> grid = cfg.two_beta ? std::vector<int>{*cfg.two_beta} : default_grid();
    for (int tb : grid) {
        const auto sols = catalogue(cfg.params(tb), cfg.count, beta_zero_lambda(cfg));
        // oracle sample: one entry per 2beta, cycling through the classes
        std::size_t pick = 0;
        if (sols.size() > 1) {
            const auto classes = cev::availability(tb).classes;
            const std::size_t per_class = classes.empty() ? sols.size() : sols.size() / classes.size();
            const std::size_t which = static_cast<std::size_t>(tb + 6) % std::max<std::size_t>(1, classes.size());
            pick = which * per_class + (per_class > 1 ? 1 : 0);
        }
        for (std::size_t i = 0; i < sols.size(); ++i) out.push_back({verify::Candidate::from(sols[i]), i == pick});
    }
    return out;
}

} // namespace detail

inline VerifyOutcome verify_one(const RunConfig& cfg, const VerifyEntry& e) {
    VerifyOutcome o;
    o.certificate = verify::exact_pde_residual(e.candidate);
    {
        PrecisionScope scope(cfg.precision + kGuardDigits);
        o.numeric = verify::numeric_pde_residual(e.candidate, cfg.grid.s(), cfg.grid.t(), cfg.precision);
        o.numeric_ok = o.numeric <= verify::numeric_threshold(cfg.precision);
    }
    if (cfg.oracle && e.run_oracle) {
        PrecisionScope scope(cfg.precision + kGuardDigits);
        const Real tol(cfg.oracle_tol);
        try {
            o.oracle = verify::oracle_check(e.candidate, Rational(1), Rational(2), tol, cfg.precision);
            o.oracle_ok = o.oracle->passed(tol);
        } catch (const StepSizeUnderflow& err) {
            o.oracle_error = err.what();
            o.oracle_ok = false;
        }
    }
    return o;
}

inline int cmd_verify(const RunConfig& cfg, std::istream& in, std::ostream& os) {
    using detail::Json;
    if (cfg.precision < 30) throw InvalidParams("verify needs --precision >= 30");
    std::vector<VerifyEntry> entries = detail::verify_entries(cfg, in);
    if (cfg.mutate)
        for (auto& e : entries) e.candidate = verify::mutate(e.candidate, cfg.mutate_index).candidate;

    const Format fmt = cfg.format_or(Format::Text);
    std::size_t failed = 0;
    Json results = Json::array();
    std::vector<std::vector<std::string>> rows;
    std::ostringstream text;
    for (const auto& e : entries) {
        const VerifyOutcome o = verify_one(cfg, e);
        if (!o.passed()) ++failed;
        const std::string numeric = format_sci(o.numeric, 3);
        const std::string oracle = o.oracle            ? format_sci(o.oracle->relative_error, 3)
                                   : o.oracle_error.empty() ? std::string("-")
                                                            : std::string("error");
        if (fmt == Format::Json) {
            Json r;
            r["label"] = e.candidate.label;
            r["twoBeta"] = e.candidate.params.two_beta();
            r["lambda"] = to_string(e.candidate.lambda);
            r["spatial"] = descriptor::spatial_json(e.candidate.spatial);
            r["certificate"] = Json{{"isZero", o.certificate.is_zero},
                                    {"residual", detail::residual_json(o.certificate.residual)},
                                    {"context", o.certificate.context}};
            r["numeric"] = Json{{"maxResidual", numeric},
                                {"threshold", format_sci(verify::numeric_threshold(cfg.precision), 3)},
                                {"passed", o.numeric_ok}};
            if (o.oracle) {
                const auto& rep = *o.oracle;
                r["oracle"] = Json{{"sStart", format_real(rep.s_start, cfg.precision)},
                                   {"sEnd", format_real(rep.s_end, cfg.precision)},
                                   {"closedFormValue", format_real(rep.closed_form_value, cfg.precision)},
                                   {"integratedValue", format_real(rep.integrated_value, cfg.precision)},
                                   {"relativeError", format_sci(rep.relative_error, 3)},
                                   {"stepCount", rep.step_count},
                                   {"toleranceUsed", format_sci(rep.tolerance_used, 3)},
                                   {"passed", o.oracle_ok}};
            } else if (!o.oracle_error.empty()) {
                r["oracle"] = Json{{"error", o.oracle_error}, {"passed", false}};
            } else {
                r["oracle"] = nullptr;
            }
            r["passed"] = o.passed();
            results.push_back(std::move(r));
        } else if (fmt == Format::Csv) {
            rows.push_back({e.candidate.label, std::to_string(e.candidate.params.two_beta()), to_string(e.candidate.lambda),
                            o.certificate.is_zero ? "0" : o.certificate.residual.str(), numeric, oracle,
                            o.passed() ? "PASS" : "FAIL"});
        } else {
            text << (o.passed() ? "PASS" : "FAIL") << "  2beta=" << e.candidate.params.two_beta() << "  "
                 << e.candidate.label << "  exact=" << (o.certificate.is_zero ? "0" : "nonzero") << "  numeric=" << numeric
                 << "  oracle=" << oracle << '\n';
            if (!o.certificate.is_zero) text << "      residual: " << o.certificate.residual.str() << '\n';
            if (!o.oracle_error.empty()) text << "      oracle: " << o.oracle_error << '\n';
        }
    }

    if (fmt == Format::Json) {
        Json tbs;
        if (cfg.from_stdin || cfg.two_beta)
            tbs = cfg.two_beta ? Json(*cfg.two_beta) : Json(nullptr);
        else
            tbs = Json(default_grid());
        os << detail::envelope(cfg, detail::params_json(cfg, tbs), std::move(results)).dump(2) << '\n';
    } else if (fmt == Format::Csv) {
        detail::write_csv_row(os, {"label", "twoBeta", "lambda", "residual", "numeric", "oracle", "status"});
        for (const auto& r : rows) detail::write_csv_row(os, r);
    } else {
        os << text.str() << entries.size() << " checked, " << failed << " failed\n";
    }
    return failed ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------------------

namespace detail {

inline Rational rational_flag(const std::string& name, const std::string& value) {
    try {
        return parse_rational(value);
    } catch (const Error& e) {
        throw ParseError(name + ": " + e.what());
    }
}

} // namespace detail

/// Parses argv-style arguments (without the program name) and runs the command.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Liouvillian solutions of the CEV pricing equation", "lcev"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with option defaults; command-line flags override it");
    app.set_version_flag("--version", kVersion);

    std::string r_s = "7/100", q_s = "3/100", alpha_s = "1/5", lambda_s, format_s;
    std::string s_min = "1/2", s_max = "2", t_min = "0", t_max = "1";
    int two_beta = 0;
    std::vector<std::string> classes, coeffs;
    std::vector<int> ns;
    RunConfig cfg;

    auto* tb_opt = app.add_option("--two-beta", two_beta, "2*beta (integer)");
    app.add_option("--r", r_s, "risk-free rate as p/q or a decimal")->capture_default_str();
    app.add_option("--q", q_s, "dividend yield")->capture_default_str();
    app.add_option("--alpha", alpha_s, "volatility scale, > 0")->capture_default_str();
    app.add_option("--class", classes, "solution class 1..4 or beta0 (repeatable)");
    app.add_option("--n", ns, "catalogue index n per --class (one value applies to all)");
    app.add_option("--coeff", coeffs, "superposition weights, one per --class");
    auto* lambda_opt = app.add_option("--lambda", lambda_s, "separation constant for 2beta = 0");
    app.add_option("--s-min", s_min)->capture_default_str();
    app.add_option("--s-max", s_max)->capture_default_str();
    app.add_option("--s-count", cfg.grid.s_count)->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--t-min", t_min)->capture_default_str();
    app.add_option("--t-max", t_max)->capture_default_str();
    app.add_option("--t-count", cfg.grid.t_count)->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--precision", cfg.precision, "significant decimal digits")
        ->check(CLI::Range(15u, 10000u))
        ->capture_default_str();
    auto* fmt_opt = app.add_option("--format", format_s, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--out", cfg.out_path, "write output here instead of stdout");
    app.add_option("--count", cfg.count, "number of admissible n per class")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--mutate", cfg.mutate, "verify: add 1 to one stored coefficient of each entry");
    app.add_option("--mutate-index", cfg.mutate_index, "verify: which coefficient --mutate changes")->capture_default_str();
    app.add_flag("--stdin", cfg.from_stdin, "verify: read descriptors from standard input");
    bool no_oracle = false;
    app.add_flag("--no-oracle", no_oracle, "verify: skip the integration oracle");
    app.add_option("--oracle-tol", cfg.oracle_tol, "verify: oracle relative tolerance")->capture_default_str();

    for (const char* name : {"enumerate", "describe", "eval", "verify"}) app.add_subcommand(name)->fallthrough();
    app.get_subcommand("enumerate")->description("list available classes, n and lambda");
    app.get_subcommand("describe")->description("emit JSON solution descriptors");
    app.get_subcommand("eval")->description("evaluate a solution or superposition on an (S, t) grid");
    app.get_subcommand("verify")->description("exact, numeric and oracle verification");

    std::vector<const char*> argv{"lcev"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.r = detail::rational_flag("--r", r_s);
        cfg.q = detail::rational_flag("--q", q_s);
        cfg.alpha = detail::rational_flag("--alpha", alpha_s);
        if (cfg.alpha <= 0) throw InvalidParams("--alpha must be positive");
        if (*tb_opt) cfg.two_beta = two_beta;
        if (*lambda_opt) {
            if (cfg.two_beta && *cfg.two_beta != 0) throw InvalidParams("--lambda applies to 2beta = 0 only");
            cfg.lambda = detail::rational_flag("--lambda", lambda_s);
        }
        if (*fmt_opt) cfg.format = format_s == "csv" ? Format::Csv : format_s == "json" ? Format::Json : Format::Text;
        cfg.grid.s_min = detail::rational_flag("--s-min", s_min);
        cfg.grid.s_max = detail::rational_flag("--s-max", s_max);
        cfg.grid.t_min = detail::rational_flag("--t-min", t_min);
        cfg.grid.t_max = detail::rational_flag("--t-max", t_max);
        cfg.oracle = !no_oracle;
        {
            PrecisionScope scope(cfg.precision + kGuardDigits);
            Real tol;
            try {
                tol = Real(cfg.oracle_tol);
            } catch (const std::runtime_error&) {
                throw ParseError("--oracle-tol: not a number: '" + cfg.oracle_tol + "'");
            }
            if (!(tol > 0)) throw InvalidParams("--oracle-tol must be positive");
        }
        if (!ns.empty() && ns.size() != 1 && ns.size() != classes.size())
            throw InvalidParams("--n must be given once or once per --class");
        for (std::size_t i = 0; i < classes.size(); ++i) {
            const int def = classes[i] == "beta0" ? 1 : 0;
            cfg.selection.push_back({classes[i], ns.empty() ? def : ns.size() == 1 ? ns[0] : ns[i]});
        }
        for (const auto& c : coeffs) cfg.coeffs.push_back(detail::rational_flag("--coeff", c));
        if (cfg.from_stdin && cfg.command != "verify") throw InvalidParams("--stdin applies to verify only");

        std::ofstream file;
        std::ostream& os = detail::sink(cfg, out, file);
        if (cfg.command == "enumerate") return cmd_enumerate(cfg, os);
        if (cfg.command == "describe") return cmd_describe(cfg, os);
        if (cfg.command == "eval") return cmd_eval(cfg, os);
        return cmd_verify(cfg, in, os);
    } catch (const Error& e) {
        err << "lcev: " << e.what() << '\n';
        return exit_code(e.code());
    }
}

inline int run(int argc, char** argv, std::istream& in = std::cin, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), in, out, err);
}

} // namespace lcev::cli
