// bergman: command-line front end.
//
//   bergman [global flags] <moments|grunsky|bergman|asymptotics|tables|ellipse-validate> [flags]
//
// Exit status: 0 ok, 1 usage, 2 numerical failure, 3 diff/validation failure.

#include "bergman/asymptotics.hpp"
#include "bergman/container.hpp"
#include "bergman/errors.hpp"
#include "bergman/pipeline.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace bergman;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitDiff = 3;

struct Options {
    std::string domain = "lens";
    int n_max = 0;  // 0: command default
    int digits = kDefaultDigits;
    std::string cache_dir;
    bool no_cache = false;
    std::string format = "csv";
    std::vector<std::string> points;
    int nodes = 64;
    int refinements = 6;
    double quad_target = 0;
    // tables
    bool diff = false;
    std::string rounding = "toward-zero";
    // output precision for csv/json numbers
    int sig = 20;
};

DomainSpec parse_domain(const std::string& text) {
    if (text == "disk") return DomainSpec::disk();
    if (text == "lens") return DomainSpec::lens();
    if (text.rfind("ellipse:", 0) == 0) return DomainSpec::ellipse(text.substr(8));
    if (text.rfind("custom:", 0) == 0) {
        const std::string file = text.substr(7);
        std::optional<Container> c;
        try {
            c = read_container(file, false);
        } catch (const FormatError& e) {
            throw UsageError("cannot read " + file + ": " + e.what());
        }
        if (!c) throw UsageError("no such file: " + file);
        try {
            return DomainSpec::custom(series_from_container(*c));
        } catch (const FormatError& e) {
            throw UsageError(file + ": " + e.what());
        }
    }
    throw UsageError("unknown domain '" + text + "' (disk, ellipse:<r>, lens, custom:<file>)");
}

Real parse_part(const std::string& s) {
    if (s.empty() || s == "+") return Real(1);
    if (s == "-") return Real(-1);
    try {
        return from_decimal(s);
    } catch (const std::exception&) {
        throw UsageError("bad number '" + s + "'");
    }
}

// "3", "2i", "-i", "1.5+0.5i", "1e-3-2i"
Complex parse_point(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw UsageError("empty evaluation point");
    if (s.back() != 'i') return Complex(parse_part(s), Real(0));
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return Complex(Real(0), parse_part(s));
    return Complex(parse_part(s.substr(0, split)), parse_part(s.substr(split)));
}

std::string point_text(const Complex& z) {
    std::ostringstream out;
    out << to_sig_digits(z.real(), 10);
    if (!z.imag().is_zero()) out << (z.imag() < 0 ? "" : "+") << to_sig_digits(z.imag(), 10) << 'i';
    return out.str();
}

QuadratureConfig quadrature(const Options& o) {
    QuadratureConfig q;
    q.nodes_per_arc = o.nodes;
    q.max_refinements = o.refinements;
    q.target_log10 = o.quad_target;
    return q;
}

std::filesystem::path cache_dir(const Options& o) {
    if (o.no_cache) return {};
    if (!o.cache_dir.empty()) return o.cache_dir;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "bergman";
    if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "bergman";
    return {};
}

int n_max_or(const Options& o, int fallback) { return o.n_max > 0 ? o.n_max : fallback; }

PipelineConfig pipeline_config(const Options& o, int n_max) {
    PipelineConfig c;
    c.n_max = n_max;
    c.digits = o.digits;
    c.quadrature = quadrature(o);
    c.cache_dir = cache_dir(o);
    c.log = &std::cerr;
    return c;
}

void require_builtin(const DomainSpec& d, const char* cmd) {
    if (d.kind() == DomainKind::Custom)
        throw UsageError(std::string(cmd) + " needs the boundary; custom domains only support grunsky");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// key,value lines or one JSON object
void emit_summary(const Options& o, const json& j) {
    if (o.format == "json") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::cout << "key,value\n";
    for (const auto& [k, v] : j.items()) std::cout << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
}

std::string sci(const Real& x, int sig = 6) { return to_sig_digits(x, sig); }

int cmd_moments(const Options& o) {
    const auto d = parse_domain(o.domain);
    require_builtin(d, "moments");
    const int n_max = n_max_or(o, 40);
    ScopedPrecision guard(o.digits);
    const auto t0 = std::chrono::steady_clock::now();
    bool reused = false;
    auto M = cached_moments(d, n_max, o.digits, quadrature(o), cache_dir(o), &reused, &std::cerr);
    std::cerr << "moments: " << (reused ? "loaded from cache" : "computed") << " in " << seconds_since(t0) << " s\n";

    json j;
    j["domain"] = d.tag();
    j["n_max"] = n_max;
    j["digits"] = o.digits;
    j["area"] = to_sig_digits(M.area(), o.digits);
    j["hermitian_defect"] = sci(hermitian_defect(M));
    json pivots = json::object();
    for (int m = 10; m < n_max; m *= 2) pivots[std::to_string(m)] = sci(min_cholesky_pivot(M.leading(m)));
    pivots[std::to_string(n_max)] = sci(min_cholesky_pivot(M));
    if (o.format == "json") {
        j["min_relative_pivot"] = pivots;
        json hist = json::array();
        for (const auto& h : M.history()) hist.push_back({{"nodes_per_arc", h.nodes_per_arc}, {"log10_change", h.log10_change}});
        j["quadrature"] = hist;
    } else {
        for (const auto& [m, v] : pivots.items()) j["min_relative_pivot_" + m] = v;
        j["quadrature_nodes_per_arc"] = M.history().back().nodes_per_arc;
        j["quadrature_log10_change"] = M.history().back().log10_change;
    }
    emit_summary(o, j);
    return 0;
}

int cmd_grunsky(const Options& o) {
    const auto d = parse_domain(o.domain);
    const int n_max = n_max_or(o, 120);
    ScopedPrecision guard(o.digits);
    auto g = run_grunsky(d, n_max + 1, o.digits);
    const auto flagged = g.C.flagged_columns();
    if (!flagged.empty())
        std::cerr << "note: " << flagged.size() << " column(s) keep an estimated tail above 10^-" << o.digits / 4
                  << "; eps_n includes the extrapolated tail\n";
    if (o.format == "json") {
        json j{{"domain", d.tag()}, {"digits", o.digits}, {"rows_used", g.C.rows()},
               {"c_norm_estimate", c_norm_estimate(g)}, {"rows", json::array()}};
        for (int n = 0; n <= n_max; ++n) {
            const auto& e = g.eps[static_cast<std::size_t>(n)];
            j["rows"].push_back({{"n", n},
                                 {"eps", to_sig_digits(e.value(), o.sig)},
                                 {"eps_partial", to_sig_digits(e.partial, o.sig)},
                                 {"eps_tail_estimate", to_sig_digits(e.tail_estimate, 6)},
                                 {"section_norm", g.section[static_cast<std::size_t>(n)]},
                                 {"n_eps", to_sig_digits(e.value() * n, 10)}});
        }
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    std::cout << "n,eps,eps_partial,eps_tail_estimate,section_norm,n_eps\n";
    for (int n = 0; n <= n_max; ++n) {
        const auto& e = g.eps[static_cast<std::size_t>(n)];
        std::ostringstream norm;
        norm.precision(15);
        norm << g.section[static_cast<std::size_t>(n)];
        std::cout << n << ',' << to_sig_digits(e.value(), o.sig) << ',' << to_sig_digits(e.partial, o.sig) << ','
                  << to_sig_digits(e.tail_estimate, 6) << ',' << norm.str() << ','
                  << to_sig_digits(e.value() * n, 10) << '\n';
    }
    return 0;
}

int cmd_bergman(const Options& o) {
    const auto d = parse_domain(o.domain);
    require_builtin(d, "bergman");
    const int n_max = n_max_or(o, 40);
    ScopedPrecision guard(o.digits);
    const auto cfg = pipeline_config(o, n_max);
    auto p = run_pipeline(d, cfg);
    auto g = run_grunsky(d, n_max + 1, o.digits);
    if (!cfg.cache_dir.empty()) {
        auto c = to_container(HessenbergMatrix(p.R.R), d.tag(), o.digits);
        c.kind = "r-matrix";
        write_container(cfg.cache_dir / ("rmatrix_" + cache_tag(d.tag()) + "_n" + std::to_string(n_max) + "_d" +
                                         std::to_string(o.digits) + ".txt"),
                        c);
    }

    const Real budget = pow10_neg(o.digits / 2);
    const auto eps = eps_values(g);
    const double c = c_norm_estimate(g);
    const auto gram = gram_faber(p.f, p.M, n_max + 1);
    const auto G = faber_shift(p.series, n_max);
    auto t24 = theorem24_check(p.R, eps, c, budget);

    // eps_n <= 1 - R_nn^2 <= eps_n / (1 - ||C||^2)
    int sandwich_violations = 0;
    Real sandwich_lower_slack(1), sandwich_upper_slack(1);
    for (int n = 0; n <= n_max; ++n) {
        const Real defect = leading_coefficient_defect(p.A.basis, p.series, n);
        const auto& e = g.eps[static_cast<std::size_t>(n)];
        const Real lo = defect - e.partial;
        const Real hi = e.value() / (1 - Real(c) * Real(c)) - defect;
        sandwich_lower_slack = std::min(sandwich_lower_slack, lo);
        sandwich_upper_slack = std::min(sandwich_upper_slack, hi);
        if (lo < -budget || hi < -budget) ++sandwich_violations;
    }

    json j;
    j["domain"] = d.tag();
    j["n_max"] = n_max;
    j["digits"] = o.digits;
    j["budget"] = sci(budget, 3);
    j["c_norm_estimate"] = c;
    j["orthonormality_defect"] = sci(orthonormality_defect(p.A.basis, p.M));
    j["gram_minus_rstar_r"] = sci(cholesky_check(gram, p.R));
    j["intertwining_residual"] = sci(intertwining_residual(p.R, G, p.A.H));
    j["faber_bergman_distance_residual"] = sci(faber_bergman_distance_residual(p.A.basis, p.f, p.R, p.M));
    j["hessenberg_fill"] = sci(p.A.H.fill_below_subdiagonal());
    j["bounds_entry_slack"] = sci(t24.worst_entry_slack);
    j["bounds_row_slack"] = sci(t24.worst_row_slack);
    j["bounds_chain_slack"] = sci(t24.worst_chain_slack);
    j["bounds_entry_violations"] = t24.entry_violations.size();
    j["bounds_row_violations"] = t24.row_violations.size();
    j["sandwich_lower_slack"] = sci(sandwich_lower_slack);
    j["sandwich_upper_slack"] = sci(sandwich_upper_slack);
    j["sandwich_violations"] = sandwich_violations;
    emit_summary(o, j);
    const bool clean = t24.entry_violations.empty() && t24.row_violations.empty() && sandwich_violations == 0;
    return clean ? 0 : kExitDiff;
}

std::vector<Complex> evaluation_points(const Options& o, const DomainSpec& d) {
    std::vector<Complex> pts;
    for (const auto& s : o.points) pts.push_back(parse_point(s));
    if (pts.empty()) pts = {Complex(3), Complex(0, 2)};
    for (const auto& z : pts) {
        Complex w;
        try {
            w = phi_eval(d, z);
        } catch (const DomainError&) {
            throw UsageError("point " + point_text(z) + " is not in the exterior");
        }
        if (abs(w) < 1 + Real(1) / 1000) throw UsageError("point " + point_text(z) + " is not in the exterior (|phi| <= 1.001)");
    }
    return pts;
}

int cmd_asymptotics(const Options& o) {
    const auto d = parse_domain(o.domain);
    require_builtin(d, "asymptotics");
    const int n_max = n_max_or(o, 40);
    ScopedPrecision guard(o.digits);
    const auto pts = evaluation_points(o, d);
    auto p = run_pipeline(d, pipeline_config(o, n_max));
    if (o.format == "json") {
        json all = json::array();
        for (const auto& z : pts) all.push_back(asymptotics_report(d, p.A.basis, z, 1, n_max).json(o.sig));
        std::cout << all.dump(2) << '\n';
        return 0;
    }
    std::cout << "z,n,abs_a,s\n";
    for (const auto& z : pts) {
        const auto rep = asymptotics_report(d, p.A.basis, z, 1, n_max);
        std::istringstream lines(rep.csv(o.sig));
        std::string line;
        std::getline(lines, line);  // header
        while (std::getline(lines, line)) std::cout << point_text(z) << ',' << line << '\n';
    }
    return 0;
}

int cmd_tables(const Options& o, bool format_given) {
    const auto d = parse_domain(o.domain);
    if (d.kind() != DomainKind::Lens) throw UsageError("tables are defined for the lens only");
    if (o.digits < 128) throw UsageError("tables need --digits >= 128");
    const int n_max = n_max_or(o, kTableLast + 1);
    if (n_max < kTableLast + 1) throw UsageError("tables need --nmax >= 121");
    DecimalRounding mode;
    if (o.rounding == "toward-zero") mode = DecimalRounding::TowardZero;
    else if (o.rounding == "half-even") mode = DecimalRounding::HalfEven;
    else throw UsageError("--rounding must be toward-zero or half-even");

    ScopedPrecision guard(o.digits);
    auto p = run_pipeline(d, pipeline_config(o, n_max));
    std::size_t mismatches = 0;
    json out = json::array();
    bool first = true;
    if (format_given && o.format == "csv") std::cout << "table,n,abs_a,s\n";
    for (const auto& t : published_tables()) {
        const auto rep = asymptotics_report(d, p.A.basis, t.z, kTableFirst, kTableLast);
        const auto cells = format_table(rep, mode);
        const auto diff = diff_table(t.expected, cells);
        mismatches += diff.size();
        if (o.diff) {
            for (const auto& m : diff)
                std::cout << t.name << " n=" << m.n << ' ' << m.column << ": expected " << m.expected << ", got "
                          << m.actual << '\n';
            std::cout << t.name << ": " << (diff.empty() ? "all " + std::to_string(2 * t.expected.size() - 2) + " cells match"
                                                           : std::to_string(diff.size()) + " mismatching cell(s)")
                      << '\n';
            continue;
        }
        if (!format_given) {
            if (!first) std::cout << '\n';
            std::cout << t.name << ": z = " << t.point << '\n' << render_table(t.point, cells);
        } else if (o.format == "csv") {
            for (const auto& c : cells) std::cout << t.name << ',' << c.n << ',' << c.abs_a << ',' << c.s << '\n';
        } else {
            json rows = json::array();
            for (const auto& c : cells) rows.push_back({{"n", c.n}, {"abs_a", c.abs_a}, {"s", c.s}});
            out.push_back({{"table", t.name}, {"z", t.point}, {"rows", rows}});
        }
        first = false;
    }
    if (!o.diff && format_given && o.format == "json") std::cout << out.dump(2) << '\n';
    return o.diff && mismatches > 0 ? kExitDiff : 0;
}

int cmd_ellipse_validate(const Options& o, bool domain_given) {
    const auto d = parse_domain(domain_given ? o.domain : "ellipse:2");
    if (d.kind() != DomainKind::Ellipse) throw UsageError("ellipse-validate needs --domain ellipse:<r>");
    const int n_max = n_max_or(o, 40);
    ScopedPrecision guard(o.digits);
    auto p = run_pipeline(d, pipeline_config(o, n_max));
    auto g = run_grunsky(d, n_max + 1, o.digits);
    const Real r = d.ellipse_r();
    const Real eps_tol = pow10_neg(50), offdiag_tol = pow10_neg(80), r_tol = pow10_neg(40), leading_tol = pow10_neg(40);

    Real worst_eps(0), worst_off(0), worst_r(0), worst_rdiag(0), worst_leading_err(0);
    json rows = json::array();
    for (int n = 0; n <= n_max; ++n) {
        const auto nu = static_cast<std::size_t>(n);
        const Real exact = boost::multiprecision::pow(r, -4 * n - 4);
        const Real e = g.eps[nu].value();
        const Real rel = boost::multiprecision::abs(e - exact) / exact;
        const Real rnn = p.R.R(nu, nu).real();
        const Real rnn_err = abs(p.R.R(nu, nu) - Complex(boost::multiprecision::sqrt(1 - exact)));
        const Real leading_err = boost::multiprecision::abs(leading_coefficient_defect(p.A.basis, p.series, n) - exact);
        worst_eps = std::max(worst_eps, rel);
        worst_rdiag = std::max(worst_rdiag, rnn_err);
        worst_leading_err = std::max(worst_leading_err, leading_err);
        for (std::size_t j = 0; j < nu; ++j) worst_r = std::max(worst_r, abs(p.R.R(j, nu)));
        rows.push_back({{"n", n}, {"eps", to_sig_digits(e, o.sig)}, {"eps_rel_error", sci(rel, 3)},
                        {"r_nn", to_sig_digits(rnn, o.sig)}, {"r_nn_error", sci(rnn_err, 3)},
                        {"leading_defect_error", sci(leading_err, 3)}});
    }
    for (int k = 0; k < g.C.cols(); ++k)
        for (int l = 0; l < g.C.rows(); ++l)
            if (l != k) worst_off = std::max(worst_off, abs(g.C(l, k)));

    const bool ok = worst_eps < eps_tol && worst_off < offdiag_tol && worst_r < r_tol && worst_rdiag < r_tol &&
                    worst_leading_err < leading_tol;
    json j{{"domain", d.tag()},
           {"n_max", n_max},
           {"digits", o.digits},
           {"eps_rel_error", sci(worst_eps, 3)},
           {"grunsky_offdiagonal", sci(worst_off, 3)},
           {"r_offdiagonal", sci(worst_r, 3)},
           {"r_diagonal_error", sci(worst_rdiag, 3)},
           {"leading_defect_error", sci(worst_leading_err, 3)},
           {"result", ok ? "PASS" : "FAIL"}};
    if (o.format == "json") {
        j["rows"] = rows;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "n,eps,eps_rel_error,r_nn,r_nn_error,leading_defect_error\n";
        for (const auto& row : rows)
            std::cout << row["n"].get<int>() << ',' << row["eps"].get<std::string>() << ','
                      << row["eps_rel_error"].get<std::string>() << ',' << row["r_nn"].get<std::string>() << ','
                      << row["r_nn_error"].get<std::string>() << ',' << row["leading_defect_error"].get<std::string>() << '\n';
        for (const auto& [k, v] : j.items())
            if (k != "domain" && k != "n_max" && k != "digits") std::cerr << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return ok ? 0 : kExitDiff;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bergman polynomials, Faber polynomials and Grunsky coefficients in multiprecision"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    auto* domain_opt = app.add_option("--domain", o.domain, "disk | ellipse:<r> | lens | custom:<file>");
    app.add_option("--nmax", o.n_max, "Highest polynomial degree (command-specific default)")->check(CLI::PositiveNumber);
    app.add_option("--digits", o.digits, "Working precision in decimal digits")->check(CLI::Range(16, 100000));
    app.add_option("--cache-dir", o.cache_dir, "Cache directory for moments and bases")->envname("BERGMAN_CACHE_DIR");
    app.add_flag("--no-cache", o.no_cache, "Do not read or write the cache");
    auto* format_opt = app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--points", o.points, "Evaluation points, e.g. 3,2i,1.5-0.5i")->delimiter(',');
    app.add_option("--nodes", o.nodes, "Initial Gauss-Legendre nodes per boundary arc")->check(CLI::Range(2, 1 << 20));
    app.add_option("--refinements", o.refinements, "Maximum node doublings")->check(CLI::Range(0, 30));
    app.add_option("--quad-target", o.quad_target, "log10 of the quadrature stopping change (0: -(digits-8))");
    app.add_option("--sig", o.sig, "Significant digits in csv/json numbers")->check(CLI::Range(1, 100000));

    auto* moments = app.add_subcommand("moments", "Compute or load the area moments and summarize them");
    auto* grunsky = app.add_subcommand("grunsky", "eps_n and section norms of the Grunsky matrix");
    auto* bergman = app.add_subcommand("bergman", "Bergman basis, Hessenberg and basis-change matrices with identity checks");
    auto* asymptotics = app.add_subcommand("asymptotics", "|A_n(z)| and s_n at the given points");
    auto* tables = app.add_subcommand("tables", "Lens tables at z = 3 and z = 2i for n = 100..120");
    tables->add_flag("--diff", o.diff, "Compare against the published values; exit 3 on mismatch");
    tables->add_option("--rounding", o.rounding, "toward-zero | half-even")->capture_default_str();
    auto* ellipse = app.add_subcommand("ellipse-validate", "Check the ellipse closed forms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*moments) return cmd_moments(o);
        if (*grunsky) return cmd_grunsky(o);
        if (*bergman) return cmd_bergman(o);
        if (*asymptotics) return cmd_asymptotics(o);
        if (*tables) return cmd_tables(o, format_opt->count() > 0);
        if (*ellipse) return cmd_ellipse_validate(o, domain_opt->count() > 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "numerical failure: " << e.what() << "; raise --digits\n";
        return kExitNumerical;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
