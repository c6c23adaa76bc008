#include "bergman/asymptotics.hpp"

#include "bergman/errors.hpp"

#include <algorithm>
#include <sstream>

namespace bergman {

namespace {

// Keeps evaluation points on a compact subset of the exterior.
Complex exterior_phi(const DomainSpec& domain, const Complex& z) {
    const Complex w = phi_eval(domain, z);
    if (abs(w) < 1 + Real(1) / 1000) throw DomainError("evaluation point too close to the boundary");
    return w;
}

Complex normalized_ratio(const DomainSpec& domain, const Complex& value, const Complex& z, int n) {
    const Complex w = exterior_phi(domain, z);
    const Complex dphi = phi_derivative(domain, z);
    return value * boost::multiprecision::sqrt(pi() / Real(n + 1)) / (dphi * pow(w, n)) - Complex(1);
}

TableCell cell(int n, const char* a, const char* s) { return {n, a, s}; }

}  // namespace

Complex a_n(const DomainSpec& domain, const BergmanBasis& basis, const Complex& z, int n) {
    if (n < 0 || n > basis.n_max()) throw UsageError("degree outside the computed basis");
    ScopedPrecision guard(basis.digits());
    return normalized_ratio(domain, basis(n, z), z, n);
}

Complex faber_part(const DomainSpec& domain, const std::vector<Polynomial>& f, const Complex& z, int n) {
    if (n < 0 || static_cast<std::size_t>(n) >= f.size()) throw UsageError("degree outside the Faber list");
    return normalized_ratio(domain, f[static_cast<std::size_t>(n)](z), z, n);
}

Real rate_s(const Real& abs_a_n, const Real& abs_a_n2, int n) {
    if (n < 1) throw UsageError("s_n needs n >= 1");
    if (!(abs_a_n > 0) || !(abs_a_n2 > 0)) throw DomainError("s_n is undefined for a vanishing A_n");
    return boost::multiprecision::log(abs_a_n / abs_a_n2) / boost::multiprecision::log(Real(n + 2) / Real(n));
}

Complex relative_ratio(const DomainSpec& domain, const BergmanBasis& basis, const std::vector<Polynomial>& f,
                       const Complex& z, int n) {
    if (n < 0 || n > basis.n_max() || static_cast<std::size_t>(n) >= f.size()) {
        throw UsageError("degree out of range");
    }
    ScopedPrecision guard(basis.digits());
    if (!outside_convex_hull(domain, z)) throw DomainError("point is not outside the convex hull");
    const Complex p = basis(n, z);
    if (abs(p).is_zero()) throw DomainError("p_n vanishes at the evaluation point");
    return f[static_cast<std::size_t>(n)](z) / p - Complex(1);
}

const AsymptoticsRow& AsymptoticsReport::row(int n) const {
    for (const auto& r : rows)
        if (r.n == n) return r;
    throw UsageError("no row for n = " + std::to_string(n));
}

std::string AsymptoticsReport::csv(int sig) const {
    std::ostringstream out;
    out << "n,abs_a,s\n";
    for (const auto& r : rows) {
        out << r.n << ',' << to_sig_digits(r.abs_a, sig) << ',';
        if (r.s) out << to_sig_digits(*r.s, sig);
        out << '\n';
    }
    return out.str();
}

nlohmann::json AsymptoticsReport::json(int sig) const {
    nlohmann::json j;
    j["domain"] = domain_tag;
    j["digits"] = digits;
    j["z"] = {to_sig_digits(z.real(), sig), to_sig_digits(z.imag(), sig)};
    auto& arr = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"n", r.n}, {"abs_a", to_sig_digits(r.abs_a, sig)}};
        row["s"] = r.s ? nlohmann::json(to_sig_digits(*r.s, sig)) : nlohmann::json(nullptr);
        arr.push_back(row);
    }
    return j;
}

AsymptoticsReport asymptotics_report(const DomainSpec& domain, const BergmanBasis& basis, const Complex& z,
                                     int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo || n_hi > basis.n_max()) throw UsageError("report range outside the basis");
    ScopedPrecision guard(basis.digits());
    AsymptoticsReport rep{z, domain.tag(), basis.digits(), {}};
    for (int n = n_lo; n <= n_hi; ++n) rep.rows.push_back({n, abs(a_n(domain, basis, z, n)), std::nullopt});
    for (std::size_t i = 0; i + 2 < rep.rows.size(); ++i) {
        const Real& a = rep.rows[i].abs_a;
        const Real& b = rep.rows[i + 2].abs_a;
        if (a > 0 && b > 0) rep.rows[i].s = rate_s(a, b, rep.rows[i].n);
    }
    return rep;
}

Theorem1Window theorem1_check(const AsymptoticsReport& report, const std::vector<Real>& eps, double beta) {
    ScopedPrecision guard(report.digits);
    Theorem1Window out{beta, {}, Real(0), Real(0)};
    for (const auto& r : report.rows) {
        if (r.n < 0 || static_cast<std::size_t>(r.n) >= eps.size()) throw UsageError("eps_n missing for a row");
        const Real& e = eps[static_cast<std::size_t>(r.n)];
        if (e < 0) throw DomainError("eps_n must be non-negative");
        if (e == 0) {
            // only the disk gets here, where A_n vanishes up to rounding
            if (r.abs_a > pow10_neg(report.digits / 2)) throw DomainError("eps_n = 0 with nonzero A_n");
            out.ratio.emplace_back(r.n, Real(0));
            continue;
        }
        out.ratio.emplace_back(
            r.n, r.abs_a * boost::multiprecision::pow(Real(r.n), Real(beta) / 2) / boost::multiprecision::sqrt(e));
    }
    if (!out.ratio.empty()) {
        out.max = out.min = out.ratio.front().second;
        for (const auto& [n, v] : out.ratio) {
            out.max = std::max(out.max, v);
            out.min = std::min(out.min, v);
        }
    }
    return out;
}

std::vector<TableSpec> published_tables() {
    TableSpec t1{"table1", "3", Complex(3), {
        cell(100, "8.120e-5", "1.02301"), cell(101, "7.210e-5", "0.9537"),
        cell(102, "7.958e-5", "1.02284"), cell(103, "7.077e-5", "0.9543"),
        cell(104, "7.801e-5", "1.02266"), cell(105, "6.948e-5", "0.9549"),
        cell(106, "7.651e-5", "1.02249"), cell(107, "6.824e-5", "0.9555"),
        cell(108, "7.506e-5", "1.02233"), cell(109, "6.704e-5", "0.9561"),
        cell(110, "7.366e-5", "1.02216"), cell(111, "6.589e-5", "0.9567"),
        cell(112, "7.232e-5", "1.02200"), cell(113, "6.477e-5", "0.9572"),
        cell(114, "7.102e-5", "1.02184"), cell(115, "6.369e-5", "0.9577"),
        cell(116, "6.977e-5", "1.02169"), cell(117, "6.265e-5", "0.9582"),
        cell(118, "6.856e-5", "1.02154"), cell(119, "6.164e-5", "---"),
        cell(120, "6.739e-5", "---"),
    }};
    TableSpec t2{"table2", "2i", Complex(0, 2), {
        cell(100, "1.323e-3", "1.02551"), cell(101, "1.171e-3", "0.9513"),
        cell(102, "1.297e-3", "1.02526"), cell(103, "1.150e-3", "0.9521"),
        cell(104, "1.271e-3", "1.02503"), cell(105, "1.129e-3", "0.9528"),
        cell(106, "1.246e-3", "1.02480"), cell(107, "1.109e-3", "0.9534"),
        cell(108, "1.223e-3", "1.02457"), cell(109, "1.089e-3", "0.9541"),
        cell(110, "1.200e-3", "1.02435"), cell(111, "1.071e-3", "0.9547"),
        cell(112, "1.178e-3", "1.02413"), cell(113, "1.052e-3", "0.9553"),
        cell(114, "1.157e-3", "1.02392"), cell(115, "1.035e-3", "0.9559"),
        cell(116, "1.136e-3", "1.02372"), cell(117, "1.018e-3", "0.9565"),
        cell(118, "1.117e-3", "1.02351"), cell(119, "1.002e-3", "---"),
        cell(120, "1.098e-3", "---"),
    }};
    return {t1, t2};
}

std::vector<TableCell> format_table(const AsymptoticsReport& report, DecimalRounding mode) {
    std::vector<TableCell> out;
    for (int n = kTableFirst; n <= kTableLast; ++n) {
        const auto& r = report.row(n);
        TableCell c{n, to_sig_digits(r.abs_a, 4, mode), "---"};
        if (r.s && n + 2 <= kTableLast) c.s = to_fixed(*r.s, n % 2 == 0 ? 5 : 4, mode);
        out.push_back(c);
    }
    return out;
}

std::vector<CellMismatch> diff_table(const std::vector<TableCell>& expected, const std::vector<TableCell>& actual) {
    std::vector<CellMismatch> out;
    for (const auto& e : expected) {
        auto it = std::find_if(actual.begin(), actual.end(), [&](const TableCell& c) { return c.n == e.n; });
        if (it == actual.end()) {
            out.push_back({e.n, "abs_a", e.abs_a, "missing"});
            out.push_back({e.n, "s", e.s, "missing"});
            continue;
        }
        if (it->abs_a != e.abs_a) out.push_back({e.n, "abs_a", e.abs_a, it->abs_a});
        if (it->s != e.s) out.push_back({e.n, "s", e.s, it->s});
    }
    return out;
}

std::string render_table(const std::string& point, const std::vector<TableCell>& cells) {
    std::ostringstream out;
    const std::string head = "|A_n(" + point + ")|";
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    out << pad("n", 5) << pad(head, 12) << pad("s_n", 9) << "| " << pad("n", 5) << pad(head, 12) << "s_n\n";
    for (std::size_t i = 0; i < cells.size(); i += 2) {
        const auto& e = cells[i];
        out << pad(std::to_string(e.n), 5) << pad(e.abs_a, 12) << pad(e.s, 9) << "|";
        if (i + 1 < cells.size()) {
            const auto& o = cells[i + 1];
            out << ' ' << pad(std::to_string(o.n), 5) << pad(o.abs_a, 12) << o.s;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace bergman
