#pragma once

// Exterior asymptotics of the Bergman polynomials:
//
//   A_n(z) = sqrt(pi/(n+1)) p_n(z) / (phi'(z) phi(z)^n) - 1,
//   s_n    = log(|A_n| / |A_{n+2}|) / log((n+2)/n).

#include "bergman/bergman.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bergman {

/// Throws DomainError unless |phi(z)| >= 1 + 10^-3.
Complex a_n(const DomainSpec& domain, const BergmanBasis& basis, const Complex& z, int n);

/// sqrt(pi/(n+1)) f_n(z) / (phi'(z) phi(z)^n) - 1, the Faber part of A_n.
Complex faber_part(const DomainSpec& domain, const std::vector<Polynomial>& f, const Complex& z, int n);

/// s_n from unrounded magnitudes; both must be positive.
Real rate_s(const Real& abs_a_n, const Real& abs_a_n2, int n);

/// f_n(z) / p_n(z) - 1 for z outside the convex hull of the domain.
Complex relative_ratio(const DomainSpec& domain, const BergmanBasis& basis, const std::vector<Polynomial>& f,
                       const Complex& z, int n);

struct AsymptoticsRow {
    int n;
    Real abs_a;
    std::optional<Real> s;  // needs row n + 2
};

struct AsymptoticsReport {
    Complex z;
    std::string domain_tag;
    int digits = 0;
    std::vector<AsymptoticsRow> rows;

    const AsymptoticsRow& row(int n) const;
    /// n,abs_a,s with abs_a and s at `sig` significant digits (s empty when absent).
    std::string csv(int sig = 20) const;
    nlohmann::json json(int sig = 20) const;
};

/// Rows n_lo..n_hi; s_n is filled where n + 2 <= n_hi.
AsymptoticsReport asymptotics_report(const DomainSpec& domain, const BergmanBasis& basis, const Complex& z,
                                     int n_lo, int n_hi);

struct Theorem1Window {
    double beta;
    std::vector<std::pair<int, Real>> ratio;  // (n, |A_n| n^{beta/2} / sqrt(eps_n))
    Real max;
    Real min;
};

/// eps[n] must cover every row of the report. eps_n = 0 is accepted only with
/// A_n = 0 to within 10^(-digits/2), and gives a zero ratio.
Theorem1Window theorem1_check(const AsymptoticsReport& report, const std::vector<Real>& eps, double beta);

// Table layout: rows n = 100..120 split into even and odd columns,
// |A_n| at 4 significant figures, s_n at 5 decimals (even n) and 4 (odd n).

struct TableCell {
    int n;
    std::string abs_a;
    std::string s;  // "---" where s_n is not printed
};

struct TableSpec {
    std::string name;   // "table1", "table2"
    std::string point;  // "3", "2i"
    Complex z;
    std::vector<TableCell> expected;
};

constexpr int kTableFirst = 100;
constexpr int kTableLast = 120;

/// The two published tables (z = 3 and z = 2i on the lens), at the current precision.
std::vector<TableSpec> published_tables();

/// Cells for n = kTableFirst..kTableLast. The published digits are truncations
/// of the exact values, so TowardZero is the default.
std::vector<TableCell> format_table(const AsymptoticsReport& report,
                                    DecimalRounding mode = DecimalRounding::TowardZero);

struct CellMismatch {
    int n;
    std::string column;  // "abs_a" or "s"
    std::string expected;
    std::string actual;
};

std::vector<CellMismatch> diff_table(const std::vector<TableCell>& expected, const std::vector<TableCell>& actual);

/// Two-column plain-text rendering in the published layout.
std::string render_table(const std::string& point, const std::vector<TableCell>& cells);

}  // namespace bergman
