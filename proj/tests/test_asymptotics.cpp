#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bergman/asymptotics.hpp"
#include "bergman/errors.hpp"
#include "bergman/faber_grunsky.hpp"

using namespace bergman;

namespace {

Real sq(const Real& x) { return boost::multiprecision::sqrt(x); }

struct Run {
    LaurentSeries series;
    MomentMatrix M;
    ArnoldiResult A;
    std::vector<Polynomial> f;
};

Run run(const DomainSpec& d, int n_max, int digits) {
    ScopedPrecision p(digits);
    auto s = exterior_map_series(d, default_truncation(n_max), digits);
    auto M = moments_contour(d, n_max, digits);
    auto A = arnoldi(M, n_max);
    auto f = normalized_faber(faber_polynomials(s, n_max));
    return {std::move(s), std::move(M), std::move(A), std::move(f)};
}

}  // namespace

TEST_CASE("rate estimator on synthetic sequences") {
    ScopedPrecision p(64);
    for (int n : {1, 10, 100, 1000}) {
        CHECK(boost::multiprecision::abs(rate_s(Real(1) / n, Real(1) / (n + 2), n) - 1) < pow10_neg(60));
        const Real a = boost::multiprecision::pow(Real(n), -Real(3) / 2);
        const Real b = boost::multiprecision::pow(Real(n + 2), -Real(3) / 2);
        CHECK(boost::multiprecision::abs(rate_s(a, b, n) - Real(3) / 2) < pow10_neg(60));
    }
    // 1/n + 1/n^2 approaches 1 from above
    Real prev(100);
    for (int n = 10; n <= 1000; n *= 10) {
        auto g = [](int m) { return Real(1) / m + Real(1) / (Real(m) * m); };
        const Real s = rate_s(g(n), g(n + 2), n);
        CHECK(s > 1);
        CHECK(s < prev);
        prev = s;
    }
    CHECK(prev - 1 < Real(1) / 500);
    CHECK_THROWS_AS(rate_s(Real(0), Real(1), 4), DomainError);
    CHECK_THROWS_AS(rate_s(Real(1), Real(1), 0), UsageError);
}

TEST_CASE("disk: A_n vanishes") {
    const int digits = 64;
    ScopedPrecision p(digits);
    auto R = run(DomainSpec::disk(), 12, digits);
    for (const Complex& z : {Complex(2), Complex(3, 1)})
        for (int n = 0; n <= 12; ++n) CHECK(abs(a_n(DomainSpec::disk(), R.A.basis, z, n)) < pow10_neg(digits / 2));
    for (int n = 0; n <= 12; ++n)
        CHECK(abs(relative_ratio(DomainSpec::disk(), R.A.basis, R.f, Complex(0, 2), n)) < pow10_neg(digits / 2));

    auto rep = asymptotics_report(DomainSpec::disk(), R.A.basis, Complex(2), 2, 12);
    auto w = theorem1_check(rep, std::vector<Real>(13, Real(0)), 1.0);
    CHECK(w.max == 0);
    CHECK_THROWS_AS(a_n(DomainSpec::disk(), R.A.basis, Complex(Real(1) + pow10_neg(4)), 3), DomainError);
    CHECK_THROWS_AS(a_n(DomainSpec::disk(), R.A.basis, Complex(2), 13), UsageError);
}

TEST_CASE("ellipse: f_n / p_n - 1 = R_nn - 1 independently of z") {
    const int digits = 80;
    ScopedPrecision p(digits);
    const auto d = DomainSpec::ellipse("2");
    auto R = run(d, 16, digits);
    for (const Complex& z : {Complex(4), Complex(0, 3), Complex(-3, 2)}) {
        for (int n = 0; n <= 16; ++n) {
            const Real eps = boost::multiprecision::pow(Real(2), -4 * n - 4);
            CHECK(abs(relative_ratio(d, R.A.basis, R.f, z, n) - Complex(sq(1 - eps) - 1)) < pow10_neg(digits / 2));
        }
    }
    CHECK_THROWS_AS(relative_ratio(d, R.A.basis, R.f, Complex(0.5), 3), DomainError);

    // |A_n| n^{beta/2} / sqrt(eps_n) falls off for every beta since eps_n is geometric
    std::vector<Real> eps;
    for (int n = 0; n <= 16; ++n) eps.push_back(boost::multiprecision::pow(Real(2), -4 * n - 4));
    auto rep = asymptotics_report(d, R.A.basis, Complex(3), 1, 16);
    auto w = theorem1_check(rep, eps, 2.0);
    CHECK(w.ratio.back().second < w.ratio.front().second / 10);
}

TEST_CASE("lens: A_n splits into the Faber part plus the basis change") {
    const int digits = 64;
    ScopedPrecision p(digits);
    const auto d = DomainSpec::lens();
    const int n_max = 30;
    auto R = run(d, n_max, digits);
    const auto series = exterior_map_series(d, 1000, digits);

    for (const Complex& z : {Complex(3), Complex(0, 2), Complex(-2.5, 1)}) {
        const Complex w = phi_eval(d, z);
        for (int n : {5, 17, 30}) {
            const Complex lhs = faber_part(d, R.f, z, n);
            const Complex r = faber_residual_direct(series, R.f[static_cast<std::size_t>(n)], n, w);
            const Complex rhs = sq(pi() / Real(n + 1)) * r / pow(w, n);
            CHECK(abs(lhs - rhs) < pow10_neg(40));
        }
    }

    // f_n / p_n - 1 = O(sqrt(eps_n)) outside the hull
    auto C = grunsky_matrix(exterior_map_series(d, 2000, digits), n_max + 1, 64, {1600, true});
    Real worst(0);
    for (int n = 4; n <= n_max; ++n) {
        const Real e = epsilon(C, n).value();
        const Real ratio = abs(relative_ratio(d, R.A.basis, R.f, Complex(3), n)) / sq(e);
        worst = std::max(worst, ratio);
    }
    CHECK(worst < 1);
    CHECK(worst > 0);
}

TEST_CASE("report layout and serialization") {
    ScopedPrecision p(48);
    AsymptoticsReport rep{Complex(3), "lens", 48, {}};
    for (int n = 98; n <= 122; ++n) rep.rows.push_back({n, 1 / (Real(n) + Real(1) / 2), std::nullopt});
    for (std::size_t i = 0; i + 2 < rep.rows.size(); ++i)
        rep.rows[i].s = rate_s(rep.rows[i].abs_a, rep.rows[i + 2].abs_a, rep.rows[i].n);
    CHECK(!rep.row(121).s);
    CHECK(rep.row(120).s);
    CHECK_THROWS_AS(rep.row(5), UsageError);

    const std::string csv = rep.csv(6);
    CHECK(csv.rfind("n,abs_a,s\n98,1.01523e-2,9.94975e-1\n", 0) == 0);
    CHECK(csv.find("\n122,8.16327e-3,\n") != std::string::npos);
    const auto j = rep.json(6);
    CHECK(j["rows"].size() == 25);
    CHECK(j["rows"][24]["s"].is_null());
    CHECK(j["domain"] == "lens");

    const auto cells = format_table(rep);
    REQUIRE(cells.size() == 21);
    CHECK(cells[0].n == 100);
    CHECK(cells[0].abs_a == "9.950e-3");
    CHECK(cells[0].s == "0.99507");
    CHECK(cells[1].s == "0.9951");
    // the last two rows print no rate
    CHECK(cells[19].s == "---");
    CHECK(cells[20].s == "---");
    CHECK(cells[3].abs_a == "9.661e-3");  // 1/103.5 = 0.00966183...

    auto expected = cells;
    expected[3].abs_a = "9.662e-3";
    auto diff = diff_table(expected, cells);
    REQUIRE(diff.size() == 1);
    CHECK(diff[0].n == 103);
    CHECK(diff[0].column == "abs_a");
    CHECK(diff_table(cells, cells).empty());

    const std::string text = render_table("3", cells);
    CHECK(text.find("100  9.950e-3") != std::string::npos);
    CHECK(text.find("| 101") != std::string::npos);
}

TEST_CASE("published tables") {
    ScopedPrecision p(32);
    auto t = published_tables();
    REQUIRE(t.size() == 2);
    for (const auto& spec : t) {
        REQUIRE(spec.expected.size() == 21);
        CHECK(spec.expected.front().n == kTableFirst);
        CHECK(spec.expected.back().n == kTableLast);
        CHECK(spec.expected[19].s == "---");
    }
    CHECK(t[0].expected[0].abs_a == "8.120e-5");
    CHECK(t[0].expected[0].s == "1.02301");
    CHECK(t[1].expected[1].s == "0.9513");
    CHECK(t[1].expected[20].abs_a == "1.098e-3");
    CHECK(t[0].expected[19].abs_a == "6.164e-5");
    CHECK(abs(t[1].z - Complex(0, 2)) == 0);
}
