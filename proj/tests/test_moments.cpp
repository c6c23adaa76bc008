#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bergman/errors.hpp"
#include "bergman/faber_grunsky.hpp"
#include "bergman/moments.hpp"
#include "bergman/quadrature.hpp"

using namespace bergman;

TEST_CASE("gauss-legendre rules") {
    const int digits = 60;
    ScopedPrecision p(digits);
    for (int n : {1, 2, 7, 64}) {
        const auto& rule = gauss_legendre(n, digits);
        // exact for x^m with m < 2n
        for (int m = 0; m < 2 * n; m += (n > 10 ? 9 : 1)) {
            Real s(0);
            for (int i = 0; i < n; ++i)
                s += rule.weights[static_cast<std::size_t>(i)] * boost::multiprecision::pow(rule.nodes[static_cast<std::size_t>(i)], m);
            const Real exact = m % 2 ? Real(0) : Real(2) / (m + 1);
            CHECK(boost::multiprecision::abs(s - exact) < pow10_neg(digits - 4));
        }
        for (int i = 1; i < n; ++i) CHECK(rule.nodes[static_cast<std::size_t>(i - 1)] < rule.nodes[static_cast<std::size_t>(i)]);
    }
    CHECK(&gauss_legendre(64, digits) == &gauss_legendre(64, digits));
}

TEST_CASE("disk moments") {
    const int digits = 64;
    ScopedPrecision p(digits);
    auto M = moments_contour(DomainSpec::disk(), 8, digits);
    for (int j = 0; j <= 8; ++j) {
        for (int k = 0; k <= 8; ++k) {
            const Complex expected = j == k ? Complex(pi() / (j + 1)) : Complex();
            CHECK(abs(M(j, k) - expected) < pow10_neg(digits - 10));
        }
    }
    CHECK(abs(M.area() - pi()) < pow10_neg(digits - 10));
    CHECK(M.domain_tag() == "disk");
    CHECK(M.history().size() >= 2);

    Polynomial one({Complex(1)}), z({Complex(), Complex(1)});
    CHECK(abs(inner_product(one, one, M) - Complex(pi())) < pow10_neg(digits - 10));
    CHECK(abs(inner_product(z, one, M)) < pow10_neg(digits - 10));
    CHECK_THROWS_AS(inner_product(Polynomial(std::vector<Complex>(11)), one, M), UsageError);
}

TEST_CASE("ellipse moments") {
    const int digits = 64;
    ScopedPrecision p(digits);
    auto M = moments_contour(DomainSpec::ellipse("2"), 12, digits);
    const Real a = Real(5) / 4, b = Real(3) / 4;
    CHECK(abs(M.area() - 15 * pi() / 16) < pow10_neg(digits - 10));
    // int |z|^2 dA = pi a b (a^2 + b^2) / 4, int z^2 dA = pi a b (a^2 - b^2) / 4
    CHECK(abs(M(1, 1) - Complex(pi() * a * b * (a * a + b * b) / 4)) < pow10_neg(digits - 10));
    CHECK(abs(M(2, 0) - Complex(pi() * a * b * (a * a - b * b) / 4)) < pow10_neg(digits - 10));
    CHECK(hermitian_defect(M) == 0);
    CHECK(min_cholesky_pivot(M) > 0);

    // ||f_0||^2 = 1 - eps_0 = 1 - 2^-4
    auto s = exterior_map_series(DomainSpec::ellipse("2"), 40, digits);
    auto f = normalized_faber(faber_polynomials(s, 12));
    CHECK(abs(inner_product(f[0], f[0], M) - Complex(Real(15) / 16)) < pow10_neg(digits - 10));
    for (int n = 0; n < 12; ++n) {
        const Real eps = boost::multiprecision::pow(Real(2), -4 * n - 4);
        const auto& fn = f[static_cast<std::size_t>(n)];
        CHECK(abs(inner_product(fn, fn, M) - Complex(1 - eps)) < pow10_neg(digits - 12));
    }
}

TEST_CASE("lens moments") {
    const int digits = 64;
    ScopedPrecision p(digits);
    auto M = moments_contour(DomainSpec::lens(), 20, digits);
    CHECK(abs(M.area() - (3 * pi() + 2)) < pow10_neg(digits - 10));
    for (int j = 0; j <= 20; ++j)
        for (int k = 0; k <= 20; ++k)
            if ((j + k) % 2) CHECK(abs(M(j, k)) < pow10_neg(digits - 10));
    CHECK(min_cholesky_pivot(M) > 0);
    CHECK(M.leading(5).n_max() == 5);

    // 1 - ||f_n||^2 against the Grunsky column sums
    auto s = exterior_map_series(DomainSpec::lens(), 400, digits);
    auto f = normalized_faber(faber_polynomials(s, 20));
    auto C = grunsky_matrix(s, 20, 80, {320, true});
    for (int n = 0; n < 20; ++n) {
        const auto& fn = f[static_cast<std::size_t>(n)];
        const Real from_moments = 1 - inner_product(fn, fn, M).real();
        const auto e = epsilon(C, n);
        CHECK(from_moments >= e.partial - pow10_neg(digits - 12));
        CHECK(from_moments <= e.upper() + pow10_neg(digits - 12));
    }
}

TEST_CASE("two-dimensional oracle") {
    auto o = moments_oracle_2d(DomainSpec::disk(), 2, 1024);
    CHECK(std::abs(o.entries(0, 0) - 3.141592653589793) < 1e-2);
    CHECK(std::abs(o.entries(1, 0)) < 1e-3);
    CHECK(o.error_estimate(0, 0) > std::abs(o.entries(0, 0) - 3.141592653589793));

    auto lens = moments_oracle_2d(DomainSpec::lens(), 3, 512);
    CHECK(std::abs(lens.entries(1, 0)) <= lens.error_estimate(1, 0));
    CHECK(std::abs(lens.entries(0, 0) - (3 * 3.141592653589793 + 2)) <= lens.error_estimate(0, 0));

    CHECK_THROWS_AS(moments_oracle_2d(DomainSpec::disk(), 2, 32), UsageError);
    ScopedPrecision p(32);
    CHECK_THROWS_AS(moments_contour(DomainSpec::custom(exterior_map_series(DomainSpec::disk(), 1, 32)), 2, 32),
                    UsageError);
}

TEST_CASE("quadrature budget exhaustion is reported") {
    QuadratureConfig q;
    q.nodes_per_arc = 8;
    q.max_refinements = 1;
    CHECK_THROWS_AS(moments_contour(DomainSpec::lens(), 30, 64, q), ConvergenceError);
}
