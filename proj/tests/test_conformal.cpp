#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bergman/conformal.hpp"
#include "bergman/errors.hpp"

using namespace bergman;

namespace {

Real err(const Complex& a, const Complex& b) { return abs(a - b); }

}  // namespace

TEST_CASE("laurent data of the built-in domains") {
    ScopedPrecision p(64);
    auto disk = exterior_map_series(DomainSpec::disk(), 4, 64);
    CHECK(disk.psi1() == 1);
    for (int k = 0; k >= -4; --k) CHECK(abs(disk.coefficient(k)) == 0);

    auto ell = exterior_map_series(DomainSpec::ellipse("2"), 4, 64);
    CHECK(ell.psi1() == 1);
    CHECK(ell.coefficient(-1) == Complex(0.25));
    CHECK(abs(ell.coefficient(-2)) == 0);

    auto lens = exterior_map_series(DomainSpec::lens(), 5, 64);
    CHECK(lens.psi1() == 2);
    CHECK(lens.coefficient(-1) == Complex(0.5));
    CHECK(lens.coefficient(-3) == Complex(-0.125));
    CHECK(lens.coefficient(-5) == Complex(0.0625));
    CHECK(abs(lens.coefficient(0)) == 0);
    CHECK(abs(lens.coefficient(-2)) == 0);
    CHECK(abs(lens.coefficient(-4)) == 0);
    CHECK(lens.capacity_inverse() == Real(0.5));
}

TEST_CASE("lens coefficients reproduce w + sqrt(w^2 + 1)") {
    ScopedPrecision p(64);
    auto lens = exterior_map_series(DomainSpec::lens(), 400, 64);
    for (const Complex& w : {Complex(3.0, 1.0), Complex(0.0, -2.5), Complex(-4.0, 0.5)}) {
        // Branch with sqrt(w^2 + 1) ~ w at infinity.
        const Complex direct = w + w * sqrt(Complex(1) + Complex(1) / (w * w));
        CHECK(err(psi_eval(lens, w), direct) < pow10_neg(55));
    }
}

TEST_CASE("psi and phi at sample points") {
    ScopedPrecision p(64);
    CHECK(psi_eval(exterior_map_series(DomainSpec::disk(), 4, 64), Complex(2)) == Complex(2));
    CHECK(err(psi_eval(exterior_map_series(DomainSpec::ellipse("2"), 4, 64), Complex(2)), Complex(2.125)) <
          pow10_neg(60));
    auto lens = exterior_map_series(DomainSpec::lens(), 600, 64);
    CHECK(err(psi_eval(lens, Complex(Real(4) / 3)), Complex(3)) < pow10_neg(50));

    CHECK(err(phi_eval(DomainSpec::lens(), Complex(3)), Complex(Real(4) / 3)) < pow10_neg(60));
    CHECK(err(phi_eval(DomainSpec::lens(), Complex(0.0, 2.0)), Complex(0.0, 1.25)) < pow10_neg(60));
    CHECK(phi_eval(DomainSpec::disk(), Complex(5)) == Complex(5));

    CHECK(err(phi_derivative(DomainSpec::lens(), Complex(3)), Complex(Real(5) / 9)) < pow10_neg(60));
    CHECK(phi_derivative(DomainSpec::disk(), Complex(0.3, 7.0)) == Complex(1));
    CHECK(err(phi_derivative(DomainSpec::ellipse("2"), Complex(2.125)), Complex(Real(16) / 15)) < pow10_neg(60));
}

TEST_CASE("errors") {
    ScopedPrecision p(32);
    auto disk = exterior_map_series(DomainSpec::disk(), 4, 32);
    CHECK_THROWS_AS(psi_eval(disk, Complex(0.5)), DomainError);
    CHECK_THROWS_AS(phi_eval(DomainSpec::lens(), Complex(0.5)), DomainError);
    // interior points where (z - 1/z)/2 lands outside the unit disk
    CHECK_THROWS_AS(phi_eval(DomainSpec::lens(), Complex(0.1)), DomainError);
    CHECK_THROWS_AS(phi_eval(DomainSpec::lens(), Complex(2.3)), DomainError);
    CHECK_NOTHROW(phi_eval(DomainSpec::lens(), Complex(2.5)));
    CHECK_THROWS_AS(exterior_map_series(DomainSpec::disk(), -1, 32), UsageError);
    CHECK_THROWS_AS(DomainSpec::ellipse("1"), UsageError);
    CHECK_THROWS_AS(LaurentSeries(Real(0), Complex(), {}, 32), UsageError);
    CHECK_THROWS_AS(boundary_arcs(DomainSpec::custom(disk)), UsageError);
}

TEST_CASE("round trip phi(psi(w)) = w") {
    const int digits = 64;
    ScopedPrecision p(digits);
    for (const auto& d : {DomainSpec::disk(), DomainSpec::ellipse("2"), DomainSpec::lens()}) {
        auto s = exterior_map_series(d, 2000, digits);
        for (double rho : {1.5, 2.0, 4.0}) {
            // Lens series converges like rho^{-N}; 2000 terms suffice from rho = 1.5 on.
            for (int t = 0; t < 7; ++t) {
                const Complex w = polar(Real(rho), Real(t) * Real(0.9));
                CHECK(err(phi_eval(d, psi_eval(s, w)), w) < pow10_neg(digits - 10));
            }
        }
    }
}

TEST_CASE("custom domains invert psi by Newton") {
    ScopedPrecision p(48);
    std::vector<Complex> neg{Complex(0.1, 0.05), Complex(-0.02)};
    auto s = LaurentSeries(Real(1.5), Complex(0.2, -0.1), neg, 48);
    auto d = DomainSpec::custom(s);
    const Complex w(1.7, -0.9);
    const Complex z = psi_eval(s, w);
    CHECK(err(phi_eval(d, z), w) < pow10_neg(40));
    CHECK(err(phi_derivative(d, z) * psi_derivative(s, w), Complex(1)) < pow10_neg(40));
}

TEST_CASE("boundary arcs") {
    const int digits = 64;
    ScopedPrecision p(digits);
    auto disk = boundary_arcs(DomainSpec::disk());
    REQUIRE(disk.size() == 1);
    CHECK(abs(disk[0].center) == 0);
    CHECK(disk[0].radius == 1);

    auto lens = boundary_arcs(DomainSpec::lens());
    REQUIRE(lens.size() == 2);
    CHECK(err(lens[0].point(lens[0].theta_end), imag_unit()) < pow10_neg(digits - 5));
    CHECK(err(lens[0].point(lens[0].theta_start), -imag_unit()) < pow10_neg(digits - 5));
    CHECK(lens[0].end == lens[1].start);
    CHECK(lens[1].end == lens[0].start);
    for (const auto& arc : lens) {
        for (int t = 1; t < 10; ++t) {
            const Real theta = arc.theta_start + (arc.theta_end - arc.theta_start) * t / 10;
            CHECK(abs(abs(phi_eval(DomainSpec::lens(), arc.point(theta) * Real(1.0001))) - 1) < Real(1e-3));
            const Complex z = arc.point(theta);
            CHECK(abs(abs(z - Complex(1) / z) - 2) < pow10_neg(digits - 5));
        }
    }
}

TEST_CASE("convex hull and max modulus") {
    ScopedPrecision p(32);
    CHECK(outside_convex_hull(DomainSpec::lens(), Complex(3)));
    CHECK(outside_convex_hull(DomainSpec::lens(), Complex(0.0, 2.0)));
    CHECK_FALSE(outside_convex_hull(DomainSpec::lens(), Complex(0.0, 1.3)));
    CHECK(outside_convex_hull(DomainSpec::ellipse("2"), Complex(0.0, 0.8)));
    CHECK_FALSE(outside_convex_hull(DomainSpec::ellipse("2"), Complex(1.2, 0.0)));
    CHECK(corner_norm_bound(DomainSpec::lens()) == 0.5);
    CHECK(corner_norm_bound(DomainSpec::ellipse("2")) == 0.0);
    CHECK(abs(max_modulus(DomainSpec::lens()) - (1 + boost::multiprecision::sqrt(Real(2)))) < pow10_neg(30));
}
