#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bergman/mp.hpp"

using namespace bergman;

TEST_CASE("scoped precision nests") {
    const int outer = current_digits();
    {
        ScopedPrecision a(64);
        CHECK(current_digits() == 64);
        {
            ScopedPrecision b(200);
            CHECK(current_digits() == 200);
            Real x(1);
            CHECK(x.precision() >= 200);
        }
        CHECK(current_digits() == 64);
    }
    CHECK(current_digits() == outer);
}

TEST_CASE("decimal strings round-trip exactly") {
    ScopedPrecision p(128);
    const Real x = pi() / 7;
    const Real y = from_decimal(to_decimal(x));
    CHECK(x == y);
    const Real tiny = -pow10_neg(300) / 3;
    CHECK(from_decimal(to_decimal(tiny)) == tiny);
    CHECK(from_decimal(to_decimal(Real(0))) == 0);
    CHECK_THROWS(from_decimal("1.2.3"));
}

TEST_CASE("significant digits") {
    ScopedPrecision p(64);
    const Real x = from_decimal("8.1209227e-5");
    CHECK(to_sig_digits(x, 4) == "8.121e-5");
    CHECK(to_sig_digits(x, 4, DecimalRounding::TowardZero) == "8.120e-5");
    CHECK(to_sig_digits(from_decimal("1.3236700e-3"), 4) == "1.324e-3");
    CHECK(to_sig_digits(from_decimal("1.3236700e-3"), 4, DecimalRounding::TowardZero) == "1.323e-3");
    // ties go to even
    CHECK(to_sig_digits(from_decimal("2.5"), 1) == "2e0");
    CHECK(to_sig_digits(from_decimal("3.5"), 1) == "4e0");
    CHECK(to_sig_digits(from_decimal("-9.9996e2"), 4) == "-1.000e3");
}

TEST_CASE("fixed decimals") {
    ScopedPrecision p(64);
    CHECK(to_fixed(from_decimal("1.023016034"), 5) == "1.02302");
    CHECK(to_fixed(from_decimal("1.023016034"), 5, DecimalRounding::TowardZero) == "1.02301");
    CHECK(to_fixed(from_decimal("0.95499"), 4) == "0.9550");
    CHECK(to_fixed(from_decimal("0.95499"), 4, DecimalRounding::TowardZero) == "0.9549");
    CHECK(to_fixed(from_decimal("0.125"), 2) == "0.12");
    CHECK(to_fixed(from_decimal("2"), 3) == "2.000");
}

TEST_CASE("complex arithmetic") {
    ScopedPrecision p(80);
    const Complex a(Real(3), Real(-4));
    CHECK(abs(a) == 5);
    CHECK(norm(a) == 25);
    CHECK(conj(a) == Complex(Real(3), Real(4)));
    const Complex b(Real(1), Real(2));
    CHECK(abs(a * b / b - a) < pow10_neg(75));
    CHECK(abs(sqrt(a) * sqrt(a) - a) < pow10_neg(75));
    CHECK(abs(pow(imag_unit(), 4) - Complex(1)) < pow10_neg(75));
    CHECK(abs(log(polar(Real(2), pi() / 3)) - Complex(boost::multiprecision::log(Real(2)), pi() / 3)) < pow10_neg(75));

    Real scratch[2];
    Complex acc(1);
    fma_into(acc, a, b, scratch);
    CHECK(abs(acc - (Complex(1) + a * b)) < pow10_neg(75));
    Complex acc2;
    fma_conj_into(acc2, a, b, scratch);
    CHECK(abs(acc2 - a * conj(b)) < pow10_neg(75));
}
