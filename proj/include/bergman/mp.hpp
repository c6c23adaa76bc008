#pragma once

// Working-precision scalar types.
//
// Real is an MPFR float whose precision is fixed at construction time from
// the process-wide default; ScopedPrecision sets that default for the
// duration of a computation. Complex is a plain (re, im) pair over Real with
// the handful of operations the library needs.

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace bergman {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// RAII guard for the default decimal precision of newly created Real values.
class ScopedPrecision {
public:
    explicit ScopedPrecision(int digits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned previous_;
};

int current_digits();

/// 10^(-k) at the current precision.
Real pow10_neg(int k);
Real pi();

class Complex {
public:
    Complex() : re_(0), im_(0) {}
    Complex(Real re) : re_(std::move(re)), im_(0) {}  // NOLINT(implicit)
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(double re) : re_(re), im_(0) {}  // NOLINT(implicit)
    Complex(int re) : re_(re), im_(0) {}     // NOLINT(implicit)
    Complex(double re, double im) : re_(re), im_(im) {}

    const Real& real() const { return re_; }
    const Real& imag() const { return im_; }
    Real& real() { return re_; }
    Real& imag() { return im_; }

    Complex& operator+=(const Complex& o);
    Complex& operator-=(const Complex& o);
    Complex& operator*=(const Complex& o);
    Complex& operator/=(const Complex& o);
    Complex& operator*=(const Real& s);
    Complex& operator/=(const Real& s);

    bool is_real() const { return im_ == 0; }

    /// acc += a * b without heap traffic; `scratch` must hold two Reals.
    friend void fma_into(Complex& acc, const Complex& a, const Complex& b, Real* scratch);
    /// acc += a * conj(b).
    friend void fma_conj_into(Complex& acc, const Complex& a, const Complex& b, Real* scratch);

private:
    Real re_;
    Real im_;
};

Complex operator+(Complex a, const Complex& b);
Complex operator-(Complex a, const Complex& b);
Complex operator*(Complex a, const Complex& b);
Complex operator/(Complex a, const Complex& b);
Complex operator*(Complex a, const Real& s);
Complex operator*(const Real& s, Complex a);
Complex operator/(Complex a, const Real& s);
Complex operator-(const Complex& a);
bool operator==(const Complex& a, const Complex& b);

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex sqrt(const Complex& z);  // principal branch
Complex log(const Complex& z);   // principal branch
Complex polar(const Real& r, const Real& theta);
Complex pow(const Complex& z, int n);
Complex imag_unit();

/// Copy of x rounded to the current default precision.
Real at_current_precision(const Real& x);
Complex at_current_precision(const Complex& z);

double to_double(const Real& x);
std::pair<double, double> to_double(const Complex& z);

/// Round-trippable decimal rendering of x at its own precision.
std::string to_decimal(const Real& x);
Real from_decimal(const std::string& s);

enum class DecimalRounding { HalfEven, TowardZero };

/// Significant-digit rendering, e.g. "8.120e-5".
std::string to_sig_digits(const Real& x, int sig, DecimalRounding mode = DecimalRounding::HalfEven);
/// Fixed-decimal rendering, e.g. "1.02301".
std::string to_fixed(const Real& x, int decimals, DecimalRounding mode = DecimalRounding::HalfEven);

}  // namespace bergman
