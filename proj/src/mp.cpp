#include "bergman/mp.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace bergman {

namespace {

mpfr_ptr raw(Real& x) { return x.backend().data(); }
mpfr_srcptr raw(const Real& x) { return x.backend().data(); }

// Decimal digit string plus exponent such that x = 0.d1d2... * 10^exp.
mpfr_rnd_t rounding(DecimalRounding mode) {
    return mode == DecimalRounding::TowardZero ? MPFR_RNDZ : MPFR_RNDN;
}

std::pair<std::string, long> decimal_digits(const Real& x, std::size_t n, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_exp_t exp = 0;
    char* s = mpfr_get_str(nullptr, &exp, 10, n, raw(x), rnd);
    if (s == nullptr) throw std::runtime_error("mpfr_get_str failed");
    std::string digits(s);
    mpfr_free_str(s);
    return {digits, static_cast<long>(exp)};
}

}  // namespace

ScopedPrecision::ScopedPrecision(int digits) : previous_(Real::default_precision()) {
    if (digits < 1) throw std::invalid_argument("precision must be positive");
    Real::default_precision(static_cast<unsigned>(digits));
}

ScopedPrecision::~ScopedPrecision() { Real::default_precision(previous_); }

int current_digits() { return static_cast<int>(Real::default_precision()); }

Real pow10_neg(int k) {
    Real r(10);
    mpfr_pow_si(raw(r), raw(r), -k, MPFR_RNDN);
    return r;
}

Real pi() {
    Real r;
    mpfr_const_pi(raw(r), MPFR_RNDN);
    return r;
}

Complex& Complex::operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Complex& Complex::operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Complex& Complex::operator*=(const Complex& o) {
    Real re = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    return *this;
}

Complex& Complex::operator/=(const Complex& o) {
    const Real d = o.re_ * o.re_ + o.im_ * o.im_;
    if (d == 0) throw std::domain_error("complex division by zero");
    Real re = (re_ * o.re_ + im_ * o.im_) / d;
    im_ = (im_ * o.re_ - re_ * o.im_) / d;
    re_ = std::move(re);
    return *this;
}

Complex& Complex::operator*=(const Real& s) {
    re_ *= s;
    im_ *= s;
    return *this;
}

Complex& Complex::operator/=(const Real& s) {
    re_ /= s;
    im_ /= s;
    return *this;
}

void fma_into(Complex& acc, const Complex& a, const Complex& b, Real* t) {
    mpfr_mul(raw(t[0]), raw(a.re_), raw(b.re_), MPFR_RNDN);
    mpfr_add(raw(acc.re_), raw(acc.re_), raw(t[0]), MPFR_RNDN);
    if (!a.im_.is_zero() && !b.im_.is_zero()) {
        mpfr_mul(raw(t[0]), raw(a.im_), raw(b.im_), MPFR_RNDN);
        mpfr_sub(raw(acc.re_), raw(acc.re_), raw(t[0]), MPFR_RNDN);
    }
    if (!b.im_.is_zero()) {
        mpfr_mul(raw(t[1]), raw(a.re_), raw(b.im_), MPFR_RNDN);
        mpfr_add(raw(acc.im_), raw(acc.im_), raw(t[1]), MPFR_RNDN);
    }
    if (!a.im_.is_zero()) {
        mpfr_mul(raw(t[1]), raw(a.im_), raw(b.re_), MPFR_RNDN);
        mpfr_add(raw(acc.im_), raw(acc.im_), raw(t[1]), MPFR_RNDN);
    }
}

void fma_conj_into(Complex& acc, const Complex& a, const Complex& b, Real* t) {
    // (ar + i ai)(br - i bi) = ar br + ai bi + i (ai br - ar bi)
    mpfr_mul(raw(t[0]), raw(a.re_), raw(b.re_), MPFR_RNDN);
    mpfr_add(raw(acc.re_), raw(acc.re_), raw(t[0]), MPFR_RNDN);
    if (!a.im_.is_zero() && !b.im_.is_zero()) {
        mpfr_mul(raw(t[0]), raw(a.im_), raw(b.im_), MPFR_RNDN);
        mpfr_add(raw(acc.re_), raw(acc.re_), raw(t[0]), MPFR_RNDN);
    }
    if (!a.im_.is_zero()) {
        mpfr_mul(raw(t[1]), raw(a.im_), raw(b.re_), MPFR_RNDN);
        mpfr_add(raw(acc.im_), raw(acc.im_), raw(t[1]), MPFR_RNDN);
    }
    if (!b.im_.is_zero()) {
        mpfr_mul(raw(t[1]), raw(a.re_), raw(b.im_), MPFR_RNDN);
        mpfr_sub(raw(acc.im_), raw(acc.im_), raw(t[1]), MPFR_RNDN);
    }
}

Complex operator+(Complex a, const Complex& b) { return a += b; }
Complex operator-(Complex a, const Complex& b) { return a -= b; }
Complex operator*(Complex a, const Complex& b) { return a *= b; }
Complex operator/(Complex a, const Complex& b) { return a /= b; }
Complex operator*(Complex a, const Real& s) { return a *= s; }
Complex operator*(const Real& s, Complex a) { return a *= s; }
Complex operator/(Complex a, const Real& s) { return a /= s; }
Complex operator-(const Complex& a) { return Complex(-a.real(), -a.imag()); }
bool operator==(const Complex& a, const Complex& b) {
    return a.real() == b.real() && a.imag() == b.imag();
}

Complex conj(const Complex& z) { return Complex(z.real(), -z.imag()); }
Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

Real abs(const Complex& z) {
    Real r;
    mpfr_hypot(raw(r), raw(z.real()), raw(z.imag()), MPFR_RNDN);
    return r;
}

Real arg(const Complex& z) {
    Real r;
    mpfr_atan2(raw(r), raw(z.imag()), raw(z.real()), MPFR_RNDN);
    return r;
}

Complex sqrt(const Complex& z) {
    if (z.real().is_zero() && z.imag().is_zero()) return Complex();
    // Stable half-angle form: t = sqrt((|z| + |re|) / 2).
    const Real m = abs(z);
    const Real t = boost::multiprecision::sqrt((m + boost::multiprecision::abs(z.real())) / 2);
    if (z.real() >= 0) return Complex(t, z.imag() / (2 * t));
    const Real im = z.imag() < 0 ? Real(-t) : t;
    return Complex(boost::multiprecision::abs(z.imag()) / (2 * t), im);
}

Complex log(const Complex& z) {
    if (z.real().is_zero() && z.imag().is_zero()) throw std::domain_error("log of zero");
    return Complex(boost::multiprecision::log(abs(z)), arg(z));
}

Complex polar(const Real& r, const Real& theta) {
    Real s, c;
    mpfr_sin_cos(raw(s), raw(c), raw(theta), MPFR_RNDN);
    return Complex(r * c, r * s);
}

Complex pow(const Complex& z, int n) {
    if (n < 0) return Complex(1) / pow(z, -n);
    Complex result(1);
    Complex base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n > 0) base *= base;
    }
    return result;
}

Complex imag_unit() { return Complex(Real(0), Real(1)); }

Real at_current_precision(const Real& x) {
    Real r;
    mpfr_set(raw(r), raw(x), MPFR_RNDN);
    return r;
}

Complex at_current_precision(const Complex& z) {
    return Complex(at_current_precision(z.real()), at_current_precision(z.imag()));
}

double to_double(const Real& x) { return mpfr_get_d(raw(x), MPFR_RNDN); }

std::pair<double, double> to_double(const Complex& z) {
    return {to_double(z.real()), to_double(z.imag())};
}

std::string to_decimal(const Real& x) {
    if (x.is_zero()) return "0";
    if (!boost::multiprecision::isfinite(x)) throw std::domain_error("non-finite value");
    auto [digits, exp] = decimal_digits(x, 0);
    std::string out;
    std::size_t i = 0;
    if (digits[0] == '-') {
        out.push_back('-');
        i = 1;
    }
    out.push_back(digits[i]);
    out.push_back('.');
    out.append(digits, i + 1, std::string::npos);
    out.append("e");
    out.append(std::to_string(exp - 1));
    return out;
}

Real from_decimal(const std::string& s) {
    Real r;
    if (mpfr_set_str(raw(r), s.c_str(), 10, MPFR_RNDN) != 0) {
        throw std::invalid_argument("malformed decimal string: " + s);
    }
    return r;
}

std::string to_sig_digits(const Real& x, int sig, DecimalRounding mode) {
    if (sig < 1) throw std::invalid_argument("need at least one significant digit");
    if (x.is_zero()) return "0";
    auto [digits, exp] = decimal_digits(x, static_cast<std::size_t>(sig), rounding(mode));
    std::string out;
    std::size_t i = 0;
    if (digits[0] == '-') {
        out.push_back('-');
        i = 1;
    }
    out.push_back(digits[i]);
    if (sig > 1) {
        out.push_back('.');
        out.append(digits, i + 1, std::string::npos);
    }
    out.append("e");
    out.append(std::to_string(exp - 1));
    return out;
}

std::string to_fixed(const Real& x, int decimals, DecimalRounding mode) {
    if (decimals < 0) throw std::invalid_argument("negative decimal count");
    Real scaled = x;
    Real ten(10);
    mpfr_pow_si(raw(ten), raw(ten), decimals, MPFR_RNDN);
    scaled *= ten;
    mpfr_rint(raw(scaled), raw(scaled), rounding(mode));  // RNDN breaks ties to even
    mpz_t z;
    mpz_init(z);
    mpfr_get_z(z, raw(scaled), MPFR_RNDN);
    const bool negative = mpz_sgn(z) < 0;
    mpz_abs(z, z);
    char* s = mpz_get_str(nullptr, 10, z);
    std::string digits(s);
    void (*freefunc)(void*, std::size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, digits.size() + 1);
    mpz_clear(z);
    if (static_cast<int>(digits.size()) <= decimals) {
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    std::string out = negative ? "-" : "";
    out += digits.substr(0, digits.size() - static_cast<std::size_t>(decimals));
    if (decimals > 0) {
        out.push_back('.');
        out += digits.substr(digits.size() - static_cast<std::size_t>(decimals));
    }
    return out;
}

}  // namespace bergman
