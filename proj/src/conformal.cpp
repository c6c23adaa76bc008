#include "bergman/conformal.hpp"

#include "bergman/errors.hpp"

#include <mpfr.h>

#include <algorithm>

namespace bergman {

namespace {

Real sqrt2() { return boost::multiprecision::sqrt(Real(2)); }

Complex psi_unchecked(const LaurentSeries& s, const Complex& w) {
    const Complex u = Complex(1) / w;
    Complex acc;
    const auto& neg = s.negative();
    for (auto k = neg.size(); k-- > 0;) {
        acc += neg[k];
        acc *= u;
    }
    return s.psi1() * w + s.psi0() + acc;
}

Complex dpsi_unchecked(const LaurentSeries& s, const Complex& w) {
    const Complex u = Complex(1) / w;
    Complex acc;
    const auto& neg = s.negative();
    for (auto k = neg.size(); k-- > 0;) {
        acc += neg[k] * Real(static_cast<long>(k + 1));
        acc *= u;
    }
    return Complex(s.psi1()) - acc * u;
}

void require_exterior_w(const Complex& w) {
    if (abs(w) <= 1) throw DomainError("psi is only defined for |w| > 1");
}

Complex phi_custom(const LaurentSeries& s, const Complex& z, const NewtonOptions& opts) {
    const Real tol = pow10_neg(s.digits() - 5);
    Complex w = (z - s.psi0()) * s.capacity_inverse();
    for (int it = 0; it < opts.max_iterations; ++it) {
        const Complex residual = psi_unchecked(s, w) - z;
        if (abs(residual) < tol) {
            if (abs(w) <= 1) throw DomainError("point is not in the exterior domain");
            return w;
        }
        const Complex d = dpsi_unchecked(s, w);
        if (abs(d).is_zero()) throw DomainError("psi' vanished during Newton inversion");
        w -= residual / d;
    }
    throw ConvergenceError("Newton inversion of psi did not converge");
}

}  // namespace

LaurentSeries::LaurentSeries(Real psi1, Complex psi0, std::vector<Complex> neg, int digits)
    : psi1_(std::move(psi1)), psi0_(std::move(psi0)), neg_(std::move(neg)), digits_(digits) {
    if (!(psi1_ > 0)) throw UsageError("Laurent series requires psi_1 > 0");
    if (digits_ < 1) throw UsageError("precision must be positive");
}

Complex LaurentSeries::coefficient(int k) const {
    if (k > 1) return Complex();
    if (k == 1) return Complex(psi1_);
    if (k == 0) return psi0_;
    const auto idx = static_cast<std::size_t>(-k - 1);
    return idx < neg_.size() ? neg_[idx] : Complex();
}

bool LaurentSeries::is_real() const {
    return psi0_.is_real() &&
           std::all_of(neg_.begin(), neg_.end(), [](const Complex& c) { return c.is_real(); });
}

LaurentSeries LaurentSeries::resized(int N) const {
    if (N < 0) throw UsageError("truncation order must be nonnegative");
    std::vector<Complex> neg(static_cast<std::size_t>(N));
    for (std::size_t k = 0; k < neg.size() && k < neg_.size(); ++k) neg[k] = neg_[k];
    return LaurentSeries(psi1_, psi0_, std::move(neg), digits_);
}

DomainSpec DomainSpec::disk() { return DomainSpec(); }

DomainSpec DomainSpec::ellipse(const std::string& r) {
    DomainSpec d;
    d.kind_ = DomainKind::Ellipse;
    d.ellipse_r_ = r;
    ScopedPrecision guard(32);
    if (!(from_decimal(r) > 1)) throw UsageError("ellipse requires r > 1");
    return d;
}

DomainSpec DomainSpec::lens() {
    DomainSpec d;
    d.kind_ = DomainKind::Lens;
    return d;
}

DomainSpec DomainSpec::custom(LaurentSeries series) {
    DomainSpec d;
    d.kind_ = DomainKind::Custom;
    d.series_ = std::make_shared<const LaurentSeries>(std::move(series));
    return d;
}

Real DomainSpec::ellipse_r() const {
    if (kind_ != DomainKind::Ellipse) throw UsageError("not an ellipse");
    return from_decimal(ellipse_r_);
}

const LaurentSeries& DomainSpec::custom_series() const {
    if (kind_ != DomainKind::Custom) throw UsageError("not a custom domain");
    return *series_;
}

std::string DomainSpec::tag() const {
    switch (kind_) {
        case DomainKind::Disk: return "disk";
        case DomainKind::Ellipse: return "ellipse:" + ellipse_r_;
        case DomainKind::Lens: return "lens";
        case DomainKind::Custom: return "custom";
    }
    return "unknown";
}

Complex BoundaryArc::point(const Real& theta) const {
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), theta.backend().data(), MPFR_RNDN);
    return center + Complex(radius * c, radius_y * s);
}

Complex BoundaryArc::tangent(const Real& theta) const {
    Real s, c;
    mpfr_sin_cos(s.backend().data(), c.backend().data(), theta.backend().data(), MPFR_RNDN);
    return Complex(-radius * s, radius_y * c);
}

int default_truncation(int n_max) { return 4 * n_max + 64; }

LaurentSeries exterior_map_series(const DomainSpec& domain, int N, int digits) {
    if (N < 0) throw UsageError("truncation order must be nonnegative");
    if (digits < 16) throw UsageError("working precision must be at least 16 digits");
    ScopedPrecision guard(digits);
    std::vector<Complex> neg(static_cast<std::size_t>(N));
    switch (domain.kind()) {
        case DomainKind::Disk:
            return LaurentSeries(Real(1), Complex(), std::move(neg), digits);
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            if (N >= 1) neg[0] = Complex(Real(1) / (2 * r));
            return LaurentSeries(r / 2, Complex(), std::move(neg), digits);
        }
        case DomainKind::Lens: {
            // w + sqrt(w^2 + 1) = 2w + sum_k binom(1/2, k) w^{1-2k}
            Real binom(1);
            for (int k = 1; 2 * k - 1 <= N; ++k) {
                binom *= (Real(1) / 2 - (k - 1));
                binom /= k;
                neg[static_cast<std::size_t>(2 * k - 2)] = Complex(binom);
            }
            return LaurentSeries(Real(2), Complex(), std::move(neg), digits);
        }
        case DomainKind::Custom: {
            const LaurentSeries& src = domain.custom_series();
            std::vector<Complex> out(static_cast<std::size_t>(N));
            for (std::size_t k = 0; k < out.size() && k < src.negative().size(); ++k) {
                out[k] = at_current_precision(src.negative()[k]);
            }
            return LaurentSeries(at_current_precision(src.psi1()), at_current_precision(src.psi0()),
                                 std::move(out), digits);
        }
    }
    throw UsageError("unknown domain");
}

Complex psi_eval(const LaurentSeries& series, const Complex& w) {
    require_exterior_w(w);
    return psi_unchecked(series, w);
}

Complex psi_derivative(const LaurentSeries& series, const Complex& w) {
    require_exterior_w(w);
    return dpsi_unchecked(series, w);
}

Complex phi_eval(const DomainSpec& domain, const Complex& z, NewtonOptions opts) {
    Complex w;
    switch (domain.kind()) {
        case DomainKind::Disk:
            w = z;
            break;
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            const Complex s = sqrt(z * z - Complex(1));
            const Complex a = (z + s) / r;
            const Complex b = (z - s) / r;
            w = abs(a) >= abs(b) ? a : b;
            break;
        }
        case DomainKind::Lens:
            // (z - 1/z)/2 also has modulus > 1 on part of the interior
            if (abs(z - Complex(1)) < sqrt2() || abs(z + Complex(1)) < sqrt2()) {
                throw DomainError("point is not in the exterior domain");
            }
            w = (z - Complex(1) / z) / Real(2);
            break;
        case DomainKind::Custom:
            return phi_custom(domain.custom_series(), z, opts);
    }
    if (abs(w) <= 1) throw DomainError("point is not in the exterior domain");
    return w;
}

Complex phi_derivative(const DomainSpec& domain, const Complex& z, NewtonOptions opts) {
    const Complex w = phi_eval(domain, z, opts);
    switch (domain.kind()) {
        case DomainKind::Disk:
            return Complex(1);
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            const Complex dpsi = (Complex(r) - Complex(1) / (r * w * w)) / Real(2);
            return Complex(1) / dpsi;
        }
        case DomainKind::Lens:
            return (Complex(1) + Complex(1) / (z * z)) / Real(2);
        case DomainKind::Custom: {
            const Complex d = dpsi_unchecked(domain.custom_series(), w);
            if (abs(d).is_zero()) throw DomainError("singular map: psi'(phi(z)) = 0");
            return Complex(1) / d;
        }
    }
    throw UsageError("unknown domain");
}

std::vector<BoundaryArc> boundary_arcs(const DomainSpec& domain) {
    const Real p = pi();
    switch (domain.kind()) {
        case DomainKind::Disk: {
            BoundaryArc a{Complex(), Real(1), Real(1), Real(0), 2 * p, +1, Complex(1), Complex(1)};
            return {a};
        }
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            const Real ax = (r + 1 / r) / 2;
            const Real ay = (r - 1 / r) / 2;
            BoundaryArc a{Complex(), ax, ay, Real(0), 2 * p, +1, Complex(ax), Complex(ax)};
            return {a};
        }
        case DomainKind::Lens: {
            const Real rho = sqrt2();
            const Complex i = imag_unit();
            BoundaryArc right{Complex(1), rho, rho, -3 * p / 4, 3 * p / 4, +1, -i, i};
            BoundaryArc left{Complex(-1), rho, rho, p / 4, 7 * p / 4, +1, i, -i};
            return {right, left};
        }
        case DomainKind::Custom:
            throw UsageError("boundary integration is not supported for custom domains");
    }
    throw UsageError("unknown domain");
}

Real max_modulus(const DomainSpec& domain) {
    switch (domain.kind()) {
        case DomainKind::Disk: return Real(1);
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            return (r + 1 / r) / 2;
        }
        case DomainKind::Lens: return 1 + sqrt2();
        case DomainKind::Custom: break;
    }
    throw UsageError("max modulus is only available for built-in domains");
}

double corner_norm_bound(const DomainSpec& domain) {
    // outer angle pi/2 at +-i
    return domain.kind() == DomainKind::Lens ? 0.5 : 0.0;
}

bool outside_convex_hull(const DomainSpec& domain, const Complex& z) {
    switch (domain.kind()) {
        case DomainKind::Disk: return abs(z) > 1;
        case DomainKind::Ellipse: {
            const Real r = domain.ellipse_r();
            const Real ax = (r + 1 / r) / 2;
            const Real ay = (r - 1 / r) / 2;
            const Real x = z.real() / ax;
            const Real y = z.imag() / ay;
            return x * x + y * y > 1;
        }
        case DomainKind::Lens: {
            // Hull of the two disks: points within sqrt 2 of the segment [-1, 1].
            const Real x = boost::multiprecision::abs(z.real());
            const Real dx = x > 1 ? Real(x - 1) : Real(0);
            return dx * dx + z.imag() * z.imag() > 2;
        }
        case DomainKind::Custom: break;
    }
    throw UsageError("convex hull test requires a built-in domain; supply a safe region");
}

}  // namespace bergman
