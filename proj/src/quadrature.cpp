#include "bergman/quadrature.hpp"

#include "bergman/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace bergman {

namespace {

// P_n(x) and P_n'(x) by the Bonnet recurrence.
template <class T>
void legendre(int n, const T& x, T& p, T& dp) {
    T p0(1), p1(x);
    for (int k = 2; k <= n; ++k) {
        T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1);
}

// Same recurrence in place on mpfr values; the generic version allocates per step.
void legendre(int n, const Real& x, Real& p, Real& dp) {
    Real p0(1), p1(x), t;
    mpfr_ptr a = p0.backend().data();
    mpfr_ptr b = p1.backend().data();
    mpfr_ptr tt = t.backend().data();
    mpfr_srcptr xx = x.backend().data();
    for (int k = 2; k <= n; ++k) {
        // a <- ((2k-1) x b - (k-1) a) / k, then swap roles
        mpfr_mul(tt, xx, b, MPFR_RNDN);
        mpfr_mul_si(tt, tt, 2 * k - 1, MPFR_RNDN);
        mpfr_mul_si(a, a, k - 1, MPFR_RNDN);
        mpfr_sub(a, tt, a, MPFR_RNDN);
        mpfr_div_si(a, a, k, MPFR_RNDN);
        std::swap(a, b);
    }
    // b holds P_n, a holds P_{n-1}
    Real pn, pm;
    mpfr_set(pn.backend().data(), b, MPFR_RNDN);
    mpfr_set(pm.backend().data(), a, MPFR_RNDN);
    p = pn;
    dp = n * (x * pn - pm) / (x * x - 1);
}

GaussLegendreRule build(int n, int digits) {
    ScopedPrecision guard(digits);
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const Real tol = pow10_neg(digits - 2);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Double-precision seed, then quadratic convergence at full precision.
        double xd = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p, dp;
            legendre(n, xd, p, dp);
            const double dx = p / dp;
            xd -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        Real x(xd), p, dp;
        for (int it = 0;; ++it) {
            legendre(n, x, p, dp);
            const Real dx = p / dp;
            x -= dx;
            if (boost::multiprecision::abs(dx) < tol) break;
            if (it > 64) throw ConvergenceError("Gauss-Legendre node iteration stalled");
        }
        legendre(n, x, p, dp);
        const Real w = 2 / ((1 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n, int digits) {
    if (n < 1) throw UsageError("Gauss-Legendre rule needs at least one node");
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, digits}];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(build(n, digits));
    return *slot;
}

}  // namespace bergman
