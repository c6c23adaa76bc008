#include "bergman/faber_grunsky.hpp"

#include "bergman/errors.hpp"

#include <Eigen/Dense>
#include <mpfr.h>

#include <algorithm>

namespace bergman {

namespace {

bool is_zero(const Real& x) { return x.is_zero(); }
bool is_zero(const Complex& z) { return z.real().is_zero() && z.imag().is_zero(); }

void mac(Real& acc, const Real& a, const Real& b, Real* t) {
    mpfr_mul(t[0].backend().data(), a.backend().data(), b.backend().data(), MPFR_RNDN);
    mpfr_add(acc.backend().data(), acc.backend().data(), t[0].backend().data(), MPFR_RNDN);
}
void mac(Complex& acc, const Complex& a, const Complex& b, Real* t) { fma_into(acc, a, b, t); }

template <class T>
T from_complex(const Complex& z);
template <>
Real from_complex<Real>(const Complex& z) { return z.real(); }
template <>
Complex from_complex<Complex>(const Complex& z) { return z; }

// Negative Laurent parts of Phi_n(w) = F_n(psi(w)), n = 1..K:
// tails[n-1][j-1] = [w^{-j}] Phi_n, j = 1 .. L + K - n.
//
// From the Faber generating function,
//   psi_1 Phi_{n+1} = (psi - psi_0) Phi_n - sum_{k=1}^{n} psi_{-k} Phi_{n-k} - n psi_{-n},
// whose negative part only involves O(1) Laurent coefficients.
template <class T>
std::vector<std::vector<T>> faber_tails(const LaurentSeries& s, int K, int L) {
    const int N = s.truncation();
    std::vector<T> psi(static_cast<std::size_t>(N) + 1);  // psi[m] = psi_{-m}
    std::vector<int> nonzero;
    for (int m = 1; m <= N; ++m) {
        psi[static_cast<std::size_t>(m)] = from_complex<T>(s.coefficient(-m));
        if (!is_zero(psi[static_cast<std::size_t>(m)])) nonzero.push_back(m);
    }
    const Real inv_psi1 = Real(1) / s.psi1();
    const T psi1(s.psi1());
    Real scratch[2];

    std::vector<std::vector<T>> tails(static_cast<std::size_t>(K));
    for (int n = 0; n < K; ++n) {
        const int J = L + K - (n + 1);
        std::vector<T> next(static_cast<std::size_t>(J));
        const std::vector<T>* cur = n > 0 ? &tails[static_cast<std::size_t>(n - 1)] : nullptr;
        for (int j = 1; j <= J; ++j) {
            T acc = (n + j <= N) ? psi[static_cast<std::size_t>(n + j)] : T();
            if (cur != nullptr) {
                const auto& c = *cur;
                mac(acc, psi1, c[static_cast<std::size_t>(j)], scratch);
                for (int m : nonzero) {
                    if (m >= j) break;
                    const T& cj = c[static_cast<std::size_t>(j - m - 1)];
                    if (!is_zero(cj)) mac(acc, psi[static_cast<std::size_t>(m)], cj, scratch);
                }
            }
            T sub{};
            for (int m : nonzero) {
                if (m >= n) break;  // Phi_0 has no negative part
                const T& prev = tails[static_cast<std::size_t>(n - m - 1)][static_cast<std::size_t>(j - 1)];
                if (!is_zero(prev)) mac(sub, psi[static_cast<std::size_t>(m)], prev, scratch);
            }
            acc -= sub;
            acc *= inv_psi1;
            next[static_cast<std::size_t>(j - 1)] = std::move(acc);
        }
        tails[static_cast<std::size_t>(n)] = std::move(next);
    }
    return tails;
}

Dense<Complex> scale_to_grunsky(const std::vector<std::vector<Complex>>& tails, int K, int L) {
    Dense<Complex> C(static_cast<std::size_t>(L), static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const Real inv = Real(1) / Real(k + 1);
        for (int l = 0; l < L; ++l) {
            const Complex& c = tails[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
            if (is_zero(c)) continue;
            C(static_cast<std::size_t>(l), static_cast<std::size_t>(k)) =
                c * boost::multiprecision::sqrt(Real(l + 1) * inv);
        }
    }
    return C;
}

Dense<Complex> compute_block(const LaurentSeries& s, int K, int L) {
    if (s.is_real()) {
        auto real_tails = faber_tails<Real>(s, K, L);
        std::vector<std::vector<Complex>> tails(real_tails.size());
        for (std::size_t k = 0; k < real_tails.size(); ++k) {
            tails[k].reserve(real_tails[k].size());
            for (auto& x : real_tails[k]) tails[k].emplace_back(std::move(x));
        }
        return scale_to_grunsky(tails, K, L);
    }
    return scale_to_grunsky(faber_tails<Complex>(s, K, L), K, L);
}

Real block_sum(const Dense<Complex>& C, int k, int from, int to) {
    Real s(0);
    for (int l = from; l < to; ++l) s += norm(C(static_cast<std::size_t>(l), static_cast<std::size_t>(k)));
    return s;
}

Eigen::MatrixXcd to_eigen(const Dense<Complex>& C, int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const auto [re, im] = to_double(C(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            m(i, j) = {re, im};
        }
    }
    return m;
}

}  // namespace

std::vector<Polynomial> faber_polynomials(const LaurentSeries& series, int n_max) {
    if (n_max < 0) throw UsageError("n_max must be nonnegative");
    if (series.truncation() < n_max + 2) {
        throw UsageError("Laurent truncation too short for the requested Faber polynomials");
    }
    ScopedPrecision guard(series.digits());
    const int top = n_max + 1;

    // powers[m][p + (top - m)] = [w^p] psi(w)^m for p in [-(top - m), m].
    std::vector<std::vector<Complex>> powers(static_cast<std::size_t>(top) + 1);
    powers[0].assign(static_cast<std::size_t>(top) + 1, Complex());
    powers[0][static_cast<std::size_t>(top)] = Complex(1);
    Real scratch[2];
    for (int m = 1; m <= top; ++m) {
        const int lo = -(top - m);
        const int prev_lo = -(top - m + 1);
        auto& cur = powers[static_cast<std::size_t>(m)];
        cur.assign(static_cast<std::size_t>(m - lo) + 1, Complex());
        const auto& prev = powers[static_cast<std::size_t>(m - 1)];
        for (int p = lo; p <= m; ++p) {
            Complex acc;
            for (int q = std::max(p - 1, prev_lo); q <= m - 1; ++q) {
                const Complex& a = prev[static_cast<std::size_t>(q - prev_lo)];
                if (is_zero(a)) continue;
                const Complex psi_k = series.coefficient(p - q);
                if (is_zero(psi_k)) continue;
                fma_into(acc, a, psi_k, scratch);
            }
            cur[static_cast<std::size_t>(p - lo)] = std::move(acc);
        }
    }
    auto at = [&](int m, int p) -> const Complex& {
        return powers[static_cast<std::size_t>(m)][static_cast<std::size_t>(p + top - m)];
    };

    std::vector<Polynomial> F;
    F.reserve(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        std::vector<Complex> a(static_cast<std::size_t>(n) + 1);
        a[static_cast<std::size_t>(n)] = Complex(1) / at(n, n);
        for (int p = n - 1; p >= 0; --p) {
            Complex acc;
            for (int m = p + 1; m <= n; ++m) {
                fma_into(acc, a[static_cast<std::size_t>(m)], at(m, p), scratch);
            }
            a[static_cast<std::size_t>(p)] = -acc / at(p, p);
        }
        F.emplace_back(std::move(a));
    }
    return F;
}

std::vector<Polynomial> normalized_faber(const std::vector<Polynomial>& F) {
    if (F.size() < 2) throw UsageError("need at least F_0 and F_1");
    const Real sqrt_pi = boost::multiprecision::sqrt(pi());
    std::vector<Polynomial> f;
    f.reserve(F.size() - 1);
    for (std::size_t n = 0; n + 1 < F.size(); ++n) {
        const Real scale = Real(1) / (sqrt_pi * boost::multiprecision::sqrt(Real(static_cast<long>(n + 1))));
        f.push_back(F[n + 1].derivative().scaled(scale));
    }
    return f;
}

GrunskyMatrix::GrunskyMatrix(Dense<Complex> entries, std::vector<Real> tail_bound,
                             std::vector<Real> tail_estimate, std::vector<bool> converged, int digits)
    : entries_(std::move(entries)),
      tail_bound_(std::move(tail_bound)),
      tail_estimate_(std::move(tail_estimate)),
      converged_(std::move(converged)),
      digits_(digits) {}

std::vector<int> GrunskyMatrix::flagged_columns() const {
    ScopedPrecision guard(digits_);
    const Real limit = pow10_neg(digits_ / 4);
    std::vector<int> out;
    for (int k = 0; k < cols(); ++k) {
        if (tail_estimate(k) > limit) out.push_back(k);
    }
    return out;
}

GrunskyMatrix grunsky_matrix(const LaurentSeries& series, int K, int L, GrunskyOptions opts) {
    if (K <= 0 || L <= 0) throw UsageError("Grunsky section sizes must be positive");
    const int room = series.truncation() - K - 2;
    if (L > room) throw UsageError("Laurent truncation too short for the requested Grunsky section");
    ScopedPrecision guard(series.digits());
    const Real tol = pow10_neg(series.digits() / 2);
    const int cap = std::min(opts.max_rows > 0 ? opts.max_rows : 16 * K, room);

    int rows = L;
    Dense<Complex> C;
    std::vector<Real> last(static_cast<std::size_t>(K)), before(static_cast<std::size_t>(K));
    std::vector<bool> converged(static_cast<std::size_t>(K));
    for (;;) {
        C = compute_block(series, K, rows);
        bool all = true;
        for (int k = 0; k < K; ++k) {
            last[static_cast<std::size_t>(k)] = block_sum(C, k, rows / 2, rows);
            before[static_cast<std::size_t>(k)] = block_sum(C, k, rows / 4, rows / 2);
            converged[static_cast<std::size_t>(k)] = last[static_cast<std::size_t>(k)] < tol;
            all = all && converged[static_cast<std::size_t>(k)];
        }
        if (!opts.refine || all || 2 * rows > cap) break;
        rows *= 2;
    }

    std::vector<Real> bound(static_cast<std::size_t>(K)), estimate(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        Real b = 1 - block_sum(C, k, 0, rows);
        if (b < 0) b = 0;
        // Dyadic blocks of a power-law or geometric tail shrink by a fixed ratio q;
        // the remaining mass is then last * q / (1 - q).
        Real est = b;
        if (last[ku].is_zero()) {
            est = 0;
        } else if (before[ku] > 0) {
            const Real q = last[ku] / before[ku];
            if (q < Real(0.9)) est = last[ku] * q / (1 - q);
        }
        if (est > b) est = b;
        bound[ku] = std::move(b);
        estimate[ku] = std::move(est);
    }
    return GrunskyMatrix(std::move(C), std::move(bound), std::move(estimate), std::move(converged),
                         series.digits());
}

Epsilon epsilon(const GrunskyMatrix& C, int n) {
    if (n < 0 || n >= C.cols()) throw UsageError("epsilon: column index out of range");
    ScopedPrecision guard(C.digits());
    Real partial = block_sum(C.entries(), n, 0, C.rows());
    return Epsilon{std::move(partial), C.tail_estimate(n), C.tail_bound(n)};
}

Real grunsky_inequality_margin(const GrunskyMatrix& C, const std::vector<Complex>& y) {
    if (static_cast<int>(y.size()) > C.cols()) throw UsageError("vector longer than the Grunsky section");
    ScopedPrecision guard(C.digits());
    Real lhs(0);
    for (const auto& v : y) lhs += norm(v);
    Real scratch[2];
    Real rhs(0);
    for (int l = 0; l < C.rows(); ++l) {
        Complex acc;
        for (std::size_t k = 0; k < y.size(); ++k) fma_into(acc, C(l, static_cast<int>(k)), y[k], scratch);
        rhs += norm(acc);
    }
    return lhs - rhs;
}

Complex faber_residual(const GrunskyMatrix& C, int n, const Complex& w) {
    if (n < 0 || n >= C.cols()) throw UsageError("faber_residual: column index out of range");
    if (abs(w) <= 1) throw DomainError("faber residual requires |w| > 1");
    ScopedPrecision guard(C.digits());
    const Complex u = Complex(1) / w;
    // Horner in u over sqrt(l+1) C_{l,n} u^{l}, then multiply by u^2 / sqrt(pi).
    Complex acc;
    for (int l = C.rows(); l-- > 0;) {
        acc *= u;
        acc += C(l, n) * boost::multiprecision::sqrt(Real(l + 1));
    }
    return -(acc * u * u) / boost::multiprecision::sqrt(pi());
}

Complex faber_residual_direct(const LaurentSeries& series, const Polynomial& f_n, int n,
                              const Complex& w) {
    ScopedPrecision guard(series.digits());
    const Complex z = psi_eval(series, w);
    const Complex dz = psi_derivative(series, w);
    return dz * f_n(z) - pow(w, n) * boost::multiprecision::sqrt(Real(n + 1) / pi());
}

Complex grunsky_generating_sum(const GrunskyMatrix& C, const Complex& w, const Complex& v) {
    ScopedPrecision guard(C.digits());
    const Complex uw = Complex(1) / w;
    const Complex uv = Complex(1) / v;
    Complex total;
    Complex vpow = uv;
    for (int k = 0; k < C.cols(); ++k) {
        Complex inner;
        for (int l = C.rows(); l-- > 0;) {
            inner *= uw;
            inner += C(l, k) / boost::multiprecision::sqrt(Real(l + 1));
        }
        inner *= uw;
        total += inner * vpow / boost::multiprecision::sqrt(Real(k + 1));
        vpow *= uv;
    }
    return -total;
}

std::vector<double> section_norms(const GrunskyMatrix& C) {
    const int m = std::min(C.rows(), C.cols());
    const Eigen::MatrixXcd full = to_eigen(C.entries(), m, m);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(full.topLeftCorner(k, k));
        out.push_back(svd.singularValues()(0));
    }
    return out;
}

double column_block_norm(const GrunskyMatrix& C) {
    const Eigen::MatrixXcd block = to_eigen(C.entries(), C.rows(), C.cols());
    const Eigen::MatrixXcd gram = block.adjoint() * block;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace bergman
