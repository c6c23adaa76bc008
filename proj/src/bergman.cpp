#include "bergman/bergman.hpp"

#include "bergman/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace bergman {

namespace {

using std::size_t;

// u_k = sum_{j < len} v_j mu_{j,k} for k < width, so that <v, c> = sum_k u_k conj(c_k).
std::vector<Complex> row_times_moments(const std::vector<Complex>& v, size_t len, const MomentMatrix& M,
                                       size_t width) {
    std::vector<Complex> u(width);
    Real scratch[2];
    for (size_t j = 0; j < len; ++j) {
        if (v[j].real().is_zero() && v[j].imag().is_zero()) continue;
        for (size_t k = 0; k < width; ++k) {
            fma_into(u[k], v[j], M(static_cast<int>(j), static_cast<int>(k)), scratch);
        }
    }
    return u;
}

Complex dot_conj(const std::vector<Complex>& u, const Dense<Complex>& P, size_t col, size_t len) {
    Complex acc;
    Real scratch[2];
    for (size_t k = 0; k < len; ++k) fma_conj_into(acc, u[k], P(k, col), scratch);
    return acc;
}

std::vector<Complex> padded(const Polynomial& p, size_t len) {
    std::vector<Complex> v(len);
    for (size_t k = 0; k < p.coeffs().size() && k < len; ++k) v[k] = p[k];
    for (size_t k = len; k < p.coeffs().size(); ++k) {
        if (!(p[k] == Complex())) throw UsageError("polynomial degree exceeds the moment table");
    }
    return v;
}

}  // namespace

BergmanBasis::BergmanBasis(Dense<Complex> coeffs, int digits) : coeffs_(std::move(coeffs)), digits_(digits) {
    ScopedPrecision guard(digits_);
    for (size_t n = 0; n < coeffs_.cols(); ++n) lambdas_.push_back(coeffs_(n, n).real());
}

Polynomial BergmanBasis::p(int n) const {
    std::vector<Complex> c(static_cast<size_t>(n) + 1);
    for (size_t k = 0; k < c.size(); ++k) c[k] = coeffs_(k, static_cast<size_t>(n));
    return Polynomial(std::move(c));
}

Complex BergmanBasis::operator()(int n, const Complex& z) const {
    ScopedPrecision guard(digits_);
    Complex acc;
    for (int k = n; k >= 0; --k) {
        acc *= z;
        acc += coeffs_(static_cast<size_t>(k), static_cast<size_t>(n));
    }
    return acc;
}

Real HessenbergMatrix::fill_below_subdiagonal() const {
    Real worst(0);
    for (int n = 0; n < cols(); ++n)
        for (int j = n + 2; j < rows(); ++j) worst = std::max(worst, abs((*this)(j, n)));
    return worst;
}

double HessenbergMatrix::norm_estimate() const {
    Eigen::MatrixXcd m(rows(), cols());
    for (int j = 0; j < rows(); ++j) {
        for (int n = 0; n < cols(); ++n) {
            const auto [re, im] = to_double((*this)(j, n));
            m(j, n) = {re, im};
        }
    }
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

ArnoldiResult arnoldi(const MomentMatrix& M, int n_max) {
    if (n_max < 0 || n_max > M.n_max()) throw UsageError("Arnoldi order exceeds the moment table");
    const int digits = M.digits();
    ScopedPrecision guard(digits);
    const auto sz = static_cast<size_t>(n_max) + 1;
    const Real floor = pow10_neg(digits);  // squared norm threshold, i.e. norm 10^(-digits/2)

    Dense<Complex> P(sz, sz);
    Dense<Complex> H(sz, sz > 1 ? sz - 1 : 0);
    if (!(M.area() > floor)) throw PrecisionExhausted("vanishing area moment", 0);
    P(0, 0) = Complex(1 / boost::multiprecision::sqrt(M.area()));

    for (size_t n = 0; n + 1 < sz; ++n) {
        const size_t len = n + 2;
        std::vector<Complex> v(len);
        for (size_t k = 0; k <= n; ++k) v[k + 1] = P(k, n);
        for (int pass = 0; pass < 2; ++pass) {
            const auto u = row_times_moments(v, len, M, len);
            std::vector<Complex> h(n + 1);
            for (size_t j = 0; j <= n; ++j) h[j] = dot_conj(u, P, j, j + 1);
            Real scratch[2];
            for (size_t j = 0; j <= n; ++j) {
                H(j, n) += h[j];
                const Complex minus_h = -h[j];
                for (size_t k = 0; k <= j; ++k) fma_into(v[k], minus_h, P(k, j), scratch);
            }
        }
        const auto u = row_times_moments(v, len, M, len);
        Complex nn;
        Real scratch[2];
        for (size_t k = 0; k < len; ++k) fma_conj_into(nn, u[k], v[k], scratch);
        if (!(nn.real() > floor)) {
            throw PrecisionExhausted("Arnoldi normalization constant below 10^(-digits/2)", static_cast<int>(n + 1));
        }
        const Real h = boost::multiprecision::sqrt(nn.real());
        H(n + 1, n) = Complex(h);
        for (size_t k = 0; k < len; ++k) P(k, n + 1) = v[k] / h;
        P(n + 1, n + 1).imag() = 0;
    }
    return {BergmanBasis(std::move(P), digits), HessenbergMatrix(std::move(H))};
}

Real orthonormality_defect(const BergmanBasis& basis, const MomentMatrix& M) {
    ScopedPrecision guard(basis.digits());
    const auto sz = static_cast<size_t>(basis.n_max()) + 1;
    Real worst(0);
    for (size_t a = 0; a < sz; ++a) {
        std::vector<Complex> v(a + 1);
        for (size_t k = 0; k <= a; ++k) v[k] = basis.coeffs()(k, a);
        const auto u = row_times_moments(v, a + 1, M, sz);
        for (size_t b = 0; b <= a; ++b) {
            Complex g = dot_conj(u, basis.coeffs(), b, b + 1);
            if (a == b) g -= Complex(1);
            worst = std::max(worst, abs(g));
        }
    }
    return worst;
}

BasisChangeMatrix r_matrix(const BergmanBasis& basis, const std::vector<Polynomial>& f, const MomentMatrix& M) {
    const auto sz = static_cast<size_t>(basis.n_max()) + 1;
    if (f.size() < sz) throw UsageError("not enough normalized Faber polynomials");
    ScopedPrecision guard(basis.digits());
    BasisChangeMatrix out{Dense<Complex>(sz, sz), Dense<Complex>(sz, sz)};
    for (size_t n = 0; n < sz; ++n) {
        const auto v = padded(f[n], n + 1);
        const auto u = row_times_moments(v, n + 1, M, n + 1);
        for (size_t j = 0; j <= n; ++j) out.R(j, n) = dot_conj(u, basis.coeffs(), j, j + 1);
        if (!(out.R(n, n).real() > 0)) {
            throw PrecisionExhausted("non-positive diagonal entry of R", static_cast<int>(n));
        }
    }
    Real scratch[2];
    for (size_t n = 0; n < sz; ++n) {
        out.R_inv(n, n) = Complex(1) / out.R(n, n);
        for (size_t j = n; j-- > 0;) {
            Complex acc;
            for (size_t m = j + 1; m <= n; ++m) fma_into(acc, out.R(j, m), out.R_inv(m, n), scratch);
            out.R_inv(j, n) = -acc / out.R(j, j);
        }
    }
    return out;
}

Dense<Complex> gram_faber(const std::vector<Polynomial>& f, const MomentMatrix& M, int order) {
    if (order < 0 || static_cast<size_t>(order) > f.size() || order > M.n_max() + 1) {
        throw UsageError("gram order out of range");
    }
    ScopedPrecision guard(M.digits());
    const auto sz = static_cast<size_t>(order);
    const auto width = static_cast<size_t>(M.n_max()) + 1;
    Dense<Complex> g(sz, sz);
    std::vector<std::vector<Complex>> coeffs;
    for (size_t n = 0; n < sz; ++n) coeffs.push_back(padded(f[n], width));
    for (size_t n = 0; n < sz; ++n) {
        const auto u = row_times_moments(coeffs[n], width, M, width);
        for (size_t k = 0; k < sz; ++k) {
            Complex acc;
            Real scratch[2];
            for (size_t i = 0; i < width; ++i) fma_conj_into(acc, u[i], coeffs[k][i], scratch);
            g(k, n) = acc;
        }
    }
    return g;
}

Dense<Complex> identity_minus_ctc(const GrunskyMatrix& C, int order) {
    if (order < 0 || order > C.cols()) throw UsageError("order exceeds the Grunsky section");
    ScopedPrecision guard(C.digits());
    const auto sz = static_cast<size_t>(order);
    Dense<Complex> g(sz, sz);
    Real scratch[2];
    for (size_t k = 0; k < sz; ++k) {
        for (size_t n = 0; n < sz; ++n) {
            Complex acc;
            for (int l = 0; l < C.rows(); ++l) {
                fma_conj_into(acc, C(l, static_cast<int>(n)), C(l, static_cast<int>(k)), scratch);
            }
            g(k, n) = (k == n ? Complex(1) : Complex()) - acc;
        }
    }
    return g;
}

Real cholesky_check(const Dense<Complex>& gram, const BasisChangeMatrix& R) {
    const auto sz = std::min(gram.rows(), static_cast<size_t>(R.order()));
    Real worst(0);
    Real scratch[2];
    for (size_t k = 0; k < sz; ++k) {
        for (size_t n = 0; n < sz; ++n) {
            Complex acc;
            for (size_t j = 0; j <= std::min(k, n); ++j) fma_conj_into(acc, R.R(j, n), R.R(j, k), scratch);
            worst = std::max(worst, abs(gram(k, n) - acc));
        }
    }
    return worst;
}

HessenbergMatrix faber_shift(const LaurentSeries& series, int n_max) {
    if (n_max < 1) throw UsageError("n_max must be at least 1");
    if (series.truncation() < n_max) throw UsageError("Laurent truncation too short for the Faber shift");
    ScopedPrecision guard(series.digits());
    const auto sz = static_cast<size_t>(n_max) + 1;
    Dense<Complex> G(sz, sz - 1);
    for (size_t n = 0; n + 1 < sz; ++n) {
        for (size_t j = 0; j <= n + 1; ++j) {
            const Complex psi = series.coefficient(static_cast<int>(j) - static_cast<int>(n));
            if (psi == Complex()) continue;
            G(j, n) = psi * boost::multiprecision::sqrt(Real(static_cast<long>(n + 1)) / Real(static_cast<long>(j + 1)));
        }
    }
    return HessenbergMatrix(std::move(G));
}

Real intertwining_residual(const BasisChangeMatrix& R, const HessenbergMatrix& G, const HessenbergMatrix& H) {
    const int rows = std::min({R.order(), G.rows(), H.rows()});
    const int cols = std::min({rows - 1, G.cols(), H.cols()});
    Real worst(0);
    Real scratch[2];
    for (int n = 0; n < cols; ++n) {
        for (int j = 0; j < rows; ++j) {
            Complex rg, hr;
            for (int m = j; m <= n + 1; ++m) {
                fma_into(rg, R.R(static_cast<size_t>(j), static_cast<size_t>(m)), G(m, n), scratch);
            }
            for (int m = std::max(0, j - 1); m <= n; ++m) {
                fma_into(hr, H(j, m), R.R(static_cast<size_t>(m), static_cast<size_t>(n)), scratch);
            }
            worst = std::max(worst, abs(rg - hr));
        }
    }
    return worst;
}

Theorem24Report theorem24_check(const BasisChangeMatrix& R, const std::vector<Real>& eps, double c_norm,
                                const Real& budget) {
    if (!(c_norm < 1)) throw UsageError("section norm of C is not below 1");
    const auto sz = static_cast<size_t>(R.order());
    if (eps.size() < sz) throw UsageError("need eps_n for every column of R");
    const Real c2 = Real(c_norm) * Real(c_norm);
    const Real denom = 1 - c2;

    Theorem24Report rep{c_norm, Real(1), Real(1), Real(1), {}, {}};
    for (size_t n = 0; n < sz; ++n) {
        for (size_t j = 0; j <= n; ++j) {
            const Complex delta = j == n ? Complex(1) : Complex();
            const Real lhs = std::max(abs(R.R(j, n) - delta), abs(R.R_inv(j, n) - delta));
            const Real bound = boost::multiprecision::sqrt(eps[j] * eps[n]) / denom;
            const Real slack = bound - lhs;
            rep.worst_entry_slack = std::min(rep.worst_entry_slack, slack);
            if (slack < -budget) rep.entry_violations.emplace_back(static_cast<int>(j), static_cast<int>(n));
        }
    }
    for (size_t j = 0; j < sz; ++j) {
        const Real rjj = R.R(j, j).real();
        Real upper(0), lower(0);  // row j of R^{-1} right of the diagonal, of R^* left of it
        for (size_t n = j + 1; n < sz; ++n) upper += norm(R.R_inv(j, n));
        for (size_t n = 0; n < j; ++n) lower += norm(R.R(n, j));
        const Real inv_minus = 1 / rjj - rjj;
        const Real full = boost::multiprecision::sqrt(upper + lower + inv_minus * inv_minus);
        const Real i_minus_rstar = boost::multiprecision::sqrt(lower + (1 - rjj) * (1 - rjj));
        const Real rinv_minus_i = boost::multiprecision::sqrt(upper + (1 / rjj - 1) * (1 / rjj - 1));
        const Real bound = boost::multiprecision::sqrt(eps[j] * c2 / denom);
        const Real slack = bound - full;
        rep.worst_row_slack = std::min(rep.worst_row_slack, slack);
        rep.worst_chain_slack = std::min(rep.worst_chain_slack, full - std::max(i_minus_rstar, rinv_minus_i));
        if (slack < -budget || full - std::max(i_minus_rstar, rinv_minus_i) < -budget) {
            rep.row_violations.push_back(static_cast<int>(j));
        }
    }
    return rep;
}

Real theorem2_residual(const HessenbergMatrix& H, const LaurentSeries& series, int n, int k) {
    if (k < -1 || k > n || n >= H.cols() || n - k >= H.rows()) throw UsageError("Hessenberg index out of range");
    ScopedPrecision guard(series.digits());
    const Complex target =
        series.coefficient(-k) * boost::multiprecision::sqrt(Real(n + 1) / Real(n - k + 1));
    return abs(H(n - k, n) - target);
}

Real leading_coefficient_defect(const BergmanBasis& basis, const LaurentSeries& series, int n) {
    if (n < 0 || n > basis.n_max()) throw UsageError("index out of range");
    ScopedPrecision guard(basis.digits());
    const Real gamma = series.capacity_inverse();
    const Real lam = basis.lambda(n);
    return 1 - Real(n + 1) * boost::multiprecision::pow(gamma, 2 * n + 2) / (pi() * lam * lam);
}

Real faber_bergman_distance_residual(const BergmanBasis& basis, const std::vector<Polynomial>& f,
                                     const BasisChangeMatrix& R, const MomentMatrix& M) {
    ScopedPrecision guard(basis.digits());
    const auto sz = static_cast<size_t>(std::min(basis.n_max() + 1, R.order()));
    Real worst(0);
    for (size_t n = 0; n < sz; ++n) {
        auto d = padded(f[n], n + 1);
        for (size_t k = 0; k <= n; ++k) d[k] -= basis.coeffs()(k, n);
        const auto u = row_times_moments(d, n + 1, M, n + 1);
        Complex lhs;
        Real scratch[2];
        for (size_t k = 0; k <= n; ++k) fma_conj_into(lhs, u[k], d[k], scratch);
        Real rhs = norm(Complex(1) - R.R(n, n));
        for (size_t j = 0; j < n; ++j) rhs += norm(R.R(j, n));
        worst = std::max(worst, boost::multiprecision::abs(lhs.real() - rhs));
    }
    return worst;
}

}  // namespace bergman
