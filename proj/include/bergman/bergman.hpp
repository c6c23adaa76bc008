#pragma once

// Bergman polynomials by Arnoldi on the moment table, plus the matrices
// linking them to the normalized Faber polynomials:
//
//   z p_n = sum_{j <= n+1} H_{j,n} p_j,      f_n = sum_{j <= n} R_{j,n} p_j,
//   z f_n = sum_{j <= n+1} G_{j,n} f_j,      R G = H R.

#include "bergman/conformal.hpp"
#include "bergman/dense.hpp"
#include "bergman/faber_grunsky.hpp"
#include "bergman/moments.hpp"
#include "bergman/polynomial.hpp"

#include <vector>

namespace bergman {

class BergmanBasis {
public:
    BergmanBasis() = default;
    /// coeffs(k, n) is the z^k coefficient of p_n (zero for k > n).
    BergmanBasis(Dense<Complex> coeffs, int digits);

    int n_max() const { return static_cast<int>(coeffs_.cols()) - 1; }
    int digits() const { return digits_; }
    const Dense<Complex>& coeffs() const { return coeffs_; }
    /// lambda_n, the real positive leading coefficient.
    const Real& lambda(int n) const { return lambdas_[static_cast<std::size_t>(n)]; }
    Polynomial p(int n) const;
    /// p_n(z) by Horner.
    Complex operator()(int n, const Complex& z) const;

private:
    Dense<Complex> coeffs_;
    std::vector<Real> lambdas_;
    int digits_ = 0;
};

/// Upper Hessenberg table with rows 0..n_max and columns 0..n_max-1.
class HessenbergMatrix {
public:
    HessenbergMatrix() = default;
    explicit HessenbergMatrix(Dense<Complex> entries) : entries_(std::move(entries)) {}

    int rows() const { return static_cast<int>(entries_.rows()); }
    int cols() const { return static_cast<int>(entries_.cols()); }
    const Complex& operator()(int j, int n) const {
        return entries_(static_cast<std::size_t>(j), static_cast<std::size_t>(n));
    }
    const Dense<Complex>& entries() const { return entries_; }
    /// Largest |entry| below the first subdiagonal; zero by construction.
    Real fill_below_subdiagonal() const;
    /// Largest singular value of the stored table.
    double norm_estimate() const;

private:
    Dense<Complex> entries_;
};

struct ArnoldiResult {
    BergmanBasis basis;
    HessenbergMatrix H;
};

/// Orthonormalizes z p_n against p_0..p_n with one reorthogonalization pass.
/// Throws PrecisionExhausted when a normalization constant drops below 10^(-digits/2).
ArnoldiResult arnoldi(const MomentMatrix& M, int n_max);

/// max_{j,k} |<p_j, p_k> - delta_{jk}|.
Real orthonormality_defect(const BergmanBasis& basis, const MomentMatrix& M);

struct BasisChangeMatrix {
    Dense<Complex> R;      // R(j, n) = <f_n, p_j>, upper triangular
    Dense<Complex> R_inv;  // back-substitution inverse
    int order() const { return static_cast<int>(R.rows()); }
};

/// f must hold at least basis.n_max() + 1 polynomials.
BasisChangeMatrix r_matrix(const BergmanBasis& basis, const std::vector<Polynomial>& f,
                           const MomentMatrix& M);

/// gram(k, n) = <f_n, f_k> for n, k < order.
Dense<Complex> gram_faber(const std::vector<Polynomial>& f, const MomentMatrix& M, int order);

/// (I - C*C)(k, n) over the stored rows, leading order x order block.
Dense<Complex> identity_minus_ctc(const GrunskyMatrix& C, int order);

/// max |gram(k,n) - (R*R)(k,n)| over the common leading block.
Real cholesky_check(const Dense<Complex>& gram, const BasisChangeMatrix& R);

/// G(j, n) = sqrt((n+1)/(j+1)) psi_{j-n}, rows 0..n_max, columns 0..n_max-1.
HessenbergMatrix faber_shift(const LaurentSeries& series, int n_max);

/// max |(R G - H R)(j, n)| over j <= n_max, n < n_max.
Real intertwining_residual(const BasisChangeMatrix& R, const HessenbergMatrix& G,
                           const HessenbergMatrix& H);

/// Inputs and slack for the entrywise and rowwise bounds on R - I and R^{-1} - I.
struct Theorem24Report {
    double c_norm;           // section-norm substitute for ||C||
    Real worst_entry_slack;  // min over j <= n of bound - lhs (negative = violation)
    Real worst_row_slack;    // min over rows of bound - ||e_j^*(R^{-1} - R^*)||
    Real worst_chain_slack;  // min of ||row(R^{-1}-R^*)|| - max(||row(I-R^*)||, ||row(R^{-1}-I)||)
    std::vector<std::pair<int, int>> entry_violations;
    std::vector<int> row_violations;
};

/// eps[n] for n < order; violations are counted only beyond `budget`.
/// Throws UsageError when c_norm >= 1.
Theorem24Report theorem24_check(const BasisChangeMatrix& R, const std::vector<Real>& eps, double c_norm,
                                const Real& budget);

/// |H_{n-k,n} - sqrt((n+1)/(n-k+1)) psi_{-k}|, -1 <= k <= n.
Real theorem2_residual(const HessenbergMatrix& H, const LaurentSeries& series, int n, int k);

/// 1 - (n+1) gamma^{2n+2} / (pi lambda_n^2), i.e. 1 - R_{n,n}^2.
Real leading_coefficient_defect(const BergmanBasis& basis, const LaurentSeries& series, int n);

/// max over n of | ||f_n - p_n||^2 - ||(I - R)e_n||^2 |, the first from the moments.
Real faber_bergman_distance_residual(const BergmanBasis& basis, const std::vector<Polynomial>& f,
                                     const BasisChangeMatrix& R, const MomentMatrix& M);

}  // namespace bergman
