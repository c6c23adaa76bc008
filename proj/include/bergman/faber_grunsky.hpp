#pragma once

// Faber polynomials and the normalized Grunsky matrix.
//
// F_n is the polynomial part of phi(z)^n, so F_n(psi(w)) = w^n + O(1/w), and
//
//   F_{k+1}(psi(w)) / sqrt(k+1) = w^{k+1} / sqrt(k+1)
//                                 + sum_l w^{-(l+1)} C_{l,k} / sqrt(l+1).
//
// The columns of C are read off from those Laurent tails.

#include "bergman/conformal.hpp"
#include "bergman/dense.hpp"
#include "bergman/polynomial.hpp"

#include <vector>

namespace bergman {

/// F_0 .. F_{n_max+1} by triangular coefficient matching against powers of psi.
std::vector<Polynomial> faber_polynomials(const LaurentSeries& series, int n_max);

/// f_n = F'_{n+1} / (sqrt(pi) sqrt(n+1)) for n = 0 .. F.size()-2.
std::vector<Polynomial> normalized_faber(const std::vector<Polynomial>& F);

struct GrunskyOptions {
    /// Upper limit for row doubling; 0 means 16 K. Always clipped by the series truncation.
    int max_rows = 0;
    /// Double the row count until every column's last-dyadic-block increment
    /// drops below 10^(-digits/2). Off: use exactly the requested rows.
    bool refine = true;
};

class GrunskyMatrix {
public:
    GrunskyMatrix(Dense<Complex> entries, std::vector<Real> tail_bound,
                  std::vector<Real> tail_estimate, std::vector<bool> converged, int digits);

    int rows() const { return static_cast<int>(entries_.rows()); }
    int cols() const { return static_cast<int>(entries_.cols()); }
    int digits() const { return digits_; }
    const Complex& operator()(int l, int k) const {
        return entries_(static_cast<std::size_t>(l), static_cast<std::size_t>(k));
    }
    const Dense<Complex>& entries() const { return entries_; }

    /// Conservative per-column tail: max(0, 1 - sum_{l<L} |C_{l,k}|^2).
    const Real& tail_bound(int k) const { return tail_bound_[static_cast<std::size_t>(k)]; }
    /// Dyadic-extrapolated tail sum_{l>=L} |C_{l,k}|^2, never above tail_bound.
    const Real& tail_estimate(int k) const { return tail_estimate_[static_cast<std::size_t>(k)]; }
    /// True when the row doubling met its increment target for this column.
    bool converged(int k) const { return converged_[static_cast<std::size_t>(k)]; }
    /// Columns whose estimated tail exceeds 10^(-digits/4).
    std::vector<int> flagged_columns() const;

private:
    Dense<Complex> entries_;
    std::vector<Real> tail_bound_;
    std::vector<Real> tail_estimate_;
    std::vector<bool> converged_;
    int digits_;
};

/// K columns, starting with L rows. Requires series truncation >= K + L + 2.
GrunskyMatrix grunsky_matrix(const LaurentSeries& series, int K, int L, GrunskyOptions opts = {});

/// eps_n = sum_j |C_{j,n}|^2 with its truncation uncertainty.
struct Epsilon {
    Real partial;        // sum over stored rows; a lower bound
    Real tail_estimate;  // estimated missing mass
    Real tail_bound;     // conservative missing mass
    Real value() const { return partial + tail_estimate; }
    Real upper() const { return partial + tail_bound; }
};

Epsilon epsilon(const GrunskyMatrix& C, int n);

/// sum_k |y_k|^2 - sum_n |sum_k C_{n,k} y_k|^2 over the stored rows.
Real grunsky_inequality_margin(const GrunskyMatrix& C, const std::vector<Complex>& y);

/// r_n(w) = -sum_l sqrt((l+1)/pi) w^{-(l+2)} C_{l,n}.
Complex faber_residual(const GrunskyMatrix& C, int n, const Complex& w);
/// r_n(w) = psi'(w) f_n(psi(w)) - sqrt((n+1)/pi) w^n.
Complex faber_residual_direct(const LaurentSeries& series, const Polynomial& f_n, int n,
                              const Complex& w);

/// -sum_{n,l>=1} b_{n,l} w^{-l} v^{-n} over the stored block, b_{n+1,k+1} = C_{n,k}/sqrt((n+1)(k+1)).
Complex grunsky_generating_sum(const GrunskyMatrix& C, const Complex& w, const Complex& v);

/// ||C_m|| (largest singular value of the leading m x m section), m = 1 .. min(rows, cols).
std::vector<double> section_norms(const GrunskyMatrix& C);
/// ||C Pi_K|| over all stored rows.
double column_block_norm(const GrunskyMatrix& C);

}  // namespace bergman
