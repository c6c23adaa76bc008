#pragma once

// Area moments mu_{j,k} = <z^j, z^k> = int_G z^j conj(z)^k dA.
//
// Green's formula turns each one into a boundary integral,
//   mu_{j,k} = 1 / (2i (k+1)) oint z^j conj(z)^{k+1} dz,
// which Gauss-Legendre handles at geometric speed on every analytic arc.

#include "bergman/conformal.hpp"
#include "bergman/dense.hpp"
#include "bergman/polynomial.hpp"

#include <complex>
#include <string>
#include <vector>

namespace bergman {

struct QuadratureConfig {
    int nodes_per_arc = 64;
    int max_refinements = 6;
    /// Relative change between successive node doublings; 0 selects 10^(-digits+8).
    double target_log10 = 0;
};

/// One pass of the node-doubling schedule.
struct QuadratureStep {
    int nodes_per_arc;
    /// max |change| / sqrt(mu_jj mu_kk) against the previous pass, in decimal
    /// exponent form (e.g. -121.3); +inf for the first pass.
    double log10_change;
};

class MomentMatrix {
public:
    MomentMatrix() = default;
    MomentMatrix(Dense<Complex> entries, std::string domain_tag, int digits,
                 std::vector<QuadratureStep> history);

    /// n_max; the table has n_max + 1 rows.
    int n_max() const { return static_cast<int>(entries_.rows()) - 1; }
    int digits() const { return digits_; }
    const std::string& domain_tag() const { return tag_; }
    const std::vector<QuadratureStep>& history() const { return history_; }
    const Complex& operator()(int j, int k) const {
        return entries_(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    }
    const Dense<Complex>& entries() const { return entries_; }
    const Real& area() const { return entries_(0, 0).real(); }

    /// Leading (m+1) x (m+1) block, m <= n_max.
    MomentMatrix leading(int m) const;

private:
    Dense<Complex> entries_;
    std::string tag_;
    int digits_ = 0;
    std::vector<QuadratureStep> history_;
};

MomentMatrix moments_contour(const DomainSpec& domain, int n_max, int digits,
                             QuadratureConfig q = {});

/// Double-precision midpoint rule on a resolution x resolution grid over the
/// bounding box, with an error estimate per entry.
struct OracleMoments {
    Dense<std::complex<double>> entries;
    /// Sum of h^2 |z^j conj(z)^k| over cells cut by the boundary: each such
    /// cell is either fully in or fully out of the sum, so this bounds the
    /// membership error; the smooth midpoint error is added on top.
    Dense<double> error_estimate;
    int resolution;
};

OracleMoments moments_oracle_2d(const DomainSpec& domain, int n_max, int resolution);

/// sum_{j,k} a_j conj(b_k) mu_{j,k}.
Complex inner_product(const Polynomial& a, const Polynomial& b, const MomentMatrix& M);

/// Smallest pivot of the LDL* factorization; positive iff every leading
/// section of M is positive definite.
Real min_cholesky_pivot(const MomentMatrix& M);

/// max |mu_{k,j} - conj(mu_{j,k})|.
Real hermitian_defect(const MomentMatrix& M);

}  // namespace bergman
