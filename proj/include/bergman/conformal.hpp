#pragma once

// Domains and their exterior conformal maps.
//
// phi maps the exterior of the closed domain onto |w| > 1 with phi(inf) = inf
// and phi'(inf) = gamma > 0; psi is its inverse, described by the Laurent
// data psi_1 w + psi_0 + psi_{-1}/w + ... . Built-in domains have closed forms
// for phi; custom domains are described by a truncated Laurent series only.

#include "bergman/mp.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bergman {

class LaurentSeries {
public:
    /// neg[k-1] holds psi_{-k}.
    LaurentSeries(Real psi1, Complex psi0, std::vector<Complex> neg, int digits);

    const Real& psi1() const { return psi1_; }
    const Complex& psi0() const { return psi0_; }
    const std::vector<Complex>& negative() const { return neg_; }
    int truncation() const { return static_cast<int>(neg_.size()); }
    int digits() const { return digits_; }

    /// psi_k for k <= 1; zero beyond the truncation.
    Complex coefficient(int k) const;
    /// gamma = 1 / psi_1.
    Real capacity_inverse() const { return Real(1) / psi1_; }
    /// True when every stored coefficient is real.
    bool is_real() const;

    /// Copy truncated or zero-extended to N negative coefficients.
    LaurentSeries resized(int N) const;

private:
    Real psi1_;
    Complex psi0_;
    std::vector<Complex> neg_;
    int digits_;
};

enum class DomainKind { Disk, Ellipse, Lens, Custom };

class DomainSpec {
public:
    static DomainSpec disk();
    /// Interior of the ellipse with semi-axes (r +- 1/r)/2; r given as a decimal literal.
    static DomainSpec ellipse(const std::string& r);
    /// Union of the open disks |z-1| < sqrt 2 and |z+1| < sqrt 2.
    static DomainSpec lens();
    static DomainSpec custom(LaurentSeries series);

    DomainKind kind() const { return kind_; }
    /// Ellipse parameter r at the current precision.
    Real ellipse_r() const;
    const std::string& ellipse_r_text() const { return ellipse_r_; }
    const LaurentSeries& custom_series() const;

    /// Stable identifier, e.g. "disk", "ellipse:2", "lens", "custom".
    std::string tag() const;

private:
    DomainKind kind_ = DomainKind::Disk;
    std::string ellipse_r_;
    std::shared_ptr<const LaurentSeries> series_;
};

/// A piece of the positively oriented boundary, z(t) = center + rx cos t + i ry sin t.
struct BoundaryArc {
    Complex center;
    Real radius;    // x semi-axis; the radius for circular arcs
    Real radius_y;  // y semi-axis; equals radius for circular arcs
    Real theta_start;
    Real theta_end;
    int orientation = +1;
    Complex start;  // exact endpoint values
    Complex end;

    Complex point(const Real& theta) const;
    /// dz/dtheta.
    Complex tangent(const Real& theta) const;
};

constexpr int kDefaultDigits = 128;

/// Laurent truncation used when none is given: 4 n_max + 64.
int default_truncation(int n_max);

LaurentSeries exterior_map_series(const DomainSpec& domain, int N, int digits);

/// psi(w) for |w| > 1 from the truncated series.
Complex psi_eval(const LaurentSeries& series, const Complex& w);
Complex psi_derivative(const LaurentSeries& series, const Complex& w);

struct NewtonOptions {
    int max_iterations = 200;
};

Complex phi_eval(const DomainSpec& domain, const Complex& z, NewtonOptions opts = {});
Complex phi_derivative(const DomainSpec& domain, const Complex& z, NewtonOptions opts = {});

std::vector<BoundaryArc> boundary_arcs(const DomainSpec& domain);

/// max |z| over the closed domain (built-ins only).
Real max_modulus(const DomainSpec& domain);

/// Lower bound |1 - omega| on ||C|| from a boundary corner of outer angle omega pi;
/// zero for smooth boundaries and for custom domains.
double corner_norm_bound(const DomainSpec& domain);

/// True when z lies strictly outside the closed convex hull of the domain.
bool outside_convex_hull(const DomainSpec& domain, const Complex& z);

}  // namespace bergman
