#include "bergman/moments.hpp"

#include "bergman/errors.hpp"
#include "bergman/quadrature.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bergman {

namespace {

// Extra digits carried through the quadrature sums; results are rounded back.
constexpr int kGuardDigits = 16;

using Cd = std::complex<double>;

struct Box {
    double x0, x1, y0, y1;
};

struct Shape {
    Box box;
    // Negative inside, positive outside.
    double (*level)(double x, double y, double a, double b);
    double a, b;
};

double disk_level(double x, double y, double, double) { return x * x + y * y - 1; }
double ellipse_level(double x, double y, double a, double b) {
    return (x / a) * (x / a) + (y / b) * (y / b) - 1;
}
double lens_level(double x, double y, double, double) {
    return std::min((x - 1) * (x - 1) + y * y, (x + 1) * (x + 1) + y * y) - 2;
}

Shape shape_of(const DomainSpec& d) {
    switch (d.kind()) {
        case DomainKind::Disk:
            return {{-1, 1, -1, 1}, disk_level, 1, 1};
        case DomainKind::Ellipse: {
            const double r = std::stod(d.ellipse_r_text());
            const double a = (r + 1 / r) / 2, b = (r - 1 / r) / 2;
            return {{-a, a, -b, b}, ellipse_level, a, b};
        }
        case DomainKind::Lens: {
            const double s = std::sqrt(2.0);
            return {{-1 - s, 1 + s, -s, s}, lens_level, 0, 0};
        }
        case DomainKind::Custom:
            break;
    }
    throw UsageError("the 2-D oracle supports disk, ellipse and lens only");
}

double log10_or_inf(const Real& x) {
    if (x.is_zero()) return -std::numeric_limits<double>::infinity();
    return to_double(boost::multiprecision::log10(x));
}

}  // namespace

MomentMatrix::MomentMatrix(Dense<Complex> entries, std::string domain_tag, int digits,
                           std::vector<QuadratureStep> history)
    : entries_(std::move(entries)), tag_(std::move(domain_tag)), digits_(digits), history_(std::move(history)) {}

MomentMatrix MomentMatrix::leading(int m) const {
    if (m < 0 || m > n_max()) throw UsageError("leading section larger than the moment table");
    ScopedPrecision guard(digits_);
    const auto sz = static_cast<std::size_t>(m) + 1;
    Dense<Complex> e(sz, sz);
    for (std::size_t j = 0; j < sz; ++j)
        for (std::size_t k = 0; k < sz; ++k) e(j, k) = entries_(j, k);
    return MomentMatrix(std::move(e), tag_, digits_, history_);
}

MomentMatrix moments_contour(const DomainSpec& domain, int n_max, int digits, QuadratureConfig q) {
    if (n_max < 0) throw UsageError("n_max must be nonnegative");
    if (q.nodes_per_arc < 8) throw UsageError("need at least 8 nodes per arc");
    if (q.max_refinements < 0) throw UsageError("max_refinements must be nonnegative");
    const auto arcs = [&] {
        ScopedPrecision g(digits + kGuardDigits);
        return boundary_arcs(domain);
    }();
    const int work = digits + kGuardDigits;
    const double target = q.target_log10 < 0 ? q.target_log10 : -(digits - 8);
    const auto sz = static_cast<std::size_t>(n_max) + 1;

    std::vector<QuadratureStep> history;
    Dense<Complex> prev;
    for (int level = 0; level <= q.max_refinements; ++level) {
        const int n = q.nodes_per_arc << level;
        const GaussLegendreRule& rule = gauss_legendre(n, work);
        ScopedPrecision guard(work);

        // I(j,k) = oint z^j conj(z)^{k+1} dz, lower triangle only.
        Dense<Complex> I(sz, sz);
        std::vector<Complex> a(sz), b(sz);
        Real scratch[2];
        for (const auto& arc : arcs) {
            const Real half = (arc.theta_end - arc.theta_start) / 2;
            const Real mid = (arc.theta_end + arc.theta_start) / 2;
            for (int i = 0; i < n; ++i) {
                const Real theta = mid + half * rule.nodes[static_cast<std::size_t>(i)];
                const Complex z = arc.point(theta);
                const Complex zc = conj(z);
                a[0] = arc.tangent(theta) * (half * rule.weights[static_cast<std::size_t>(i)] * arc.orientation);
                b[0] = zc;
                for (std::size_t j = 1; j < sz; ++j) {
                    a[j] = a[j - 1] * z;
                    b[j] = b[j - 1] * zc;
                }
                for (std::size_t j = 0; j < sz; ++j)
                    for (std::size_t k = 0; k <= j; ++k) fma_into(I(j, k), a[j], b[k], scratch);
            }
        }

        Dense<Complex> mu(sz, sz);
        for (std::size_t j = 0; j < sz; ++j) {
            for (std::size_t k = 0; k <= j; ++k) {
                // I / (2i (k+1)) = (Im I, -Re I) / (2 (k+1))
                const Real d(2 * static_cast<long>(k + 1));
                mu(j, k) = Complex(I(j, k).imag() / d, -I(j, k).real() / d);
            }
            mu(j, j).imag() = 0;
        }

        double change = std::numeric_limits<double>::infinity();
        if (level > 0) {
            Real worst(0);
            for (std::size_t j = 0; j < sz; ++j) {
                for (std::size_t k = 0; k <= j; ++k) {
                    const Real scale = boost::multiprecision::sqrt(
                        boost::multiprecision::abs(mu(j, j).real() * mu(k, k).real()));
                    const Real c = abs(mu(j, k) - prev(j, k)) / scale;
                    if (c > worst) worst = c;
                }
            }
            change = log10_or_inf(worst);
        }
        history.push_back({n, change});
        prev = std::move(mu);
        if (change < target) {
            ScopedPrecision out(digits);
            Dense<Complex> M(sz, sz);
            for (std::size_t j = 0; j < sz; ++j) {
                for (std::size_t k = 0; k <= j; ++k) {
                    M(j, k) = at_current_precision(prev(j, k));
                    M(k, j) = conj(M(j, k));
                }
            }
            return MomentMatrix(std::move(M), domain.tag(), digits, std::move(history));
        }
    }
    throw ConvergenceError("moment quadrature did not converge within " + std::to_string(q.max_refinements) +
                           " refinements");
}

OracleMoments moments_oracle_2d(const DomainSpec& domain, int n_max, int resolution) {
    if (resolution < 64) throw UsageError("oracle resolution must be at least 64");
    if (n_max < 0) throw UsageError("n_max must be nonnegative");
    const Shape s = shape_of(domain);
    const auto sz = static_cast<std::size_t>(n_max) + 1;
    const double hx = (s.box.x1 - s.box.x0) / resolution;
    const double hy = (s.box.y1 - s.box.y0) / resolution;
    const double h = std::max(hx, hy);
    const double area = hx * hy;

    Dense<Cd> sum(sz, sz);
    Dense<double> cut(sz, sz, 0.0), smooth(sz, sz, 0.0);
    std::vector<Cd> zp(sz), zcp(sz);
    std::vector<double> rp(2 * sz + 1);
    for (int iy = 0; iy < resolution; ++iy) {
        const double y0 = s.box.y0 + iy * hy, y1 = y0 + hy, yc = y0 + hy / 2;
        Dense<Cd> row(sz, sz);
        for (int ix = 0; ix < resolution; ++ix) {
            const double x0 = s.box.x0 + ix * hx, x1 = x0 + hx, xc = x0 + hx / 2;
            const bool inside = s.level(xc, yc, s.a, s.b) < 0;
            int corners = 0;
            for (double cx : {x0, x1})
                for (double cy : {y0, y1}) corners += s.level(cx, cy, s.a, s.b) < 0 ? 1 : 0;
            const bool is_cut = corners != 0 && corners != 4;
            if (!inside && !is_cut) continue;

            const Cd z(xc, yc);
            const double r = std::abs(z);
            rp[0] = 1;
            for (std::size_t m = 1; m < rp.size(); ++m) rp[m] = rp[m - 1] * r;
            if (is_cut) {
                // worst case over the cell
                const double rmax = r + h;
                double p = 1;
                std::vector<double> rm(2 * sz + 1);
                for (auto& v : rm) {
                    v = p;
                    p *= rmax;
                }
                for (std::size_t j = 0; j < sz; ++j)
                    for (std::size_t k = 0; k < sz; ++k) cut(j, k) += area * rm[j + k];
            }
            if (!inside) continue;
            zp[0] = zcp[0] = 1;
            for (std::size_t m = 1; m < sz; ++m) {
                zp[m] = zp[m - 1] * z;
                zcp[m] = zcp[m - 1] * std::conj(z);
            }
            for (std::size_t j = 0; j < sz; ++j) {
                for (std::size_t k = 0; k < sz; ++k) {
                    row(j, k) += zp[j] * zcp[k];
                    const double m = static_cast<double>(j + k);
                    if (j + k >= 2) smooth(j, k) += area * m * (m - 1) * rp[j + k - 2];
                }
            }
        }
        for (std::size_t j = 0; j < sz; ++j)
            for (std::size_t k = 0; k < sz; ++k) sum(j, k) += row(j, k) * area;
    }

    OracleMoments out{Dense<Cd>(sz, sz), Dense<double>(sz, sz, 0.0), resolution};
    for (std::size_t j = 0; j < sz; ++j) {
        for (std::size_t k = 0; k < sz; ++k) {
            out.entries(j, k) = sum(j, k);
            // midpoint rule: |error| <= h^2/24 int (|f_xx| + |f_yy|), |f_xx|,|f_yy| <= m(m-1)|z|^{m-2}
            out.error_estimate(j, k) = cut(j, k) + h * h / 24 * 2 * smooth(j, k);
        }
    }
    return out;
}

Complex inner_product(const Polynomial& a, const Polynomial& b, const MomentMatrix& M) {
    const auto na = a.coeffs().size(), nb = b.coeffs().size();
    if (static_cast<int>(std::max(na, nb)) > M.n_max() + 1) {
        throw UsageError("polynomial degree exceeds the moment table");
    }
    ScopedPrecision guard(M.digits());
    Real scratch[2];
    Complex total;
    for (std::size_t j = 0; j < na; ++j) {
        Complex row;
        for (std::size_t k = 0; k < nb; ++k) {
            fma_conj_into(row, M(static_cast<int>(j), static_cast<int>(k)), b[k], scratch);
        }
        fma_into(total, a[j], row, scratch);
    }
    return total;
}

Real min_cholesky_pivot(const MomentMatrix& M) {
    ScopedPrecision guard(M.digits());
    const auto n = static_cast<std::size_t>(M.n_max()) + 1;
    // L is unit lower triangular, stored with D on the diagonal.
    Dense<Complex> L(n, n);
    std::vector<Real> d(n);
    Real worst(1);
    Real scratch[2];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            Complex s = M(static_cast<int>(i), static_cast<int>(j));
            Complex acc;
            for (std::size_t k = 0; k < j; ++k) {
                fma_conj_into(acc, L(i, k) * d[k], L(j, k), scratch);
            }
            s -= acc;
            if (j < i) {
                L(i, j) = s / d[j];
            } else {
                d[i] = s.real();
                const Real rel = d[i] / M(static_cast<int>(i), static_cast<int>(i)).real();
                if (rel < worst) worst = rel;
                if (!(d[i] > 0)) return rel;
            }
        }
    }
    return worst;
}

Real hermitian_defect(const MomentMatrix& M) {
    ScopedPrecision guard(M.digits());
    Real worst(0);
    for (int j = 0; j <= M.n_max(); ++j)
        for (int k = 0; k <= j; ++k) worst = std::max(worst, abs(M(k, j) - conj(M(j, k))));
    return worst;
}

}  // namespace bergman
