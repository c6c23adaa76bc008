#pragma once

#include "bergman/mp.hpp"

#include <vector>

namespace bergman {

/// Polynomial in the monomial basis, coefficients in ascending order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    std::vector<Complex>& coeffs() { return coeffs_; }

    /// Degree ignoring trailing zero coefficients; -1 for the zero polynomial.
    int degree() const;
    const Complex& operator[](std::size_t k) const { return coeffs_[k]; }

    /// Horner evaluation at the current precision.
    Complex operator()(const Complex& z) const;
    Polynomial derivative() const;
    Polynomial scaled(const Real& s) const;

private:
    std::vector<Complex> coeffs_;
};

}  // namespace bergman
