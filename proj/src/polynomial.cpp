#include "bergman/polynomial.hpp"

namespace bergman {

int Polynomial::degree() const {
    for (auto k = coeffs_.size(); k-- > 0;) {
        if (!coeffs_[k].real().is_zero() || !coeffs_[k].imag().is_zero()) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

Complex Polynomial::operator()(const Complex& z) const {
    Complex acc;
    for (auto k = coeffs_.size(); k-- > 0;) {
        acc *= z;
        acc += coeffs_[k];
    }
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial({Complex()});
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        d[k - 1] = coeffs_[k] * Real(static_cast<long>(k));
    }
    return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(const Real& s) const {
    std::vector<Complex> c = coeffs_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
}

}  // namespace bergman
