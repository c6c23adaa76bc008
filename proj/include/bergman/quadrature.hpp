#pragma once

#include "bergman/mp.hpp"

#include <vector>

namespace bergman {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<Real> nodes;    // ascending
    std::vector<Real> weights;
};

/// Nodes by Newton on the three-term recurrence, polished at `digits`.
/// Rules are cached per (n, digits); the returned reference stays valid.
const GaussLegendreRule& gauss_legendre(int n, int digits);

}  // namespace bergman
