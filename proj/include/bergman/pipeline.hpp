#pragma once

// End-to-end runs shared by the command-line tool and the acceptance suite:
// moments (cached) -> Arnoldi (cached) -> Faber -> R, and the Grunsky side.

#include "bergman/asymptotics.hpp"
#include "bergman/bergman.hpp"
#include "bergman/faber_grunsky.hpp"
#include "bergman/moments.hpp"

#include <filesystem>
#include <ostream>
#include <vector>

namespace bergman {

struct PipelineConfig {
    int n_max = 40;
    int digits = kDefaultDigits;
    QuadratureConfig quadrature;
    std::filesystem::path cache_dir;  // empty: no caching
    std::ostream* log = nullptr;      // cache warnings
};

struct Pipeline {
    LaurentSeries series;
    MomentMatrix M;
    ArnoldiResult A;
    std::vector<Polynomial> F;  // Faber polynomials F_0 .. F_{n_max+1}
    std::vector<Polynomial> f;  // normalized, f_0 .. f_{n_max}
    BasisChangeMatrix R;
    bool moments_reused = false;
    bool basis_reused = false;
};

/// Built-in domains only (moments need the boundary).
Pipeline run_pipeline(const DomainSpec& domain, const PipelineConfig& cfg);

struct GrunskyRun {
    GrunskyMatrix C;
    double corner_bound;          // |1 - omega| for the sharpest corner
    std::vector<Epsilon> eps;     // columns 0 .. K-1
    std::vector<double> section;  // ||C_m||, m = 1 .. K
    double block_norm;            // ||C Pi_K|| over all stored rows
};

/// K columns from a series of truncation K + 16 K + 2 (or the custom series as given).
GrunskyRun run_grunsky(const DomainSpec& domain, int K, int digits);

/// Point estimate of eps_n (partial sum plus extrapolated tail) for n < K.
std::vector<Real> eps_values(const GrunskyRun& g);

/// Substitute for ||C|| in the bounds: the largest computed section norm, raised
/// to the corner lower bound. Sections alone undershoot when the boundary has corners.
double c_norm_estimate(const GrunskyRun& g);

}  // namespace bergman
