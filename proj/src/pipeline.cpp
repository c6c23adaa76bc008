#include "bergman/pipeline.hpp"

#include "bergman/container.hpp"
#include "bergman/errors.hpp"

#include <algorithm>

namespace bergman {

namespace {

std::filesystem::path artifact_path(const PipelineConfig& cfg, const char* what, const DomainSpec& d) {
    return cfg.cache_dir / (std::string(what) + "_" + cache_tag(d.tag()) + "_n" + std::to_string(cfg.n_max) + "_d" +
                            std::to_string(cfg.digits) + ".txt");
}

std::optional<ArnoldiResult> load_basis(const PipelineConfig& cfg, const DomainSpec& d) {
    if (cfg.cache_dir.empty()) return std::nullopt;
    try {
        auto b = read_container(artifact_path(cfg, "basis", d));
        auto h = read_container(artifact_path(cfg, "hessenberg", d));
        if (!b || !h) return std::nullopt;
        if (b->get("domain") != d.tag() || h->get("domain") != d.tag()) throw FormatError("domain tag mismatch");
        ArnoldiResult out{basis_from_container(*b), hessenberg_from_container(*h)};
        if (out.basis.n_max() != cfg.n_max || out.basis.digits() != cfg.digits) throw FormatError("shape mismatch");
        return out;
    } catch (const FormatError& e) {
        if (cfg.log) *cfg.log << "warning: discarding cached basis for " << d.tag() << ": " << e.what() << "; recomputing\n";
        return std::nullopt;
    }
}

}  // namespace

Pipeline run_pipeline(const DomainSpec& domain, const PipelineConfig& cfg) {
    if (cfg.n_max < 1) throw UsageError("n_max must be at least 1");
    if (cfg.digits < 16) throw UsageError("digits must be at least 16");
    ScopedPrecision guard(cfg.digits);
    Pipeline p{exterior_map_series(domain, default_truncation(cfg.n_max), cfg.digits), {}, {}, {}, {}, {}, false, false};
    p.M = cached_moments(domain, cfg.n_max, cfg.digits, cfg.quadrature, cfg.cache_dir, &p.moments_reused, cfg.log);
    if (auto cached = load_basis(cfg, domain)) {
        p.A = std::move(*cached);
        p.basis_reused = true;
    } else {
        p.A = arnoldi(p.M, cfg.n_max);
        if (!cfg.cache_dir.empty()) {
            write_container(artifact_path(cfg, "basis", domain), to_container(p.A.basis, domain.tag()));
            write_container(artifact_path(cfg, "hessenberg", domain), to_container(p.A.H, domain.tag(), cfg.digits));
        }
    }
    p.F = faber_polynomials(p.series, cfg.n_max);
    p.f = normalized_faber(p.F);
    p.R = r_matrix(p.A.basis, p.f, p.M);
    return p;
}

GrunskyRun run_grunsky(const DomainSpec& domain, int K, int digits) {
    if (K < 1) throw UsageError("need at least one Grunsky column");
    ScopedPrecision guard(digits);
    LaurentSeries s = domain.kind() == DomainKind::Custom ? domain.custom_series()
                                                          : exterior_map_series(domain, K + 16 * K + 2, digits);
    // at least K rows so that the square sections exist
    const int room = s.truncation() - K - 2;
    if (room < K)
        throw UsageError("Laurent series of length " + std::to_string(s.truncation()) + " supports at most " +
                         std::to_string(std::max(0, (s.truncation() - 2) / 2)) + " Grunsky columns");
    auto C = grunsky_matrix(s, K, std::min(64, room), {16 * K, true});
    std::vector<Epsilon> eps;
    for (int n = 0; n < K; ++n) eps.push_back(epsilon(C, n));
    auto section = section_norms(C);
    const double block = column_block_norm(C);
    return {std::move(C), corner_norm_bound(domain), std::move(eps), std::move(section), block};
}

std::vector<Real> eps_values(const GrunskyRun& g) {
    std::vector<Real> out;
    out.reserve(g.eps.size());
    for (const auto& e : g.eps) out.push_back(e.value());
    return out;
}

double c_norm_estimate(const GrunskyRun& g) {
    double m = std::max(g.block_norm, g.corner_bound);
    for (double v : g.section) m = std::max(m, v);
    return m;
}

}  // namespace bergman
