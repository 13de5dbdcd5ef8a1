#include "kglab/vacuum.hpp"

#include <cmath>

namespace kglab {

const char* scheme_name(SchemeKind s) {
    return s == SchemeKind::Standard ? "standard" : "newton-wigner";
}

double weyl_vacuum_expectation(const PhaseVector& f, SchemeKind scheme) {
    if (scheme == SchemeKind::Standard) {
        double norm2 = inner_product_j(f, f).real();
        return std::exp(-0.25 * norm2);
    }
    ComplexMode d = nw_displacement(f);
    double norm2 = l2_inner(d, d).real();
    return std::exp(-0.25 * norm2);
}

Complex two_point_weyl(const PhaseVector& f, const PhaseVector& g, SchemeKind scheme) {
    const double sigma = symplectic_form(f, g);
    const double amp = weyl_vacuum_expectation(f + g, scheme);
    return std::polar(amp, -0.5 * sigma);
}

Region scheme_support(const PhaseVector& f, SchemeKind scheme, double rel_tol) {
    if (scheme == SchemeKind::Standard) return essential_support(f, rel_tol);
    return essential_support(nw_map_k(f), rel_tol);
}

double factorization_defect(const PhaseVector& f, const PhaseVector& g, SchemeKind scheme) {
    Region sf = scheme_support(f, scheme);
    Region sg = scheme_support(g, scheme);
    if (!sf.disjoint(sg))
        throw std::invalid_argument("factorization_defect: probe supports overlap");
    Complex joint = two_point_weyl(f, g, scheme);
    double product = weyl_vacuum_expectation(f, scheme) * weyl_vacuum_expectation(g, scheme);
    return std::abs(joint - product);
}

CovarianceMatrix vacuum_covariance(const std::vector<PhaseVector>& probes, SchemeKind scheme) {
    if (probes.empty()) throw std::invalid_argument("vacuum_covariance: empty probe list");
    const int n = static_cast<int>(probes.size());
    CovarianceMatrix cov;
    cov.scheme = scheme;
    cov.entries = RealMatrix(n, n);
    std::vector<ComplexMode> k_images;
    if (scheme == SchemeKind::NewtonWigner) {
        k_images.reserve(n);
        for (const auto& p : probes) k_images.push_back(nw_map_k(p));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = (scheme == SchemeKind::Standard)
                           ? inner_product_j(probes[i], probes[j]).real()
                           : l2_inner(k_images[i], k_images[j]).real();
            cov.entries(i, j) = v;
            cov.entries(j, i) = v;
        }
    return cov;
}

double reduced_purity(const Region& g, const LatticeConfig& cfg, SchemeKind scheme) {
    if (g.is_empty()) throw std::invalid_argument("reduced_purity: empty region");
    const int n = g.size();
    const double s = 1.0 / std::sqrt(cfg.spacing);  // makes the site pairs canonical
    RealMatrix v(2 * n, 2 * n);
    if (scheme == SchemeKind::Standard) {
        std::vector<PhaseVector> probes;
        probes.reserve(2 * n);
        for (int site : g.sites()) {
            probes.push_back(PhaseVector::phi_delta(cfg, site) * s);
            probes.push_back(PhaseVector::pi_delta(cfg, site) * s);
        }
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j)
                v(i, j) = 0.5 * inner_product_j(probes[i], probes[j]).real();
    } else {
        // quadrature pairs of the region's orthonormal indicator modes
        std::vector<ComplexMode> w;
        w.reserve(2 * n);
        for (int site : g.sites()) {
            ComplexMode u = ComplexMode::site_indicator(cfg, site);
            w.push_back(u);
            w.push_back(u * Complex(0.0, 1.0));
        }
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) v(i, j) = 0.5 * l2_inner(w[i], w[j]).real();
    }
    double det = v.determinant();
    if (det <= 0.0) throw std::runtime_error("reduced_purity: covariance not positive");
    return 1.0 / (std::pow(2.0, n) * std::sqrt(det));
}

double correlation_length(const LatticeConfig& cfg, double max_fit_distance) {
    if (cfg.n_sites * cfg.spacing * cfg.mass < 20.0)
        throw std::runtime_error("correlation_length: lattice too small (need N*a*m >= 20)");
    RealVector delta = RealVector::Zero(cfg.n_sites);
    delta[0] = 1.0;
    RealVector row = apply_h_power(delta, -1.0, cfg);
    const int half = cfg.n_sites / 2;
    RealVector vals(half - 1), dist(half - 1);
    for (int i = 1; i < half; ++i) {
        vals[i - 1] = row[i];
        dist[i - 1] = i * cfg.spacing;
    }
    const double hi = std::min(0.4 * cfg.n_sites * cfg.spacing, max_fit_distance);
    DecayFit fit = fit_log_decay(vals, dist, 3.0 / cfg.mass, hi);
    return 1.0 / fit.rate;
}

}  // namespace kglab
