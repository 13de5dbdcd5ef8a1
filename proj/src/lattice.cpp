#include "kglab/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace kglab {

Region::Region(std::vector<int> sites, int n_sites) : sites_(std::move(sites)), n_sites_(n_sites) {
    if (n_sites_ < 1) throw std::invalid_argument("Region: n_sites must be positive");
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    for (int s : sites_)
        if (s < 0 || s >= n_sites_) throw std::invalid_argument("Region: site index out of range");
}

Region Region::interval(const LatticeConfig& cfg, int start, int length) {
    if (length < 0 || length > cfg.n_sites)
        throw std::invalid_argument("Region::interval: bad length");
    std::vector<int> s;
    s.reserve(length);
    for (int i = 0; i < length; ++i) s.push_back(((start + i) % cfg.n_sites + cfg.n_sites) % cfg.n_sites);
    return Region(std::move(s), cfg.n_sites);
}

Region Region::full(const LatticeConfig& cfg) {
    std::vector<int> s(cfg.n_sites);
    for (int i = 0; i < cfg.n_sites; ++i) s[i] = i;
    return Region(std::move(s), cfg.n_sites);
}

bool Region::contains(int site) const {
    return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::contains(const Region& other) const {
    return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
}

bool Region::disjoint(const Region& other) const {
    std::vector<int> tmp;
    std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                          std::back_inserter(tmp));
    return tmp.empty();
}

Region Region::complement() const {
    std::vector<int> out;
    out.reserve(n_sites_ - sites_.size());
    std::size_t j = 0;
    for (int i = 0; i < n_sites_; ++i) {
        if (j < sites_.size() && sites_[j] == i)
            ++j;
        else
            out.push_back(i);
    }
    return Region(std::move(out), n_sites_);
}

Region Region::shifted(int shift) const {
    std::vector<int> out;
    out.reserve(sites_.size());
    for (int s : sites_) out.push_back(((s + shift) % n_sites_ + n_sites_) % n_sites_);
    return Region(std::move(out), n_sites_);
}

Region Region::dilated(int k) const {
    if (k < 0) throw std::invalid_argument("Region::dilated: negative k");
    std::vector<int> out;
    for (int s : sites_)
        for (int d = -k; d <= k; ++d) out.push_back(((s + d) % n_sites_ + n_sites_) % n_sites_);
    return Region(std::move(out), n_sites_);
}

double symplectic_form(const PhaseVector& f, const PhaseVector& g) {
    detail::require_same_config(f.config, g.config, "symplectic_form");
    return f.config.spacing * (f.phi.dot(g.pi) - f.pi.dot(g.phi));
}

Complex l2_inner(const ComplexMode& u, const ComplexMode& v) {
    detail::require_same_config(u.config, v.config, "l2_inner");
    return u.config.spacing * u.values.dot(v.values);  // Eigen dot conjugates the first factor
}

double l2_norm(const ComplexMode& u) {
    return std::sqrt(u.config.spacing) * u.values.norm();
}

double l2_norm(const PhaseVector& f) {
    return std::sqrt(f.config.spacing * (f.phi.squaredNorm() + f.pi.squaredNorm()));
}

PhaseVector restrict_to(const PhaseVector& f, const Region& g) {
    if (g.n_sites() != f.config.n_sites) throw std::invalid_argument("restrict_to: region size mismatch");
    PhaseVector out = PhaseVector::zero(f.config);
    for (int s : g.sites()) {
        out.phi[s] = f.phi[s];
        out.pi[s] = f.pi[s];
    }
    return out;
}

ComplexMode restrict_to(const ComplexMode& u, const Region& g) {
    if (g.n_sites() != u.config.n_sites) throw std::invalid_argument("restrict_to: region size mismatch");
    ComplexMode out = ComplexMode::zero(u.config);
    for (int s : g.sites()) out.values[s] = u.values[s];
    return out;
}

double mass_outside(const PhaseVector& f, const Region& g) {
    double worst = 0.0;
    Region c = g.complement();
    for (int s : c.sites()) worst = std::max({worst, std::abs(f.phi[s]), std::abs(f.pi[s])});
    return worst;
}

double mass_outside(const ComplexMode& u, const Region& g) {
    double worst = 0.0;
    Region c = g.complement();
    for (int s : c.sites()) worst = std::max(worst, std::abs(u.values[s]));
    return worst;
}

bool is_supported_in(const PhaseVector& f, const Region& g, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_supported_in: tol must be >= 0");
    return mass_outside(f, g) <= tol;
}

bool is_supported_in(const ComplexMode& u, const Region& g, double tol) {
    if (tol < 0.0) throw std::invalid_argument("is_supported_in: tol must be >= 0");
    return mass_outside(u, g) <= tol;
}

Region essential_support(const PhaseVector& f, double rel_tol) {
    double peak = std::max(f.phi.cwiseAbs().maxCoeff(), f.pi.cwiseAbs().maxCoeff());
    std::vector<int> s;
    for (int i = 0; i < f.config.n_sites; ++i)
        if (std::abs(f.phi[i]) > rel_tol * peak || std::abs(f.pi[i]) > rel_tol * peak) s.push_back(i);
    return Region(std::move(s), f.config.n_sites);
}

Region essential_support(const ComplexMode& u, double rel_tol) {
    double peak = u.values.cwiseAbs().maxCoeff();
    std::vector<int> s;
    for (int i = 0; i < u.config.n_sites; ++i)
        if (std::abs(u.values[i]) > rel_tol * peak) s.push_back(i);
    return Region(std::move(s), u.config.n_sites);
}

PhaseVector translate(const PhaseVector& f, int shift) {
    const int n = f.config.n_sites;
    PhaseVector out = PhaseVector::zero(f.config);
    for (int i = 0; i < n; ++i) {
        int j = ((i + shift) % n + n) % n;
        out.phi[j] = f.phi[i];
        out.pi[j] = f.pi[i];
    }
    return out;
}

ComplexMode translate(const ComplexMode& u, int shift) {
    const int n = u.config.n_sites;
    ComplexMode out = ComplexMode::zero(u.config);
    for (int i = 0; i < n; ++i) out.values[((i + shift) % n + n) % n] = u.values[i];
    return out;
}

double region_separation(const Region& g1, const Region& g2, const LatticeConfig& cfg) {
    if (g1.is_empty() || g2.is_empty())
        throw std::invalid_argument("region_separation: empty region");
    int best = cfg.n_sites;
    for (int s1 : g1.sites())
        for (int s2 : g2.sites()) {
            int d = std::abs(s1 - s2);
            d = std::min(d, cfg.n_sites - d);
            best = std::min(best, d);
        }
    return best * cfg.spacing;
}

}  // namespace kglab
