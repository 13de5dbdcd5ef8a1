#ifndef KGLAB_LATTICE_HPP
#define KGLAB_LATTICE_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace kglab {

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Geometry of a periodic 1-D spatial slice in natural units (hbar = c = 1).
/// A positive mass is required: the kernels 1/H and H^{-1/2} appear
/// throughout and need the spectrum bounded away from zero.
struct LatticeConfig {
    int n_sites = 0;
    double spacing = 0.0;
    double mass = 0.0;

    LatticeConfig() = default;
    LatticeConfig(int n, double a, double m) : n_sites(n), spacing(a), mass(m) {
        if (n_sites < 2) throw std::invalid_argument("LatticeConfig: n_sites must be >= 2");
        if (!(spacing > 0.0)) throw std::invalid_argument("LatticeConfig: spacing must be positive");
        if (!(mass > 0.0)) throw std::invalid_argument("LatticeConfig: mass must be positive");
    }

    double length() const { return n_sites * spacing; }

    bool operator==(const LatticeConfig& o) const {
        return n_sites == o.n_sites && spacing == o.spacing && mass == o.mass;
    }
    bool operator!=(const LatticeConfig& o) const { return !(*this == o); }
};

namespace detail {
inline void require_same_config(const LatticeConfig& a, const LatticeConfig& b, const char* where) {
    if (a != b) throw std::invalid_argument(std::string(where) + ": mismatched lattice configs");
}
}  // namespace detail

/// A Cauchy-data pair (field values, conjugate momenta) on the slice.
struct PhaseVector {
    RealVector phi;
    RealVector pi;
    LatticeConfig config;

    PhaseVector() = default;
    PhaseVector(RealVector phi_, RealVector pi_, LatticeConfig cfg)
        : phi(std::move(phi_)), pi(std::move(pi_)), config(cfg) {
        if (phi.size() != config.n_sites || pi.size() != config.n_sites)
            throw std::invalid_argument("PhaseVector: component length != n_sites");
    }

    static PhaseVector zero(const LatticeConfig& cfg) {
        return PhaseVector(RealVector::Zero(cfg.n_sites), RealVector::Zero(cfg.n_sites), cfg);
    }
    /// Unit bump in the field component at one site.
    static PhaseVector phi_delta(const LatticeConfig& cfg, int site) {
        PhaseVector f = zero(cfg);
        f.phi[((site % cfg.n_sites) + cfg.n_sites) % cfg.n_sites] = 1.0;
        return f;
    }
    /// Unit bump in the momentum component at one site.
    static PhaseVector pi_delta(const LatticeConfig& cfg, int site) {
        PhaseVector f = zero(cfg);
        f.pi[((site % cfg.n_sites) + cfg.n_sites) % cfg.n_sites] = 1.0;
        return f;
    }

    PhaseVector operator+(const PhaseVector& o) const {
        detail::require_same_config(config, o.config, "PhaseVector::operator+");
        return PhaseVector(phi + o.phi, pi + o.pi, config);
    }
    PhaseVector operator-(const PhaseVector& o) const {
        detail::require_same_config(config, o.config, "PhaseVector::operator-");
        return PhaseVector(phi - o.phi, pi - o.pi, config);
    }
    PhaseVector operator*(double s) const { return PhaseVector(phi * s, pi * s, config); }
};

/// A complex-valued lattice function: an element of the one-particle space.
struct ComplexMode {
    ComplexVector values;
    LatticeConfig config;

    ComplexMode() = default;
    ComplexMode(ComplexVector v, LatticeConfig cfg) : values(std::move(v)), config(cfg) {
        if (values.size() != config.n_sites)
            throw std::invalid_argument("ComplexMode: length != n_sites");
    }

    static ComplexMode zero(const LatticeConfig& cfg) {
        return ComplexMode(ComplexVector::Zero(cfg.n_sites), cfg);
    }
    /// L2-normalized indicator of a single site.
    static ComplexMode site_indicator(const LatticeConfig& cfg, int site) {
        ComplexMode u = zero(cfg);
        int s = ((site % cfg.n_sites) + cfg.n_sites) % cfg.n_sites;
        u.values[s] = 1.0 / std::sqrt(cfg.spacing);
        return u;
    }

    ComplexMode operator+(const ComplexMode& o) const {
        detail::require_same_config(config, o.config, "ComplexMode::operator+");
        return ComplexMode(values + o.values, config);
    }
    ComplexMode operator*(Complex s) const { return ComplexMode(values * s, config); }
};

/// A set of lattice sites, kept sorted and duplicate-free.
class Region {
  public:
    Region() = default;
    Region(std::vector<int> sites, int n_sites);

    /// Contiguous interval of `length` sites starting at `start`, wrapping
    /// periodically.
    static Region interval(const LatticeConfig& cfg, int start, int length);
    static Region full(const LatticeConfig& cfg);
    static Region empty(const LatticeConfig& cfg) { return Region({}, cfg.n_sites); }

    const std::vector<int>& sites() const { return sites_; }
    int n_sites() const { return n_sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    bool is_empty() const { return sites_.empty(); }
    bool is_full() const { return size() == n_sites_; }
    bool contains(int site) const;
    bool contains(const Region& other) const;
    bool disjoint(const Region& other) const;

    Region complement() const;
    Region shifted(int shift) const;
    /// Grow by k sites on each side of every member (periodically).
    Region dilated(int k) const;

    bool operator==(const Region& o) const { return n_sites_ == o.n_sites_ && sites_ == o.sites_; }

  private:
    std::vector<int> sites_;
    int n_sites_ = 0;
};

/// Symplectic form: spacing * sum(phi0*pi1 - pi0*phi1).
double symplectic_form(const PhaseVector& f, const PhaseVector& g);

/// Lattice L2 inner product, conjugation on the FIRST argument:
/// spacing * sum(conj(u)*v).  All Hermitian forms in this project fix the
/// conjugate slot this way.
Complex l2_inner(const ComplexMode& u, const ComplexMode& v);

double l2_norm(const ComplexMode& u);
/// sqrt(<phi,phi> + <pi,pi>) with the spacing-weighted sums.
double l2_norm(const PhaseVector& f);

PhaseVector restrict_to(const PhaseVector& f, const Region& g);
ComplexMode restrict_to(const ComplexMode& u, const Region& g);

bool is_supported_in(const PhaseVector& f, const Region& g, double tol);
bool is_supported_in(const ComplexMode& u, const Region& g, double tol);

/// Max absolute entry outside the region.
double mass_outside(const PhaseVector& f, const Region& g);
double mass_outside(const ComplexMode& u, const Region& g);

/// Smallest region containing every entry larger than rel_tol * max|entry|.
Region essential_support(const PhaseVector& f, double rel_tol);
Region essential_support(const ComplexMode& u, double rel_tol);

PhaseVector translate(const PhaseVector& f, int shift);
ComplexMode translate(const ComplexMode& u, int shift);

/// Shortest periodic distance between two regions, in length units.
/// Zero if they overlap or touch at distance 0.
double region_separation(const Region& g1, const Region& g2, const LatticeConfig& cfg);

}  // namespace kglab

#endif
