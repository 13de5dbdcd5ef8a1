#ifndef KGLAB_SPECTRAL_HPP
#define KGLAB_SPECTRAL_HPP

#include "kglab/lattice.hpp"

namespace kglab {

/// Mode frequencies of the lattice Klein-Gordon operator:
///   omega_k = sqrt(m^2 + (2/a^2) * (1 - cos(2 pi k / N)))
/// for DFT index k.  omega_0 = m exactly and every omega_k >= m.
struct DispersionTable {
    RealVector omega;
    LatticeConfig config;
};

DispersionTable dispersion(const LatticeConfig& cfg);

/// Apply H^p = (-laplacian + m^2)^(p/2) via the DFT.  Real input stays real
/// (the imaginary rounding residue of the inverse transform is dropped).
/// p = 0 is the identity.
RealVector apply_h_power(const RealVector& v, double p, const LatticeConfig& cfg);
ComplexMode apply_h_power(const ComplexMode& v, double p);

/// J(phi, pi) = (-H^{-1} pi, H phi).  Squares to -identity, preserves the
/// symplectic form, and sigma(f, Jf) > 0 for nonzero f.
PhaseVector complex_structure_j(const PhaseVector& f);

/// (f,g)_J = sigma(f, Jg) + i sigma(f, g).
/// Positive-definite Hermitian form; the conjugate-linear slot is the first
/// argument (same convention as l2_inner).
Complex inner_product_j(const PhaseVector& f, const PhaseVector& g);

/// K(phi, pi) = (1/sqrt2) (H^{1/2} phi + i H^{-1/2} pi).
/// Real-linear injection into the lattice L2 space with
/// 2 Im<Kf, Kg> = sigma(f, g).
ComplexMode nw_map_k(const PhaseVector& f);

/// Inverse of nw_map_k on the full lattice:
/// phi = sqrt2 H^{-1/2} Re u,  pi = sqrt2 H^{1/2} Im u.
PhaseVector nw_map_k_inverse(const ComplexMode& u);

/// The one documented bridge between the two one-particle normalizations.
///
/// The map K satisfies 2 Im<Kf,Kg> = sigma(f,g), while the form (.,.)_J has
/// Im(f,g)_J = sigma(f,g); consequently <Kf,Kf> = (1/2)(f,f)_J and the L2
/// displacement carrying the same Weyl operator as f is sqrt2 * Kf.  Every
/// L2-side vacuum formula in this project goes through this function
/// instead of rescaling silently.
ComplexMode nw_displacement(const PhaseVector& f);

/// Classical Klein-Gordon flow on Cauchy data:
///   phi' = cos(Ht) phi + H^{-1} sin(Ht) pi
///   pi'  = -H sin(Ht) phi + cos(Ht) pi
/// A symplectomorphism commuting with J; group law holds mode-wise.
PhaseVector time_evolve(const PhaseVector& f, double t);

/// One-particle evolution on L2 modes: multiply mode k by exp(i omega_k t).
ComplexMode evolve_mode(const ComplexMode& u, double t);

/// L2 norm of (H g) outside G, for g supported in G (checked at tol 0).
/// Anti-locality of H makes this strictly positive for g != 0.
double antilocality_tail(const RealVector& g, const Region& G, const LatticeConfig& cfg);

/// Dense test oracle: builds the circulant -laplacian + m^2, eigendecomposes
/// it symmetrically and returns the matrix power p/2.  Guarded to
/// n_sites <= 512.  Kept free of any FFT so the two routes stay independent.
RealMatrix dense_h_power(const LatticeConfig& cfg, double p);

/// Least-squares slope of log|values| against distance, restricted to the
/// window [lo, hi] and to entries above floor_rel * max|values| (points
/// drowned in rounding noise would otherwise corrupt the fit).
/// Returns the decay rate (minus the slope) and the number of points used.
struct DecayFit {
    double rate = 0.0;
    int points_used = 0;
};
DecayFit fit_log_decay(const RealVector& values, const RealVector& distances, double lo, double hi,
                       double floor_rel = 1e-12);

}  // namespace kglab

#endif
