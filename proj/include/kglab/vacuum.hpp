#ifndef KGLAB_VACUUM_HPP
#define KGLAB_VACUUM_HPP

#include "kglab/lattice.hpp"
#include "kglab/spectral.hpp"

namespace kglab {

enum class SchemeKind { Standard, NewtonWigner };

const char* scheme_name(SchemeKind s);

/// <Omega, W(f) Omega> in closed Gaussian form.
///
/// Standard route: exp(-(f,f)_J / 4).
/// Newton-Wigner route: exp(-|sqrt2 Kf|^2 / 4), i.e. the L2 Gaussian law
/// applied to the displacement from nw_displacement().  The two routes give
/// the same number; keeping both makes the normalization bridge testable.
double weyl_vacuum_expectation(const PhaseVector& f, SchemeKind scheme);

/// <Omega, W(f) W(g) Omega> = exp(-i sigma(f,g)/2) * <W(f+g)>.
/// The phase follows the product law W(f)W(g) = exp(-i sigma(f,g)/2) W(f+g),
/// the convention the truncated-Fock matrices actually satisfy.
Complex two_point_weyl(const PhaseVector& f, const PhaseVector& g, SchemeKind scheme);

/// |<W(f)W(g)> - <W(f)><W(g)>| for probes localized, in the scheme's own
/// sense, in disjoint regions.  Standard localization reads the support of
/// the Cauchy data; Newton-Wigner localization reads the support of the L2
/// image Kf.  Identically zero for Newton-Wigner, generically positive for
/// Standard.
double factorization_defect(const PhaseVector& f, const PhaseVector& g, SchemeKind scheme);

/// Region of the scheme's one-particle image of f (entries above
/// rel_tol * peak).  This is what "localized in G" means per scheme.
Region scheme_support(const PhaseVector& f, SchemeKind scheme, double rel_tol = 1e-10);

/// Symmetric matrix of vacuum two-point values over a probe list:
/// Re(f_i, f_j)_J for Standard, Re<K f_i, K f_j> for Newton-Wigner.
struct CovarianceMatrix {
    RealMatrix entries;
    SchemeKind scheme = SchemeKind::Standard;
};
CovarianceMatrix vacuum_covariance(const std::vector<PhaseVector>& probes, SchemeKind scheme);

/// Purity of the vacuum reduced to a region, from the covariance of the
/// scheme's canonical probes there: 1 / (2^n sqrt(det V)).  Equals 1 for a
/// product state (Newton-Wigner), drops below 1 where the region is
/// entangled with its complement (Standard, any proper region).
double reduced_purity(const Region& g, const LatticeConfig& cfg, SchemeKind scheme);

/// Fitted decay length of the vacuum field correlation kernel (the 1/H
/// kernel row).  Requires N*a*m >= 20 so the exponential window exists.
/// The fit window is [3/m, min(0.4*N*a, max_fit_distance)]; pass the same
/// cap when comparing lattices of different size, so the window stays fixed.
double correlation_length(const LatticeConfig& cfg, double max_fit_distance = 1e300);

}  // namespace kglab

#endif
