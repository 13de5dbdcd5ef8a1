#ifndef KGLAB_SCHEMES_HPP
#define KGLAB_SCHEMES_HPP

#include "kglab/fock.hpp"
#include "kglab/vacuum.hpp"

#include <string>

namespace kglab {

/// One-particle subspace a scheme assigns to a region.
///
/// Newton-Wigner: orthonormal modes vanishing exactly outside the region.
/// Standard: K-images of the region's Cauchy-data deltas; the raw data is
/// supported exactly in the region, the mode images generically are not.
struct LocalSubspace {
    SchemeKind scheme = SchemeKind::Standard;
    Region region;
    std::vector<ComplexMode> basis;           // orthonormal in L2
    std::vector<PhaseVector> raw_phase_basis; // generating Cauchy data
};

/// n_per_site = 1 uses field-type deltas only, 2 adds momentum-type.
/// Newton-Wigner always has one complex mode per site; n_per_site is capped
/// there.
LocalSubspace local_subspace(SchemeKind scheme, const Region& g, const LatticeConfig& cfg,
                             int n_per_site = 2);

struct CheckResult {
    bool ok = false;
    double residual = 0.0;
};

/// Nested regions must give nested subspaces: every basis vector of the
/// inner subspace projects into the outer span with residual < 1e-10.
CheckResult check_isotony(SchemeKind scheme, const Region& g1, const Region& g2,
                          const LatticeConfig& cfg);

/// span(subspace(G + shift)) must equal translate(span(subspace(G))).
CheckResult check_translation_covariance(SchemeKind scheme, const Region& g, int shift,
                                         const LatticeConfig& cfg);

/// Equal-time commutator content across disjoint regions.
/// Standard: max |sigma(f, g)| over raw generator pairs.
/// Newton-Wigner: max |Im<u, v>| over basis mode pairs.
/// Both vanish exactly (sums with one zero factor per term).
double check_weak_microcausality(SchemeKind scheme, const Region& g1, const Region& g2,
                                 const LatticeConfig& cfg);

/// Commutator content between the time-evolved local algebras over a
/// spacelike time window (every |t_i - t_j| < spatial separation, checked).
///
/// The witness is the largest singular value of the cross-commutator block
/// over generator pairs at each time difference:
///   Standard:      sigma(D_{t1} f_i, D_{t2} g_j)   (unit (.,.)_J raws)
///   Newton-Wigner: <U_{t1} u_i, U_{t2} v_j>        (orthonormal modes)
/// The Newton-Wigner block is the full inner product: the scheme affiliates
/// creation/annihilation operators to its local algebras, and their mutual
/// commutators are the overlaps themselves, not just the imaginary part.
double check_strong_microcausality(SchemeKind scheme, const Region& g1, const Region& g2,
                                   const std::vector<double>& times, const LatticeConfig& cfg);

/// Same witness, reported per time difference (for data tables).
std::vector<std::pair<double, double>> strong_microcausality_profile(
    SchemeKind scheme, const Region& g1, const Region& g2, const std::vector<double>& times,
    const LatticeConfig& cfg);

/// Sum of a*a over the space's modes supported exactly inside g.
/// Exact integer spectrum; commutes exactly with anything acting only on
/// the complementary modes.
FockOperator nw_local_number_operator(const Region& g, const FockSpace& s);

/// Upper bound on the spectral-norm distance from A to the subalgebra of
/// operators acting only on the modes supported in g: the norm of
/// A - Pi(A), with Pi the trace-out conditional expectation over the
/// complement factor.  Requires every mode to sit entirely inside or
/// outside g.
double fapp_distance(const FockOperator& a, const Region& g, const FockSpace& s);

/// Operators within operator norm delta of the strictly local algebra.
struct FappAlgebra {
    Region region;
    double delta = 0.0;
    const FockSpace* space = nullptr;

    FappAlgebra(Region g, double d, const FockSpace& s) : region(std::move(g)), delta(d), space(&s) {
        if (!(delta > 0.0)) throw std::invalid_argument("FappAlgebra: delta must be positive");
    }
    bool contains(const FockOperator& a) const { return fapp_distance(a, region, *space) < delta; }
};

struct LabeledOperator {
    std::string label;
    FockOperator op;
};

/// Weyl generators for the part of a scheme's local algebra visible on a
/// truncated Fock space: displacements along each local direction with
/// magnitudes {0.25, 0.5, 1.0}, real and imaginary.  For the Standard
/// scheme the directions are the mode-basis projections of the region's
/// Cauchy-data deltas (through nw_displacement); for Newton-Wigner they are
/// the region's own modes.  with_ladders adds the annihilation and creation
/// operators of the region modes - an option only Newton-Wigner grants
/// itself (its local subspace is complex-linear).
std::vector<LabeledOperator> local_generators(const FockSpace& s, SchemeKind scheme,
                                              const Region& g, bool with_ladders);

/// Everything the fundamentality verdict needs, in one record.
struct SchemeReport {
    SchemeKind scheme = SchemeKind::Standard;
    std::string geometry;
    bool isotony_ok = false;
    double isotony_residual = 0.0;
    bool translation_covariance_ok = false;
    double translation_covariance_residual = 0.0;
    double weak_microcausality_defect = 0.0;
    double strong_microcausality_defect = 0.0;
    int vacuum_cyclic_rank = 0;
    int fock_dim = 0;
    int local_factor_dim = 0;
    double vacuum_separating_defect = 0.0;
    std::string separating_witness;
    bool local_number_op_available = false;
    double phase_rotation_leakage = 0.0;
    bool fundamentality_verdict = false;
    std::vector<std::string> reasons;
};

std::string scheme_report_json(const SchemeReport& r);

struct ExperimentGeometry {
    LatticeConfig lattice;  // carries the subspace and microcausality checks
    Region region1;
    Region region2;
    std::vector<double> times;
    int covariance_shift = 0;

    LatticeConfig fock_lattice;  // small lattice carrying the Fock probes
    int fock_site1 = 0;
    int fock_site2 = 0;
    int fock_cutoff = 3;
    int separating_samples = 500;
};

/// Runs every checker for one scheme.  The verdict is true only if isotony,
/// translation covariance and strong microcausality all pass and a local
/// number operator exists.  Thresholds: residuals 1e-10, weak 1e-14,
/// strong 1e-6.
SchemeReport fundamentality_report(SchemeKind scheme, const ExperimentGeometry& geo,
                                   std::mt19937_64& rng);

}  // namespace kglab

#endif
