#ifndef KGLAB_FOCK_HPP
#define KGLAB_FOCK_HPP

#include "kglab/lattice.hpp"

#include <random>
#include <string>

namespace kglab {

/// Bosonic Fock space over a small set of orthonormal one-particle modes,
/// truncated to `cutoff` quanta per mode.  dim = (cutoff+1)^n_modes.
/// Basis states are indexed little-endian in the per-mode occupations.
class FockSpace {
  public:
    FockSpace(std::vector<ComplexMode> mode_basis, int cutoff);

    int n_modes() const { return static_cast<int>(mode_basis_.size()); }
    int cutoff() const { return cutoff_; }
    int dim() const { return dim_; }
    const std::vector<ComplexMode>& mode_basis() const { return mode_basis_; }
    const LatticeConfig& config() const { return mode_basis_.front().config; }

    int occupation(int state, int mode) const;
    int stride(int mode) const { return strides_[mode]; }

  private:
    std::vector<ComplexMode> mode_basis_;
    int cutoff_ = 0;
    int dim_ = 0;
    std::vector<int> strides_;
};

struct FockOperator {
    ComplexMatrix matrix;
    const FockSpace* space = nullptr;
};

struct FockVector {
    ComplexVector amplitudes;
    const FockSpace* space = nullptr;

    static FockVector vacuum(const FockSpace& s) {
        FockVector v;
        v.amplitudes = ComplexVector::Zero(s.dim());
        v.amplitudes[0] = 1.0;
        v.space = &s;
        return v;
    }
    double norm() const { return amplitudes.norm(); }
};

/// Ladder matrices for one mode, tensored with identities on the rest:
/// <n+1| a* |n> = sqrt(n+1).
FockOperator creation_op(const FockSpace& s, int mode);
FockOperator annihilation_op(const FockSpace& s, int mode);

/// Field operator for a displacement coefficient vector c over the modes:
///   Phi(c) = (a*(c) + a(c)) / sqrt2,
/// with a*(c) = sum_i c_i a*_i linear and a(c) = sum_i conj(c_i) a_i
/// conjugate-linear, so Phi(ic) != i Phi(c).
FockOperator field_op(const FockSpace& s, const ComplexVector& c);

/// W(c) = exp(i Phi(c)), computed by Hermitian eigendecomposition of Phi
/// (exactly unitary up to rounding).
FockOperator weyl_op(const FockSpace& s, const ComplexVector& c);

/// N(c) = a*(c) a(c).  Positive semidefinite; kills the vacuum; invariant
/// under c -> e^{it} c.
FockOperator number_op(const FockSpace& s, const ComplexVector& c);

/// Symplectic form on displacement coefficients: Im<c, d>.  The Weyl
/// product law reads W(c) W(d) = exp(-i weyl_phase(c,d)/2) W(c+d).
double weyl_phase(const ComplexVector& c, const ComplexVector& d);

/// Coefficients of a lattice mode against the space's mode basis.
ComplexVector project_onto_modes(const FockSpace& s, const ComplexMode& u);

/// Count of singular values above tol * largest among the vectors
/// {A Omega : A a word of length <= max_word_len over the generators},
/// identity included.  Realizes the cyclic-span probe as a rank computation.
int cyclicity_rank(const FockSpace& s, const std::vector<FockOperator>& generators, double tol,
                   int max_word_len = 3);

/// min over sampled words A of |A x| / |A| (spectral norm), with the word
/// achieving the minimum.  Zero exactly when some word kills the vector.
struct SeparatingProbe {
    double defect = 0.0;
    std::vector<int> witness;  // generator indices of the best word
};
SeparatingProbe separating_defect(const FockSpace& s, const std::vector<FockOperator>& generators,
                                  const FockVector& x, int samples, std::mt19937_64& rng,
                                  int max_word_len = 3);

}  // namespace kglab

#endif
