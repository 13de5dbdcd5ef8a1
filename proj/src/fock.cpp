#include "kglab/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace kglab {

namespace {
void require_space(const FockOperator& op, const FockSpace& s, const char* where) {
    if (op.space != &s || op.matrix.rows() != s.dim() || op.matrix.cols() != s.dim())
        throw std::invalid_argument(std::string(where) + ": operator/space mismatch");
}

double spectral_norm(const ComplexMatrix& m) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}
}  // namespace

FockSpace::FockSpace(std::vector<ComplexMode> mode_basis, int cutoff)
    : mode_basis_(std::move(mode_basis)), cutoff_(cutoff) {
    const int n = static_cast<int>(mode_basis_.size());
    if (n < 1 || n > 6) throw std::invalid_argument("FockSpace: need 1..6 modes");
    if (cutoff_ < 1 || cutoff_ > 8) throw std::invalid_argument("FockSpace: need cutoff 1..8");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex g = l2_inner(mode_basis_[i], mode_basis_[j]);
            double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - want) > 1e-10)
                throw std::invalid_argument("FockSpace: mode basis not orthonormal");
        }
    strides_.resize(n);
    int d = 1;
    for (int i = 0; i < n; ++i) {
        strides_[i] = d;
        d *= cutoff_ + 1;
    }
    dim_ = d;
}

int FockSpace::occupation(int state, int mode) const {
    return (state / strides_[mode]) % (cutoff_ + 1);
}

FockOperator creation_op(const FockSpace& s, int mode) {
    if (mode < 0 || mode >= s.n_modes()) throw std::invalid_argument("creation_op: mode out of range");
    FockOperator op;
    op.space = &s;
    op.matrix = ComplexMatrix::Zero(s.dim(), s.dim());
    for (int st = 0; st < s.dim(); ++st) {
        int n = s.occupation(st, mode);
        if (n < s.cutoff()) op.matrix(st + s.stride(mode), st) = std::sqrt(double(n + 1));
    }
    return op;
}

FockOperator annihilation_op(const FockSpace& s, int mode) {
    FockOperator op = creation_op(s, mode);
    op.matrix = op.matrix.adjoint().eval();
    return op;
}

FockOperator field_op(const FockSpace& s, const ComplexVector& c) {
    if (c.size() != s.n_modes()) throw std::invalid_argument("field_op: coefficient length mismatch");
    FockOperator op;
    op.space = &s;
    op.matrix = ComplexMatrix::Zero(s.dim(), s.dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int mode = 0; mode < s.n_modes(); ++mode) {
        if (c[mode] == Complex(0, 0)) continue;
        ComplexMatrix ad = creation_op(s, mode).matrix;
        op.matrix += inv_sqrt2 * (c[mode] * ad + std::conj(c[mode]) * ad.adjoint());
    }
    return op;
}

FockOperator weyl_op(const FockSpace& s, const ComplexVector& c) {
    FockOperator phi = field_op(s, c);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(phi.matrix);
    ComplexVector phases(s.dim());
    for (int i = 0; i < s.dim(); ++i)
        phases[i] = std::polar(1.0, es.eigenvalues()[i]);
    FockOperator op;
    op.space = &s;
    op.matrix = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return op;
}

FockOperator number_op(const FockSpace& s, const ComplexVector& c) {
    if (c.size() != s.n_modes()) throw std::invalid_argument("number_op: coefficient length mismatch");
    ComplexMatrix lower = ComplexMatrix::Zero(s.dim(), s.dim());
    for (int mode = 0; mode < s.n_modes(); ++mode) {
        if (c[mode] == Complex(0, 0)) continue;
        lower += std::conj(c[mode]) * annihilation_op(s, mode).matrix;
    }
    FockOperator op;
    op.space = &s;
    op.matrix = lower.adjoint() * lower;
    return op;
}

double weyl_phase(const ComplexVector& c, const ComplexVector& d) {
    return c.dot(d).imag();
}

ComplexVector project_onto_modes(const FockSpace& s, const ComplexMode& u) {
    ComplexVector c(s.n_modes());
    for (int i = 0; i < s.n_modes(); ++i) c[i] = l2_inner(s.mode_basis()[i], u);
    return c;
}

int cyclicity_rank(const FockSpace& s, const std::vector<FockOperator>& generators, double tol,
                   int max_word_len) {
    if (!(tol > 0.0)) throw std::invalid_argument("cyclicity_rank: tol must be positive");
    for (const auto& g : generators) require_space(g, s, "cyclicity_rank");
    std::vector<ComplexVector> columns;
    std::vector<ComplexVector> level;
    level.push_back(FockVector::vacuum(s).amplitudes);
    columns.push_back(level.front());
    for (int len = 1; len <= max_word_len; ++len) {
        std::vector<ComplexVector> next;
        next.reserve(level.size() * generators.size());
        for (const auto& g : generators)
            for (const auto& v : level) next.push_back(g.matrix * v);
        columns.insert(columns.end(), next.begin(), next.end());
        level = std::move(next);
    }
    ComplexMatrix m(s.dim(), static_cast<int>(columns.size()));
    for (int j = 0; j < m.cols(); ++j) m.col(j) = columns[j];
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++rank;
    return rank;
}

SeparatingProbe separating_defect(const FockSpace& s, const std::vector<FockOperator>& generators,
                                  const FockVector& x, int samples, std::mt19937_64& rng,
                                  int max_word_len) {
    if (samples <= 0) throw std::invalid_argument("separating_defect: samples must be positive");
    if (generators.empty()) throw std::invalid_argument("separating_defect: no generators");
    for (const auto& g : generators) require_space(g, s, "separating_defect");
    std::uniform_int_distribution<int> len_dist(1, max_word_len);
    std::uniform_int_distribution<int> gen_dist(0, static_cast<int>(generators.size()) - 1);
    SeparatingProbe best;
    best.defect = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const int len = len_dist(rng);
        std::vector<int> word(len);
        for (int& w : word) w = gen_dist(rng);
        ComplexMatrix a = generators[word[0]].matrix;
        for (int i = 1; i < len; ++i) a = a * generators[word[i]].matrix;
        const double den = spectral_norm(a);
        if (den < 1e-300) continue;  // zero word carries no information
        const double ratio = (a * x.amplitudes).norm() / den;
        if (ratio < best.defect) {
            best.defect = ratio;
            best.witness = word;
        }
    }
    if (!std::isfinite(best.defect))
        throw std::runtime_error("separating_defect: every sampled word was zero");
    return best;
}

}  // namespace kglab
