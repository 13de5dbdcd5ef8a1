#include "kglab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace kglab {

namespace {

// Memoized DFT plans and dispersion multipliers.  Thread-local, so lookups
// are referentially transparent and a race can at worst recompute the same
// numbers in another thread's cache.
Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> engine;
    return engine;
}

using MultiplierKey = std::tuple<int, double, double, double>;  // (N, a, m, p)

const RealVector& cached_omega_power(const LatticeConfig& cfg, double p) {
    thread_local std::map<MultiplierKey, RealVector> cache;
    MultiplierKey key{cfg.n_sites, cfg.spacing, cfg.mass, p};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const int n = cfg.n_sites;
    RealVector mult(n);
    const double two_over_a2 = 2.0 / (cfg.spacing * cfg.spacing);
    for (int k = 0; k < n; ++k) {
        double w2 = cfg.mass * cfg.mass +
                    two_over_a2 * (1.0 - std::cos(2.0 * std::numbers::pi * k / n));
        mult[k] = std::pow(std::sqrt(w2), p);
    }
    return cache.emplace(key, std::move(mult)).first->second;
}

ComplexVector forward(const ComplexVector& v) {
    ComplexVector out(v.size());
    fft_engine().fwd(out, v);
    return out;
}

ComplexVector inverse(const ComplexVector& v) {
    ComplexVector out(v.size());
    fft_engine().inv(out, v);
    return out;
}

ComplexVector to_complex(const RealVector& v) {
    return v.cast<Complex>();
}

}  // namespace

DispersionTable dispersion(const LatticeConfig& cfg) {
    DispersionTable t;
    t.config = cfg;
    t.omega = cached_omega_power(cfg, 1.0);
    return t;
}

RealVector apply_h_power(const RealVector& v, double p, const LatticeConfig& cfg) {
    if (v.size() != cfg.n_sites) throw std::invalid_argument("apply_h_power: length mismatch");
    if (p == 0.0) return v;
    const RealVector& mult = cached_omega_power(cfg, p);
    ComplexVector hat = forward(to_complex(v));
    hat.array() *= mult.array();
    return inverse(hat).real();
}

ComplexMode apply_h_power(const ComplexMode& v, double p) {
    if (p == 0.0) return v;
    const RealVector& mult = cached_omega_power(v.config, p);
    ComplexVector hat = forward(v.values);
    hat.array() *= mult.array();
    return ComplexMode(inverse(hat), v.config);
}

PhaseVector complex_structure_j(const PhaseVector& f) {
    return PhaseVector(-apply_h_power(f.pi, -1.0, f.config), apply_h_power(f.phi, 1.0, f.config),
                       f.config);
}

Complex inner_product_j(const PhaseVector& f, const PhaseVector& g) {
    detail::require_same_config(f.config, g.config, "inner_product_j");
    PhaseVector jg = complex_structure_j(g);
    return Complex(symplectic_form(f, jg), symplectic_form(f, g));
}

ComplexMode nw_map_k(const PhaseVector& f) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    RealVector re = apply_h_power(f.phi, 0.5, f.config);
    RealVector im = apply_h_power(f.pi, -0.5, f.config);
    ComplexVector out(f.config.n_sites);
    out.real() = inv_sqrt2 * re;
    out.imag() = inv_sqrt2 * im;
    return ComplexMode(std::move(out), f.config);
}

PhaseVector nw_map_k_inverse(const ComplexMode& u) {
    RealVector re = u.values.real();
    RealVector im = u.values.imag();
    return PhaseVector(std::numbers::sqrt2 * apply_h_power(re, -0.5, u.config),
                       std::numbers::sqrt2 * apply_h_power(im, 0.5, u.config), u.config);
}

ComplexMode nw_displacement(const PhaseVector& f) {
    ComplexMode k = nw_map_k(f);
    return ComplexMode(std::numbers::sqrt2 * k.values, f.config);
}

PhaseVector time_evolve(const PhaseVector& f, double t) {
    if (t == 0.0) return f;
    const LatticeConfig& cfg = f.config;
    const RealVector& omega = cached_omega_power(cfg, 1.0);
    ComplexVector phi_hat = forward(to_complex(f.phi));
    ComplexVector pi_hat = forward(to_complex(f.pi));
    ComplexVector phi_out(cfg.n_sites), pi_out(cfg.n_sites);
    for (int k = 0; k < cfg.n_sites; ++k) {
        const double w = omega[k];
        const double c = std::cos(w * t), s = std::sin(w * t);
        phi_out[k] = c * phi_hat[k] + (s / w) * pi_hat[k];
        pi_out[k] = -w * s * phi_hat[k] + c * pi_hat[k];
    }
    return PhaseVector(inverse(phi_out).real(), inverse(pi_out).real(), cfg);
}

ComplexMode evolve_mode(const ComplexMode& u, double t) {
    const RealVector& omega = cached_omega_power(u.config, 1.0);
    ComplexVector hat = forward(u.values);
    for (int k = 0; k < u.config.n_sites; ++k)
        hat[k] *= Complex(std::cos(omega[k] * t), std::sin(omega[k] * t));
    return ComplexMode(inverse(hat), u.config);
}

double antilocality_tail(const RealVector& g, const Region& G, const LatticeConfig& cfg) {
    PhaseVector wrapped(g, RealVector::Zero(cfg.n_sites), cfg);
    if (!is_supported_in(wrapped, G, 0.0))
        throw std::invalid_argument("antilocality_tail: g not supported in G");
    RealVector hg = apply_h_power(g, 1.0, cfg);
    double acc = 0.0;
    for (int s : G.complement().sites()) acc += hg[s] * hg[s];
    return std::sqrt(cfg.spacing * acc);
}

RealMatrix dense_h_power(const LatticeConfig& cfg, double p) {
    const int n = cfg.n_sites;
    if (n > 512) throw std::invalid_argument("dense_h_power: n_sites > 512 guard");
    const double inv_a2 = 1.0 / (cfg.spacing * cfg.spacing);
    RealMatrix e = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        e(i, i) = 2.0 * inv_a2 + cfg.mass * cfg.mass;
        e(i, (i + 1) % n) -= inv_a2;
        e(i, (i + n - 1) % n) -= inv_a2;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(e);
    RealVector powered(n);
    for (int i = 0; i < n; ++i) powered[i] = std::pow(es.eigenvalues()[i], 0.5 * p);
    return es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
}

DecayFit fit_log_decay(const RealVector& values, const RealVector& distances, double lo, double hi,
                       double floor_rel) {
    if (values.size() != distances.size())
        throw std::invalid_argument("fit_log_decay: size mismatch");
    const double peak = values.cwiseAbs().maxCoeff();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 0; i < values.size(); ++i) {
        const double d = distances[i];
        const double av = std::abs(values[i]);
        if (d < lo || d > hi || av <= floor_rel * peak) continue;
        const double y = std::log(av);
        sx += d;
        sy += y;
        sxx += d * d;
        sxy += d * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fit_log_decay: fewer than 2 points in window");
    const double denom = n * sxx - sx * sx;
    DecayFit fit;
    fit.rate = -(n * sxy - sx * sy) / denom;
    fit.points_used = n;
    return fit;
}

}  // namespace kglab
