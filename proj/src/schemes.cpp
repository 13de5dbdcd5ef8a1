#include "kglab/schemes.hpp"

#include <Eigen/SVD>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kglab {

namespace {

double spectral_norm(const ComplexMatrix& m) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

// Pivoted Gram-Schmidt with re-orthogonalization.  Vectors whose residual
// drops below drop_tol of their original norm are discarded as dependent.
std::vector<ComplexMode> orthonormalize(std::vector<ComplexMode> vecs, double drop_tol = 1e-12) {
    std::vector<ComplexMode> basis;
    std::vector<bool> used(vecs.size(), false);
    std::vector<double> limit(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) limit[i] = drop_tol * l2_norm(vecs[i]);
    for (;;) {
        int pivot = -1;
        double best = 0.0;
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            if (used[i]) continue;
            double n = l2_norm(vecs[i]);
            if (n > best) {
                best = n;
                pivot = static_cast<int>(i);
            }
        }
        if (pivot < 0 || best <= limit[pivot]) break;
        ComplexMode v = vecs[pivot];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v = v + b * (-l2_inner(b, v));
        double n = l2_norm(v);
        used[pivot] = true;
        if (n <= limit[pivot]) continue;
        basis.push_back(v * Complex(1.0 / n, 0.0));
    }
    return basis;
}

PhaseVector unit_j_norm(PhaseVector f) {
    double n = std::sqrt(inner_product_j(f, f).real());
    return f * (1.0 / n);
}

std::vector<PhaseVector> standard_raws(const Region& g, const LatticeConfig& cfg, int n_per_site) {
    std::vector<PhaseVector> raws;
    for (int site : g.sites()) {
        raws.push_back(unit_j_norm(PhaseVector::phi_delta(cfg, site)));
        if (n_per_site >= 2) raws.push_back(unit_j_norm(PhaseVector::pi_delta(cfg, site)));
    }
    return raws;
}

double span_residual(const std::vector<ComplexMode>& vectors, const std::vector<ComplexMode>& basis) {
    double worst = 0.0;
    for (const auto& v : vectors) {
        ComplexMode r = v;
        for (const auto& b : basis) r = r + b * (-l2_inner(b, v));
        worst = std::max(worst, l2_norm(r) / l2_norm(v));
    }
    return worst;
}

}  // namespace

LocalSubspace local_subspace(SchemeKind scheme, const Region& g, const LatticeConfig& cfg,
                             int n_per_site) {
    if (g.is_empty()) throw std::invalid_argument("local_subspace: empty region");
    if (n_per_site < 1) throw std::invalid_argument("local_subspace: n_per_site must be >= 1");
    LocalSubspace sub;
    sub.scheme = scheme;
    sub.region = g;
    if (scheme == SchemeKind::NewtonWigner) {
        for (int site : g.sites()) {
            ComplexMode u = ComplexMode::site_indicator(cfg, site);
            sub.basis.push_back(u);
            sub.raw_phase_basis.push_back(nw_map_k_inverse(u));
        }
        return sub;
    }
    sub.raw_phase_basis = standard_raws(g, cfg, n_per_site);
    std::vector<ComplexMode> images;
    images.reserve(sub.raw_phase_basis.size());
    for (const auto& f : sub.raw_phase_basis) images.push_back(nw_map_k(f));
    sub.basis = orthonormalize(std::move(images));
    return sub;
}

CheckResult check_isotony(SchemeKind scheme, const Region& g1, const Region& g2,
                          const LatticeConfig& cfg) {
    if (!g2.contains(g1)) throw std::invalid_argument("check_isotony: regions not nested");
    LocalSubspace inner = local_subspace(scheme, g1, cfg);
    LocalSubspace outer = local_subspace(scheme, g2, cfg);
    CheckResult res;
    res.residual = span_residual(inner.basis, outer.basis);
    res.ok = res.residual < 1e-10;
    return res;
}

CheckResult check_translation_covariance(SchemeKind scheme, const Region& g, int shift,
                                         const LatticeConfig& cfg) {
    LocalSubspace moved = local_subspace(scheme, g.shifted(shift), cfg);
    LocalSubspace base = local_subspace(scheme, g, cfg);
    std::vector<ComplexMode> translated;
    translated.reserve(base.basis.size());
    for (const auto& u : base.basis) translated.push_back(translate(u, shift));
    CheckResult res;
    res.residual = std::max(span_residual(translated, moved.basis),
                            span_residual(moved.basis, orthonormalize(translated)));
    res.ok = res.residual < 1e-10;
    return res;
}

double check_weak_microcausality(SchemeKind scheme, const Region& g1, const Region& g2,
                                 const LatticeConfig& cfg) {
    if (!g1.disjoint(g2)) throw std::invalid_argument("check_weak_microcausality: regions overlap");
    LocalSubspace s1 = local_subspace(scheme, g1, cfg);
    LocalSubspace s2 = local_subspace(scheme, g2, cfg);
    double worst = 0.0;
    if (scheme == SchemeKind::Standard) {
        for (const auto& f : s1.raw_phase_basis)
            for (const auto& g : s2.raw_phase_basis)
                worst = std::max(worst, std::abs(symplectic_form(f, g)));
    } else {
        for (const auto& u : s1.basis)
            for (const auto& v : s2.basis)
                worst = std::max(worst, std::abs(l2_inner(u, v).imag()));
    }
    return worst;
}

std::vector<std::pair<double, double>> strong_microcausality_profile(
    SchemeKind scheme, const Region& g1, const Region& g2, const std::vector<double>& times,
    const LatticeConfig& cfg) {
    if (!g1.disjoint(g2)) throw std::invalid_argument("check_strong_microcausality: regions overlap");
    if (times.empty()) throw std::invalid_argument("check_strong_microcausality: empty time grid");
    const double separation = region_separation(g1, g2, cfg);
    // collect time differences; the flow group law makes (t1,t2) depend on
    // t1 - t2 only
    std::vector<double> dts;
    for (double t1 : times)
        for (double t2 : times) {
            if (std::abs(t1 - t2) >= separation)
                throw std::invalid_argument(
                    "check_strong_microcausality: timelike configuration (|t1-t2| >= separation)");
            dts.push_back(t1 - t2);
        }
    std::sort(dts.begin(), dts.end());
    dts.erase(std::unique(dts.begin(), dts.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              dts.end());

    LocalSubspace s1 = local_subspace(scheme, g1, cfg);
    LocalSubspace s2 = local_subspace(scheme, g2, cfg);
    std::vector<std::pair<double, double>> profile;
    profile.reserve(dts.size());
    for (double dt : dts) {
        double value = 0.0;
        if (scheme == SchemeKind::Standard) {
            const auto& raws1 = s1.raw_phase_basis;
            const auto& raws2 = s2.raw_phase_basis;
            RealMatrix m(raws1.size(), raws2.size());
            for (std::size_t i = 0; i < raws1.size(); ++i) {
                PhaseVector moved = time_evolve(raws1[i], dt);
                for (std::size_t j = 0; j < raws2.size(); ++j)
                    m(i, j) = symplectic_form(moved, raws2[j]);
            }
            value = Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0);
        } else {
            ComplexMatrix c(s1.basis.size(), s2.basis.size());
            for (std::size_t i = 0; i < s1.basis.size(); ++i) {
                ComplexMode moved = evolve_mode(s1.basis[i], dt);
                for (std::size_t j = 0; j < s2.basis.size(); ++j)
                    c(i, j) = l2_inner(moved, s2.basis[j]);
            }
            value = spectral_norm(c);
        }
        profile.emplace_back(dt, value);
    }
    return profile;
}

double check_strong_microcausality(SchemeKind scheme, const Region& g1, const Region& g2,
                                   const std::vector<double>& times, const LatticeConfig& cfg) {
    double worst = 0.0;
    for (const auto& [dt, value] : strong_microcausality_profile(scheme, g1, g2, times, cfg))
        worst = std::max(worst, value);
    return worst;
}

FockOperator nw_local_number_operator(const Region& g, const FockSpace& s) {
    std::vector<int> inside;
    for (int i = 0; i < s.n_modes(); ++i)
        if (mass_outside(s.mode_basis()[i], g) == 0.0) inside.push_back(i);
    if (inside.empty())
        throw std::invalid_argument("nw_local_number_operator: no mode supported in region");
    FockOperator op;
    op.space = &s;
    op.matrix = ComplexMatrix::Zero(s.dim(), s.dim());
    for (int st = 0; st < s.dim(); ++st) {
        int total = 0;
        for (int i : inside) total += s.occupation(st, i);
        op.matrix(st, st) = static_cast<double>(total);
    }
    return op;
}

double fapp_distance(const FockOperator& a, const Region& g, const FockSpace& s) {
    if (a.space != &s || a.matrix.rows() != s.dim())
        throw std::invalid_argument("fapp_distance: operator/space mismatch");
    std::vector<int> inside, outside;
    Region comp = g.complement();
    for (int i = 0; i < s.n_modes(); ++i) {
        if (mass_outside(s.mode_basis()[i], g) == 0.0)
            inside.push_back(i);
        else if (mass_outside(s.mode_basis()[i], comp) == 0.0)
            outside.push_back(i);
        else
            throw std::invalid_argument("fapp_distance: mode basis does not factor over the region");
    }
    const int per = s.cutoff() + 1;
    int d_in = 1, d_out = 1;
    for (std::size_t i = 0; i < inside.size(); ++i) d_in *= per;
    for (std::size_t i = 0; i < outside.size(); ++i) d_out *= per;
    // composite index of a basis state within each factor
    std::vector<int> idx_in(s.dim()), idx_out(s.dim());
    for (int st = 0; st < s.dim(); ++st) {
        int a_in = 0, a_out = 0, w = 1;
        for (int m : inside) {
            a_in += s.occupation(st, m) * w;
            w *= per;
        }
        w = 1;
        for (int m : outside) {
            a_out += s.occupation(st, m) * w;
            w *= per;
        }
        idx_in[st] = a_in;
        idx_out[st] = a_out;
    }
    // partial trace over the outside factor
    ComplexMatrix traced = ComplexMatrix::Zero(d_in, d_in);
    for (int r = 0; r < s.dim(); ++r)
        for (int c = 0; c < s.dim(); ++c)
            if (idx_out[r] == idx_out[c]) traced(idx_in[r], idx_in[c]) += a.matrix(r, c);
    traced /= static_cast<double>(d_out);
    // conditional expectation: traced block tensored with identity outside
    ComplexMatrix proj = ComplexMatrix::Zero(s.dim(), s.dim());
    for (int r = 0; r < s.dim(); ++r)
        for (int c = 0; c < s.dim(); ++c)
            if (idx_out[r] == idx_out[c]) proj(r, c) = traced(idx_in[r], idx_in[c]);
    return spectral_norm(a.matrix - proj);
}

std::vector<LabeledOperator> local_generators(const FockSpace& s, SchemeKind scheme, const Region& g,
                                              bool with_ladders) {
    static const double magnitudes[] = {0.25, 0.5, 1.0};
    std::vector<LabeledOperator> gens;
    const LatticeConfig& cfg = s.config();
    auto add_weyl_family = [&](const ComplexVector& direction, const std::string& tag) {
        ComplexVector dir = direction / direction.norm();
        for (double lam : magnitudes) {
            for (int imag = 0; imag < 2; ++imag) {
                Complex scale = imag ? Complex(0.0, lam) : Complex(lam, 0.0);
                std::ostringstream label;
                label << "W[" << tag << "]x" << lam << (imag ? "i" : "");
                gens.push_back({label.str(), weyl_op(s, (scale * dir.array()).matrix())});
            }
        }
    };
    if (scheme == SchemeKind::NewtonWigner) {
        for (int i = 0; i < s.n_modes(); ++i) {
            if (mass_outside(s.mode_basis()[i], g) != 0.0) continue;
            ComplexVector e = ComplexVector::Zero(s.n_modes());
            e[i] = 1.0;
            add_weyl_family(e, "m" + std::to_string(i));
            if (with_ladders) {
                gens.push_back({"a[m" + std::to_string(i) + "]", annihilation_op(s, i)});
                gens.push_back({"a*[m" + std::to_string(i) + "]", creation_op(s, i)});
            }
        }
    } else {
        if (with_ladders)
            throw std::invalid_argument(
                "local_generators: the standard scheme affiliates no local ladder operators");
        for (int site : g.sites()) {
            ComplexVector c_phi =
                project_onto_modes(s, nw_displacement(PhaseVector::phi_delta(cfg, site)));
            ComplexVector c_pi =
                project_onto_modes(s, nw_displacement(PhaseVector::pi_delta(cfg, site)));
            add_weyl_family(c_phi, "phi@" + std::to_string(site));
            add_weyl_family(c_pi, "pi@" + std::to_string(site));
        }
    }
    if (gens.empty()) throw std::invalid_argument("local_generators: region carries no generators");
    return gens;
}

std::string scheme_report_json(const SchemeReport& r) {
    nlohmann::ordered_json j;
    j["scheme"] = scheme_name(r.scheme);
    j["geometry"] = r.geometry;
    j["isotony_ok"] = r.isotony_ok;
    j["isotony_residual"] = r.isotony_residual;
    j["translation_covariance_ok"] = r.translation_covariance_ok;
    j["translation_covariance_residual"] = r.translation_covariance_residual;
    j["weak_microcausality_defect"] = r.weak_microcausality_defect;
    j["strong_microcausality_defect"] = r.strong_microcausality_defect;
    j["vacuum_cyclic_rank"] = r.vacuum_cyclic_rank;
    j["fock_dim"] = r.fock_dim;
    j["local_factor_dim"] = r.local_factor_dim;
    j["vacuum_separating_defect"] = r.vacuum_separating_defect;
    j["separating_witness"] = r.separating_witness;
    j["local_number_op_available"] = r.local_number_op_available;
    j["phase_rotation_leakage"] = r.phase_rotation_leakage;
    j["fundamentality_verdict"] = r.fundamentality_verdict;
    j["reasons"] = r.reasons;
    return j.dump(2);
}

SchemeReport fundamentality_report(SchemeKind scheme, const ExperimentGeometry& geo,
                                   std::mt19937_64& rng) {
    if (geo.region1.is_empty() || geo.region2.is_empty() || !geo.region1.disjoint(geo.region2))
        throw std::invalid_argument("fundamentality_report: need two disjoint nonempty regions");
    SchemeReport r;
    r.scheme = scheme;
    {
        std::ostringstream g;
        g << "N=" << geo.lattice.n_sites << " a=" << geo.lattice.spacing << " m=" << geo.lattice.mass
          << " |G1|=" << geo.region1.size() << " |G2|=" << geo.region2.size()
          << " sep=" << region_separation(geo.region1, geo.region2, geo.lattice);
        r.geometry = g.str();
    }

    CheckResult iso = check_isotony(scheme, geo.region1, geo.region1.dilated(2), geo.lattice);
    r.isotony_ok = iso.ok;
    r.isotony_residual = iso.residual;

    CheckResult cov =
        check_translation_covariance(scheme, geo.region1, geo.covariance_shift, geo.lattice);
    r.translation_covariance_ok = cov.ok;
    r.translation_covariance_residual = cov.residual;

    r.weak_microcausality_defect =
        check_weak_microcausality(scheme, geo.region1, geo.region2, geo.lattice);
    r.strong_microcausality_defect =
        check_strong_microcausality(scheme, geo.region1, geo.region2, geo.times, geo.lattice);

    // Local number operator: N(f) is phase-invariant, so it can be affiliated
    // with the local algebra only if the local one-particle subspace is closed
    // under the phase rotation.  Measure the leakage of the rotated generators.
    if (scheme == SchemeKind::Standard) {
        double leak = 0.0;
        LocalSubspace sub = local_subspace(scheme, geo.region1, geo.lattice);
        for (const auto& f : sub.raw_phase_basis) {
            PhaseVector jf = complex_structure_j(f);
            double peak = std::max(jf.phi.cwiseAbs().maxCoeff(), jf.pi.cwiseAbs().maxCoeff());
            leak = std::max(leak, mass_outside(jf, geo.region1) / peak);
        }
        r.phase_rotation_leakage = leak;
    } else {
        double leak = 0.0;
        LocalSubspace sub = local_subspace(scheme, geo.region1, geo.lattice);
        for (const auto& u : sub.basis) {
            ComplexMode rotated = u * Complex(0.0, 1.0);
            leak = std::max(leak, mass_outside(rotated, geo.region1) /
                                      rotated.values.cwiseAbs().maxCoeff());
        }
        r.phase_rotation_leakage = leak;
    }
    r.local_number_op_available = r.phase_rotation_leakage <= 1e-10;

    // Fock probes on the small lattice: cyclicity and separating behavior.
    {
        std::vector<ComplexMode> modes = {
            ComplexMode::site_indicator(geo.fock_lattice, geo.fock_site1),
            ComplexMode::site_indicator(geo.fock_lattice, geo.fock_site2)};
        FockSpace space(modes, geo.fock_cutoff);
        Region fg1 = Region::interval(geo.fock_lattice, geo.fock_site1, 1);
        bool ladders = scheme == SchemeKind::NewtonWigner;
        std::vector<LabeledOperator> labeled = local_generators(space, scheme, fg1, ladders);
        std::vector<FockOperator> gens;
        gens.reserve(labeled.size());
        for (auto& lo : labeled) gens.push_back(lo.op);
        r.fock_dim = space.dim();
        r.local_factor_dim = geo.fock_cutoff + 1;
        r.vacuum_cyclic_rank = cyclicity_rank(space, gens, 1e-8);
        SeparatingProbe probe = separating_defect(space, gens, FockVector::vacuum(space),
                                                  geo.separating_samples, rng);
        r.vacuum_separating_defect = probe.defect;
        std::ostringstream w;
        for (std::size_t i = 0; i < probe.witness.size(); ++i)
            w << (i ? " " : "") << labeled[probe.witness[i]].label;
        r.separating_witness = w.str();
    }

    r.reasons.clear();
    if (!r.isotony_ok) r.reasons.push_back("isotony violated");
    if (!r.translation_covariance_ok) r.reasons.push_back("translation covariance violated");
    if (r.weak_microcausality_defect > 1e-14) r.reasons.push_back("weak microcausality defect");
    if (r.strong_microcausality_defect >= 1e-6) r.reasons.push_back("strong microcausality defect");
    if (!r.local_number_op_available) r.reasons.push_back("no local number operator");
    r.fundamentality_verdict = r.reasons.empty();
    return r;
}

}  // namespace kglab
