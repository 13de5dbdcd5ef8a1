#ifndef KGLAB_EXPERIMENTS_HPP
#define KGLAB_EXPERIMENTS_HPP

#include "kglab/schemes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kglab {

/// One lattice choice inside a sweep.
struct SweepLattice {
    double mass = 0.0;
    int n_sites = 0;
    double spacing = 0.0;

    LatticeConfig config() const { return LatticeConfig(n_sites, spacing, mass); }
};

/// Batch-run configuration.  JSON with a versioned schema; every field has
/// a default that reproduces the headline experiments, so an empty config
/// is a valid one.
struct RunConfig {
    int schema_version = 1;
    std::uint64_t seed = 20250801;
    std::string out_dir = "out";

    // workhorse lattice for vacuum-structure experiments
    LatticeConfig lattice{128, 0.1, 1.0};

    // truncated-Fock geometry: two single-site regions on a small lattice
    LatticeConfig fock_lattice{32, 0.25, 1.0};
    int fock_n_modes = 2;
    int fock_cutoff = 3;
    int fock_site1 = 8;
    int fock_site2 = 12;
    int separating_samples = 500;

    // microcausality geometry: two intervals on a fine lattice plus a
    // spacelike time window
    LatticeConfig geometry_lattice{2048, 0.025, 1.0};
    int region1_start = 0, region1_length = 20;
    int region2_start = 179, region2_length = 20;
    double time_min = -1.75, time_max = 1.75;
    int time_points = 5;
    int covariance_shift = 700;

    // sweeps
    std::vector<SweepLattice> antilocality_fits{{0.5, 2048, 0.1}, {1.0, 1024, 0.1}, {2.0, 1024, 0.05}};
    int antilocality_tail_samples = 50;
    LatticeConfig antilocality_tail_lattice{256, 0.1, 1.0};

    LatticeConfig vacuum_decay_lattice{1024, 0.1, 1.0};
    std::vector<int> purity_region_sizes{1, 2, 4, 8};

    std::vector<SweepLattice> correlation_fits{{0.5, 1024, 0.1}, {1.0, 1024, 0.05}, {2.0, 1024, 0.05}};

    std::vector<double> times() const;
    Region region1() const { return Region::interval(geometry_lattice, region1_start, region1_length); }
    Region region2() const { return Region::interval(geometry_lattice, region2_start, region2_length); }
    ExperimentGeometry geometry() const;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
};

/// Each runner writes its CSV tables and one JSON report under
/// cfg.out_dir and returns a one-line summary.  Identical config and seed
/// give byte-identical files.
std::string run_antilocality(const RunConfig& cfg);
std::string run_vacuum(const RunConfig& cfg);
std::string run_cyclicity(const RunConfig& cfg);
std::string run_microcausality(const RunConfig& cfg);
std::string run_compare_schemes(const RunConfig& cfg);
std::string run_correlation(const RunConfig& cfg);

/// Dispatch by subcommand name; throws on unknown names.
std::string run_experiment(const std::string& name, const RunConfig& cfg);

/// Decimal formatting used in every CSV cell: 12 significant digits.
std::string csv_number(double v);

}  // namespace kglab

#endif
