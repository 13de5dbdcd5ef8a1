#include "kglab/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

bool quiet_mode() {
    const char* level = std::getenv("KGLAB_LOG");
    return level != nullptr && std::string(level) == "quiet";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kglab - lattice experiments on localization schemes for the free scalar field"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON run configuration (defaults used when omitted)");
    app.add_option("--out", out_dir, "output directory override");
    app.add_option("--seed", seed, "random seed override")->each([&](const std::string&) {
        seed_set = true;
    });

    struct Sub {
        const char* name;
        const char* blurb;
    };
    const Sub subs[] = {
        {"antilocality", "tail norms and kernel decay rates of the one-particle energy operator"},
        {"vacuum", "vacuum factorization defects, purities and correlation decay"},
        {"cyclicity", "cyclic/separating rank probes on the truncated Fock space"},
        {"microcausality", "weak and strong commutator defects for both schemes"},
        {"compare-schemes", "full fundamentality reports for both schemes"},
        {"correlation", "vacuum correlation length against the inverse mass"},
    };

    std::vector<double> mass_sweep;
    std::string picked;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.blurb);
        sub->fallthrough();
        if (std::string(s.name) == "antilocality" || std::string(s.name) == "correlation")
            sub->add_option("--sweep-mass", mass_sweep, "masses to fit (overrides config sweep)")
                ->delimiter(',');
        sub->callback([&picked, name = std::string(s.name)] { picked = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        kglab::RunConfig cfg =
            config_path.empty() ? kglab::RunConfig() : kglab::RunConfig::from_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed_set) cfg.seed = seed;
        if (!mass_sweep.empty()) {
            // rescale the default sweep geometry so every mass keeps
            // N*a*m roughly at the default fit quality
            auto rescale = [&](std::vector<kglab::SweepLattice>& fits) {
                std::vector<kglab::SweepLattice> out;
                for (double m : mass_sweep) {
                    kglab::SweepLattice s;
                    s.mass = m;
                    s.spacing = 0.05;
                    double target = 100.0 / m;  // physical size giving a clean fit window
                    int n = 256;
                    while (n * s.spacing < target && n < 8192) n *= 2;
                    s.n_sites = n;
                    out.push_back(s);
                }
                fits = std::move(out);
            };
            if (picked == "antilocality") rescale(cfg.antilocality_fits);
            if (picked == "correlation") rescale(cfg.correlation_fits);
        }
        std::string summary = kglab::run_experiment(picked, cfg);
        if (!quiet_mode()) std::cout << summary << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
