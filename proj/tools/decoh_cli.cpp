#include "decoh/errors.hpp"
#include "decoh/harness/config.hpp"
#include "decoh/harness/io.hpp"
#include "decoh/harness/runs.hpp"
#include "decoh/harness/validate.hpp"
#include "decoh/parallel.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace decoh;
using namespace decoh::harness;

namespace {

struct Common {
    std::string config;
    std::string out;
    int workers = 1;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON configuration file")->required();
    sub->add_option("--out", c.out, "output directory (overrides output_dir)");
    sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for random spot checks (overrides seed)");
}

SimulationConfig prepare(const Common& c, std::string& out_dir) {
    set_workers(c.workers);
    SimulationConfig cfg = load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    out_dir = c.out.empty() ? cfg.output_dir : c.out;
    ensure_directory(out_dir);
    return cfg;
}

std::string in(const std::string& dir, const std::string& name) { return (std::filesystem::path(dir) / name).string(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heavy-light scattering decoherence engine"};
    app.require_subcommand(1);
    Common common;
    std::string stage = "psia";

    auto* evolve = app.add_subcommand("evolve", "exact and approximate evolution at the configured times");
    add_common(evolve, common);
    evolve->add_option("--stage", stage, "approximant compared with the exact field")
        ->check(CLI::IsMember({"psi1", "psi2", "psia", "exact"}));
    auto* sweep = app.add_subcommand("sweep-eps", "error scaling over the configured mass ratios");
    add_common(sweep, common);
    auto* lmap = app.add_subcommand("lambda-map", "decoherence parameter over alpha delta and k0 / alpha");
    add_common(lmap, common);
    auto* fringes = app.add_subcommand("fringes", "heavy-particle density at the crossing time");
    add_common(fringes, common);
    auto* validate = app.add_subcommand("validate", "run every acceptance check");
    add_common(validate, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : static_cast<int>(ExitCode::config);
    }

    try {
        std::string out;
        const SimulationConfig cfg = prepare(common, out);
        if (*evolve) {
            const auto res = run_evolve(cfg, parse_stage(stage), out);
            const auto summary = evolve_summary(res);
            write_json(in(out, "summary.json"), summary);
            std::cout << summary.dump(2) << "\n";
            for (const auto& pt : res.points)
                if (pt.drift > cfg.tol.norm_drift)
                    throw AccuracyError("norm drift " + format_double(pt.drift) + " at t = " + format_double(pt.t) +
                                        " exceeds " + format_double(cfg.tol.norm_drift));
        } else if (*sweep) {
            if (cfg.sweep.epsilons.size() < 3)
                std::cerr << "warning: " << cfg.sweep.epsilons.size()
                          << " mass ratio(s); the slope fit wants at least 3\n";
            const auto times = cfg.times.resolve(cfg.base);
            const auto res = run_sweep(cfg.base, cfg, cfg.sweep.epsilons, times, cfg.sweep.stages);
            write_sweep(res, out);
            write_json(in(out, "timing.json"), {{"seconds", res.seconds}});
            std::cout << sweep_summary(res).dump(2) << "\n";
            for (const auto& pt : res.points)
                if (!pt.failure.empty()) throw AccuracyError(pt.failure);
                else if (pt.drift > cfg.tol.norm_drift)
                    throw AccuracyError("norm drift " + format_double(pt.drift) + " exceeds " +
                                        format_double(cfg.tol.norm_drift));
        } else if (*lmap) {
            const auto m = run_lambda_map(cfg.base.spec.g, cfg.lambda_map);
            write_lambda_map(m, out);
            std::cout << lambda_map_summary(m).dump(2) << "\n";
        } else if (*fringes) {
            const auto p = run_fringes(cfg.fringes);
            write_fringes(p, out);
            std::cout << fringe_summary(p).dump(2) << "\n";
            for (const auto& w : p.regime.warnings) std::cerr << "regime warning: " << w << "\n";
        } else if (*validate) {
            const auto rep = run_validate(cfg, out);
            std::cout << rep.summary();
            if (!rep.passed()) return static_cast<int>(ExitCode::accuracy);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::accuracy);
    }
    return 0;
}
