// Command-line front end: parameter reports, construction builds,
// verification suites, and plot-data exports.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "badapprox/analysis.hpp"
#include "badapprox/cantor.hpp"
#include "badapprox/covering.hpp"
#include "badapprox/io.hpp"

namespace ba = badapprox;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitShortfall = 4;
constexpr int kExitDepthExhausted = 5;
constexpr int kExitVerification = 6;

struct Cli {
    std::string config_path;
    std::string out_dir;
    long depth = -1;
    long seed = -1;
    long samples = -1;
};

ba::RunConfig effective_config(const Cli& cli) {
    ba::RunConfig c = cli.config_path.empty() ? ba::RunConfig{} : ba::load_config(cli.config_path);
    if (!cli.out_dir.empty()) c.output_dir = cli.out_dir;
    if (cli.depth >= 0) c.max_level = cli.depth;
    if (cli.seed >= 0) c.seed = cli.seed;
    if (cli.samples >= 0) c.samples = cli.samples;
    return c;
}

int cmd_params(const Cli& cli) {
    ba::RunConfig c = effective_config(cli);
    ba::ConstructionParams P = ba::resolve_params(c);
    std::cout << "tau = (" << ba::rat_str(P.weights.tau1) << ", " << ba::rat_str(P.weights.tau2)
              << ")\n";
    std::cout << "rho = (" << ba::rat_str(P.exps.rho1) << ", " << ba::rat_str(P.exps.rho2)
              << ")\n";
    std::cout << "N = " << P.N << "\nt = " << P.t << "\n";
    std::cout << "c(N) = (" << ba::rat_str(P.cN(1)) << ", " << ba::rat_str(P.cN(2)) << ")\n";
    for (long n = 1; n <= c.max_level; ++n)
        std::cout << "level " << n << ": ell = (" << P.ell(n, 1) << ", " << P.ell(n, 2)
                  << "), delta = (" << ba::rat_str(P.delta(n, 1)) << ", "
                  << ba::rat_str(P.delta(n, 2)) << ")\n";
    std::cout << "s = " << ba::rat_str(ba::dim_A2(P.weights)) << "\n";
    std::cout << "s_rho = " << ba::rat_str(ba::s_rho(P.weights, P.exps)) << "\n";
    return 0;
}

struct BuiltRun {
    ba::ConstructionParams P;
    ba::LevelState state;
    ba::MassTree tree;
};

BuiltRun build_all(const ba::RunConfig& c) {
    ba::ConstructionParams P = ba::resolve_params(c);
    ba::LevelState state = ba::make_level0(P, c.window);
    for (long n = 1; n <= c.max_level; ++n) {
        std::cerr << "building level " << n << "\n";
        state = ba::build_level(state);
    }
    std::cerr << "growing mass tree to depth " << c.max_level << "\n";
    ba::MassTree tree = ba::grow_tree(state, c.root_region, c.epsilon, c.max_level);
    return {P, std::move(state), std::move(tree)};
}

int cmd_build(const Cli& cli) {
    ba::RunConfig c = effective_config(cli);
    BuiltRun run = build_all(c);
    fs::create_directories(c.output_dir);
    ba::write_json(c.output_dir + "/levels.json", ba::export_levels(run.state));
    ba::write_json(c.output_dir + "/tree.json", ba::export_tree(run.tree));
    ba::write_ledger_csv(c.output_dir + "/ledger.csv", ba::measure_ledger(run.state));
    std::cerr << "artifacts written to " << c.output_dir << "\n";
    return 0;
}

int cmd_verify(const Cli& cli) {
    ba::RunConfig c = effective_config(cli);
    BuiltRun run = build_all(c);
    const ba::ConstructionParams& P = run.P;
    const ba::MassTree& tree = run.tree;
    bool ok = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        ok = ok && pass;
    };

    {
        ba::Rat worst = 1;
        bool pass = true;
        for (const auto& layer : tree.layers) {
            ba::Rat total = 0;
            for (const auto& v : layer) total += v.mass;
            if (total != 1) pass = false;
        }
        for (size_t n = 1; n < tree.layers.size(); ++n) {
            std::vector<ba::Rat> child_sum(tree.layers[n - 1].size(), ba::Rat(0));
            for (const auto& v : tree.layers[n]) child_sum[v.parent] += v.mass;
            for (size_t i = 0; i < child_sum.size(); ++i)
                if (child_sum[i] != tree.layers[n - 1][i].mass) pass = false;
        }
        report("mass-conservation", pass, std::to_string(tree.layers.size()) + " layers");
        (void)worst;
    }

    {
        bool pass = true;
        long pairs = 0;
        for (const auto& layer : tree.layers)
            for (size_t i = 0; i < layer.size(); ++i)
                for (size_t j = i + 1; j < layer.size(); ++j) {
                    ++pairs;
                    if (ba::rect_intersects(ba::node_shrink(P, layer[i]),
                                            ba::node_shrink(P, layer[j])))
                        pass = false;
                }
        report("layer-disjointness", pass, std::to_string(pairs) + " pairs checked");
    }

    {
        bool pass = true;
        long checked = 0;
        for (size_t n = 1; n < tree.layers.size(); ++n)
            for (const auto& v : tree.layers[n]) {
                const auto& parent = tree.layers[n - 1][v.parent];
                ba::RatRect host = parent.cell ? *parent.cell : *parent.nested_survivor;
                ++checked;
                if (!ba::rect_contains_rect(ba::to_real(host), ba::node_shrink(P, v))) pass = false;
            }
        report("nesting", pass, std::to_string(checked) + " child links");
    }

    {
        // mu(R) <= C1 d(R)^{-3+eps} with C1 = 36 / (c1 c2), exact.
        ba::Rat c1 = ba::nesting_constant(P);
        ba::Rat C1 = ba::Rat(36) / ba::Rat(c1 * ba::Rat(3, 400));
        bool pass = true;
        long checked = 0;
        for (size_t n = 1; n < tree.layers.size(); ++n)
            for (const auto& v : tree.layers[n]) {
                ++checked;
                ba::Real rhs = ba::Rat(C1) * ba::Real::pow(v.center.q, ba::Rat(-3) + tree.epsilon);
                if (!(ba::Real(v.mass) <= rhs)) pass = false;
            }
        report("node-mass-bound", pass, std::to_string(checked) + " nodes");
    }

    {
        // Same-layer separation: any ball meeting two distinct shrinks has
        // radius >= d^{-rho1} of the smaller-q member.
        bool pass = true;
        long pairs = 0;
        for (const auto& layer : tree.layers)
            for (size_t i = 0; i < layer.size(); ++i)
                for (size_t j = i + 1; j < layer.size(); ++j) {
                    ++pairs;
                    if (!ba::separation_holds(P, layer[i], layer[j])) pass = false;
                }
        report("separation", pass, std::to_string(pairs) + " pairs");
    }

    {
        auto rows = ba::measure_ledger(run.state);
        bool pass = true;
        ba::Rat cum = 0, cumbound = 0;
        for (const auto& r : rows) {
            cum += r.removed_exact;
            cumbound += r.paper_bound;
            if (r.removed_exact > r.paper_bound) pass = false;
        }
        if (cum > cumbound) pass = false;
        report("measure-ledger", pass,
               "cumulative removed " + ba::rat_str(cum) + " <= " + ba::rat_str(cumbound));
    }

    {
        bool pass = true;
        long checked = 0;
        for (const auto& v : tree.layers.back()) {
            ++checked;
            ba::RatVec2 x{v.center.x1(), v.center.x2()};
            if (!ba::survives(run.state, x)) pass = false;
            auto chain = ba::membership_witnesses(tree, x);
            if (chain.size() != tree.layers.size()) pass = false;
        }
        report("containment", pass, std::to_string(checked) + " deepest centers");
    }

    if (tree.layers.size() >= 3) {
        try {
            ba::Rat r_hi = ba::Rat(c.root_region.halfwidth.x1);
            ba::Rat r_lo = r_hi / ba::Rat(ba::BigInt(1) << 30);
            auto rep = ba::holder_experiment(tree, c.samples, r_lo, r_hi, c.seed);
            ba::Rat threshold = ba::Rat(rep.s_rho_value - 2 * rep.epsilon);
            bool pass = rep.fitted_slope >= threshold.get_d() - 0.25;
            report("holder-trend", pass,
                   "slope " + std::to_string(rep.fitted_slope) + " vs threshold " +
                       ba::rat_str(threshold) + " - 1/4 over " + std::to_string(rep.sample_count) +
                       " samples");
        } catch (const ba::VerificationError& e) {
            report("holder-trend", false, e.what());
        }
    }

    return ok ? 0 : kExitVerification;
}

int cmd_export_plot(const Cli& cli) {
    ba::RunConfig c = effective_config(cli);
    BuiltRun run = build_all(c);
    fs::create_directories(c.output_dir);
    ba::write_layer_outlines_csv(c.output_dir + "/layer_outlines.csv", run.tree);
    ba::Rat r_hi = ba::Rat(c.root_region.halfwidth.x1);
    ba::Rat r_lo = r_hi / ba::Rat(ba::BigInt(1) << 30);
    auto samples = ba::sample_masses(run.tree, c.samples, r_lo, r_hi, c.seed);
    ba::write_mass_samples_csv(c.output_dir + "/holder_scatter.csv", samples);
    ba::write_ledger_csv(c.output_dir + "/ledger.csv", ba::measure_ledger(run.state));
    std::cerr << "plot data written to " << c.output_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted badly-approximable set construction toolkit"};
    app.require_subcommand(1);
    Cli cli;
    for (auto* sub : {app.add_subcommand("params", "print resolved parameter tables"),
                      app.add_subcommand("build", "run the construction and write artifacts"),
                      app.add_subcommand("verify", "rebuild and check all invariants"),
                      app.add_subcommand("export-plot", "write plot-ready CSV data")}) {
        sub->add_option("--config", cli.config_path, "config file (key = value)");
        sub->add_option("--out", cli.out_dir, "output directory");
        sub->add_option("--depth", cli.depth, "construction depth");
        sub->add_option("--seed", cli.seed, "sampling seed");
        sub->add_option("--samples", cli.samples, "sample count");
    }
    // Worker-count hint; present for interface stability, no semantic effect.
    if (std::getenv("BADAPPROX_THREADS") != nullptr) {}

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("params")) return cmd_params(cli);
        if (app.got_subcommand("build")) return cmd_build(cli);
        if (app.got_subcommand("verify")) return cmd_verify(cli);
        if (app.got_subcommand("export-plot")) return cmd_export_plot(cli);
    } catch (const ba::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ba::ConstructionInfeasibleError& e) {
        std::cerr << "construction infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ba::DensityShortfallError& e) {
        std::cerr << "density shortfall: " << e.what() << "\n";
        return kExitShortfall;
    } catch (const ba::DepthExhaustedError& e) {
        std::cerr << "depth exhausted: " << e.what() << "\n";
        return kExitDepthExhausted;
    } catch (const ba::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerification;
    }
    return 0;
}
