#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sojourn/config.hpp"
#include "sojourn/core.hpp"
#include "sojourn/corpus.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/runner.hpp"
#include "sojourn/version.hpp"

namespace {

// exit-code contract: 0 pass, 1 acceptance fail, 2 config error, 3
// runtime/budget error
constexpr int kExitPass = 0;
constexpr int kExitAcceptanceFail = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

int classify(const sojourn::Error& e) {
    switch (e.code()) {
        case sojourn::ErrorCode::config:
        case sojourn::ErrorCode::invalid_argument:
            return kExitConfigError;
        default:
            return kExitRuntimeError;
    }
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    auto ec = sojourn::experiment_from_config(sojourn::Config::parse_file(config_path));
    auto result = sojourn::run_experiment(ec, out_dir);
    if (!result.report_path.empty()) std::cout << "report: " << result.report_path << "\n";
    std::cout << (result.accepted ? "acceptance: pass" : "acceptance: FAIL") << "\n";
    return result.accepted ? kExitPass : kExitAcceptanceFail;
}

int cmd_corpus(const sojourn::CorpusOptions& options, const std::string& golden_path, bool update_golden) {
    auto results = sojourn::run_corpus(options);
    std::printf("%-5s %-12s %-6s %-12s %8s  %s\n", "id", "kind", "pass", "metric", "secs", "detail");
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%-5s %-12s %-6s %-12.6g %8.2f  %s\n", r.id.c_str(), r.kind.c_str(), r.pass ? "PASS" : "FAIL",
                    r.metric, r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }

    auto summary = sojourn::corpus_summary(results, options.seed);
    if (!options.out_dir.empty())
        sojourn::write_file(options.out_dir + "/corpus_summary.json", summary.dump());

    if (update_golden && !golden_path.empty()) {
        sojourn::write_file(golden_path, summary.dump());
        std::cout << "golden updated: " << golden_path << "\n";
    } else if (!golden_path.empty()) {
        auto diffs = sojourn::diff_against_golden(results, sojourn::read_file(golden_path));
        if (!diffs.empty()) {
            std::cout << "golden mismatch (" << golden_path << "):\n";
            for (const auto& d : diffs) std::cout << "  " << d << "\n";
            return kExitAcceptanceFail;
        }
        std::cout << "golden match: " << golden_path << "\n";
    }
    return all_pass ? kExitPass : kExitAcceptanceFail;
}

int cmd_describe(const std::string& family) {
    using sojourn::SystemSpec;
    struct Row {
        const char* name;
        const char* text;
    };
    static const Row rows[] = {
        {"rotation",
         "circle map x -> x + alpha (mod 1); also available as the circle flow dx/dt = alpha\n"
         "  kind: discrete-map | ode-semiflow, metric: circle, parameters: alpha\n"
         "  alpha = 1/p gives exact period-p orbits; irrational alpha equidistributes"},
        {"logistic",
         "interval map x -> r x (1-x) on [0,1]\n"
         "  kind: discrete-map, metric: euclidean, parameters: r (default 4)\n"
         "  r = 4 is chaotic with known fixed points 0 and 3/4"},
        {"tent",
         "tent map x -> mu * min(x, 1-x)\n"
         "  kind: discrete-map, metric: euclidean, parameters: mu (default 2)"},
        {"linear-contraction",
         "x -> factor * x with |factor| < 1; every orbit converges to the fixed point 0\n"
         "  kind: discrete-map, metric: euclidean, parameters: factor (default 0.5)"},
        {"stable-focus-ode",
         "planar spiral sink dx/dt = lambda x - omega y, dy/dt = omega x + lambda y (lambda < 0)\n"
         "  kind: ode-semiflow (fixed-step RK4), metric: euclidean, parameters: lambda, omega"},
        {"full-shift-sequence",
         "left shift on one-sided binary sequences, metric d = 2^-k (k = first disagreement)\n"
         "  kind: symbolic-shift; initial points by spec: periodic:01, preperiodic:111|01,\n"
         "  finite:0110, sturmian:<alpha>[,<beta>], shadowing[:m0], growing-gaps"},
    };
    for (const auto& row : rows) {
        if (family.empty() || family == row.name) {
            std::cout << row.name << ": " << row.text << "\n";
            if (!family.empty()) return kExitPass;
        }
    }
    if (!family.empty()) {
        std::cerr << "unknown family: " << family << "\n";
        return kExitConfigError;
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal-center-of-attraction estimation and verification"};
    app.set_version_flag("--version", sojourn::kVersion);

    std::uint64_t seed = 42;
    int threads = 0;
    std::string out_dir;
    app.add_option("--seed", seed, "seed for all sampled computations");
    app.add_option("--threads", threads, "worker cap (0 = all cores)");
    app.add_option("--out-dir", out_dir, "directory for reports and CSV outputs");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "sectioned key=value config")->required();

    std::string filter, golden_path;
    bool update_golden = false;
    auto* corpus = app.add_subcommand("corpus", "run the built-in oracle corpus");
    corpus->add_option("--filter", filter, "run only criteria of this kind (density, mca, chaos, ...)");
    corpus->add_option("--golden", golden_path, "compare the summary against this golden file");
    corpus->add_flag("--update-golden", update_golden, "rewrite the golden file from this run");

    std::string family;
    auto* describe = app.add_subcommand("describe", "describe a built-in system family");
    describe->add_option("family", family, "family name (all when omitted)");

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    sojourn::core::set_max_threads(threads);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (corpus->parsed()) {
            sojourn::CorpusOptions options;
            options.seed = seed;
            options.filter = filter;
            options.out_dir = out_dir;
            return cmd_corpus(options, golden_path, update_golden);
        }
        if (describe->parsed()) return cmd_describe(family);
    } catch (const sojourn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitPass;
}
