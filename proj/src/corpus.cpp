#include "sojourn/corpus.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "sojourn/chaos.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/mca.hpp"
#include "sojourn/recurrence.hpp"
#include "sojourn/runner.hpp"
#include "sojourn/version.hpp"

namespace sojourn {

namespace {

constexpr double kGolden = 0.61803398874989484820;  // (sqrt 5 - 1)/2

const CheckpointPolicy kLinear{20, 0.5, CheckpointPolicy::Spacing::linear};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// One corpus system with its reference orbit and estimate.
struct CorpusEntry {
    std::string name;
    SystemSpec system;
    State x0;
    double delta = 1.0;
    std::uint64_t horizon = 10'000;
    BoxPartition partition;
    double delta_pos = 0.0;
    OrbitSample orbit;
    McaEstimate estimate;
};

CorpusEntry make_entry(std::string name, SystemSpec system, State x0, double delta, std::uint64_t horizon,
                       BoxPartition partition, double delta_pos = 0.0) {
    auto orbit = sample_orbit(system, x0, delta, horizon);
    auto estimate = estimate_mca(orbit, partition, delta_pos, kLinear);
    return CorpusEntry{std::move(name),      std::move(system), std::move(x0),    delta,
                       horizon,              std::move(partition), delta_pos,     std::move(orbit),
                       std::move(estimate)};
}

// All estimate-bearing corpus members, built once and shared by C4, C10,
// C11.
struct CorpusContext {
    std::vector<CorpusEntry> entries;

    const CorpusEntry& by_name(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return e;
        throw InvalidArgumentError("no corpus entry named " + name);
    }
};

CorpusContext build_context() {
    CorpusContext ctx;
    ctx.entries.push_back(make_entry("contraction", SystemSpec::contraction(0.5), DenseState{1.0}, 1.0, 10'000,
                                     BoxPartition::boxes({0.0}, {1.0}, {64})));
    for (int p : {2, 3, 5})
        ctx.entries.push_back(make_entry("period-" + std::to_string(p), SystemSpec::rotation(1.0 / p),
                                         DenseState{1.0 / 128.0}, 1.0, 10'000, BoxPartition::circle(64)));
    ctx.entries.push_back(make_entry("rotation", SystemSpec::rotation(kGolden), DenseState{0.0}, 1.0, 100'000,
                                     BoxPartition::circle(64)));
    ctx.entries.push_back(make_entry("logistic", SystemSpec::logistic(4.0), DenseState{0.437016247040312}, 1.0,
                                     100'000, BoxPartition::boxes({0.0}, {1.0}, {64})));
    ctx.entries.push_back(make_entry("stable-focus", SystemSpec::stable_focus(-0.5, 2.0), DenseState{1.0, 0.0}, 0.1,
                                     10'000, BoxPartition::boxes({-1.36, -1.36}, {1.20, 1.20}, {16, 16})));
    ctx.entries.push_back(make_entry("preperiodic-shift", SystemSpec::full_shift(),
                                     SymbolicState{parse_sequence_spec("preperiodic:111|01"), 0}, 1.0, 10'000,
                                     BoxPartition::cylinders(2)));
    ctx.entries.push_back(make_entry("shadowing-shift", SystemSpec::full_shift(),
                                     SymbolicState{shadowing_point(4), 0}, 1.0, 100'000, BoxPartition::cylinders(2),
                                     0.01));
    return ctx;
}

using CriterionFn = std::function<void(CriterionResult&)>;

void expect(bool cond, const std::string& what, CriterionResult& r) {
    if (!cond) {
        r.pass = false;
        r.detail += (r.detail.empty() ? "" : "; ") + std::string("FAILED: ") + what;
    }
}

std::vector<std::uint32_t> expected_cells(const BoxPartition& partition, const std::vector<State>& points) {
    std::vector<std::uint32_t> cells;
    for (const auto& s : points) {
        auto c = partition.locate(s);
        if (c) cells.push_back(*c);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return cells;
}

// ---- criteria -------------------------------------------------------------

void c1_density_evens(CriterionResult& r) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t k = 0; k <= 10'000; k += 2) members.push_back(k);
    TimeSet evens(TimeSet::Mode::discrete, std::move(members), 1.0, 10'000.0);
    auto d = density(evens, kLinear);
    double dev = std::max(std::fabs(d.lower - 0.5), std::fabs(d.upper - 0.5));
    r.metric = dev;
    r.detail = "lower=" + fmt(d.lower) + " upper=" + fmt(d.upper);
    expect(dev <= 1e-3, "evens density deviates from 1/2 by " + fmt(dev), r);
}

void c2_scaling(CriterionResult& r) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t k = 0; k < 10'000; k += 2) members.push_back(k);
    TimeSet blocks(TimeSet::Mode::continuous, members, 1.0, 10'000.0);
    auto base = density(blocks, kLinear);
    double worst = 0.0;
    for (double tau : {0.5, 2.0, std::numbers::pi}) {
        auto scaled = density(blocks.scaled(tau), kLinear);
        worst = std::max(worst, std::fabs(scaled.upper - base.upper));
        worst = std::max(worst, std::fabs(scaled.lower - base.lower));
    }
    r.metric = worst;
    r.detail = "base=" + fmt(base.upper) + " worst scaling deviation=" + fmt(worst);
    expect(worst <= 0.02, "scaling changed density by " + fmt(worst), r);

    TimeSet evens(TimeSet::Mode::discrete, members, 1.0, 10'000.0);
    bool threw = false;
    try {
        evens.scaled(0.5);
    } catch (const UnsupportedOperationError&) {
        threw = true;
    }
    expect(threw, "discrete scaling was not rejected", r);
}

void c3_mca_oracles(const CorpusContext& ctx, CriterionResult& r) {
    double worst_dev = 0.0;
    auto check_entry = [&](const CorpusEntry& e, const std::vector<std::uint32_t>& want, double share,
                           double share_tol) {
        expect(e.estimate.cells == want, e.name + ": flagged cells differ from the oracle set", r);
        if (share_tol > 0.0) {
            for (std::uint32_t c : e.estimate.cells) {
                double dev = std::fabs(e.estimate.cell_upper[c] - share);
                worst_dev = std::max(worst_dev, dev);
                expect(dev <= share_tol, e.name + ": cell density off by " + fmt(dev), r);
            }
        }
        double eps = 2.0 * e.partition.cell_diameter();
        auto center = verify_center(e.orbit, e.partition, e.estimate.cells, eps, 0.01);
        expect(center.ok, e.name + ": verify_center lower=" + fmt(center.density.lower), r);
        auto minimal = verify_minimality(e.orbit, e.estimate, 0.01);
        expect(minimal.ok, e.name + ": verify_minimality found removable cell", r);
    };

    // contraction: exactly the cell containing 0 (its density tends to 1,
    // there is no per-cell share to pin)
    check_entry(ctx.by_name("contraction"), {0}, 0.0, -1.0);
    // period-p points: p cells of density 1/p each
    for (int p : {2, 3, 5}) {
        const auto& e = ctx.by_name("period-" + std::to_string(p));
        std::vector<State> pts;
        for (int j = 0; j < p; ++j) pts.push_back(DenseState{1.0 / 128.0 + static_cast<double>(j) / p});
        check_entry(e, expected_cells(e.partition, pts), 1.0 / p, 1e-2);
    }
    // golden rotation at horizon 1e6: all 64 cells, density 1/64 each
    auto rotation = make_entry("rotation-1e6", SystemSpec::rotation(kGolden), DenseState{0.0}, 1.0, 1'000'000,
                               BoxPartition::circle(64));
    std::vector<std::uint32_t> all64(64);
    for (std::uint32_t c = 0; c < 64; ++c) all64[c] = c;
    check_entry(rotation, all64, 1.0 / 64.0, 1e-3);
    // eventually periodic shift point: exactly the two period-2 cylinders
    check_entry(ctx.by_name("preperiodic-shift"), {0b01, 0b10}, 0.5, 1e-2);

    r.metric = worst_dev;
    if (r.pass) r.detail = "worst per-cell density deviation=" + fmt(worst_dev);
}

void c4_invariance(const CorpusContext& ctx, CriterionResult& r) {
    int ok = 0;
    for (const auto& e : ctx.entries) {
        double eps = 2.0 * e.partition.cell_diameter();
        bool inv = check_invariance(e.system, e.estimate, 50, eps);
        expect(inv, e.name + ": estimate not invariant over 50 steps", r);
        ok += inv ? 1 : 0;
    }
    r.metric = static_cast<double>(ok) / static_cast<double>(ctx.entries.size());
    if (r.pass) r.detail = "all " + std::to_string(ok) + " corpus estimates invariant";
}

void c5_theta(CriterionResult& r) {
    auto flow = SystemSpec::rotation_flow(kGolden);
    auto orbit_a = sample_orbit(flow, DenseState{0.0}, 1.0, 1'000'000);
    auto orbit_b = sample_orbit(flow, DenseState{0.0}, 2.7, 370'370);
    auto agreement = theta_robustness(orbit_a, orbit_b, BoxPartition::circle(64), 0.0, kLinear);
    r.metric = agreement.score;
    r.detail = "agreement=" + fmt(agreement.score);
    expect(agreement.score >= 0.98, "theta agreement " + fmt(agreement.score) + " below 0.98", r);
}

void c6_genericity(const CorpusContext& ctx, std::uint64_t seed, CriterionResult& r) {
    double worst = 1.0;
    for (const char* name : {"rotation", "logistic"}) {
        const auto& e = ctx.by_name(name);
        auto probe = genericity_probe(e.system, e.estimate, uniform_sampler(e.partition), 100, e.horizon, seed);
        worst = std::min(worst, probe.fraction);
        expect(probe.fraction >= 0.95,
               std::string(name) + ": agreement fraction " + fmt(probe.fraction) + " below 0.95", r);
    }
    r.metric = worst;
    if (r.pass) r.detail = "min agreement fraction=" + fmt(worst);
}

void c7_li_yorke(std::uint64_t seed, CriterionResult& r) {
    auto logistic = SystemSpec::logistic(4.0);
    auto d = pair_diagnostics(logistic, DenseState{0.3}, DenseState{0.3 + 1e-9}, 100'000);
    r.metric = d.limsup_pair;
    r.detail = "liminf=" + fmt(d.liminf_pair) + " limsup=" + fmt(d.limsup_pair);
    expect(d.liminf_pair < 1e-3, "logistic pair liminf " + fmt(d.liminf_pair) + " not < 1e-3", r);
    expect(d.limsup_pair > 0.5, "logistic pair limsup " + fmt(d.limsup_pair) + " not > 0.5", r);

    auto rotation = SystemSpec::rotation(kGolden);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int positives = 0;
    for (int i = 0; i < 1000; ++i) {
        auto di = pair_diagnostics(rotation, DenseState{u(rng)}, DenseState{u(rng)}, 2000);
        if (is_li_yorke(di, 1e-3, 1e-2)) ++positives;
    }
    r.detail += " rotation_positives=" + std::to_string(positives);
    expect(positives == 0, std::to_string(positives) + " rotation pairs flagged Li-Yorke", r);
}

void c8_half_diameter(const CorpusContext& ctx, CriterionResult& r) {
    const auto& e = ctx.by_name("shadowing-shift");
    std::vector<State> candidates;
    for (std::uint32_t c : e.estimate.cells) candidates.push_back(e.partition.center(c));
    auto partner = find_li_yorke_partner(e.system, e.x0, candidates, e.horizon);
    expect(partner.found, "no Li-Yorke partner found in the period-2 minimal set", r);
    double diam = diameter(e.partition, e.estimate.cells);
    double bound = 0.5 * diam - e.partition.cell_diameter();
    r.metric = partner.best.limsup_point;
    r.detail = "limsup_point=" + fmt(partner.best.limsup_point) + " bound=" + fmt(bound);
    expect(partner.best.limsup_point >= bound,
           "limsup_point " + fmt(partner.best.limsup_point) + " below " + fmt(bound), r);
}

void c9_sensitivity(const CorpusContext& ctx, std::uint64_t seed, CriterionResult& r) {
    // artificial two-fixed-cell estimate: the identity rotation fixes every
    // point, so the scan constant reduces to the stated formula
    auto identity = SystemSpec::rotation(0.0);
    auto partition = BoxPartition::circle(64);
    McaEstimate artificial;
    artificial.partition = partition;
    artificial.cells = {5, 37};
    artificial.cell_upper.assign(64, 0.0);
    artificial.delta_pos = 0.5;
    artificial.horizon = 2000;
    artificial.theta = 1.0;
    auto scan_a = sensitivity_scan(identity, artificial, 2, 2, 2000, seed);
    double d_ab = partition.center_distance(5, 37);
    expect(std::fabs(scan_a.eps_hat - d_ab / 4.0) <= 1e-15,
           "two-cell eps_hat " + fmt(scan_a.eps_hat) + " != d(a,b)/4 = " + fmt(d_ab / 4.0), r);

    const auto& e = ctx.by_name("logistic");
    auto scan = sensitivity_scan(e.system, e.estimate, 8, 4, 20'000, seed);
    r.metric = scan.eps_hat;
    r.detail = "eps_hat=" + fmt(scan.eps_hat) + (scan.sensitive ? " all witnesses ok" : " witnesses missing");
    expect(scan.eps_hat > 0.1, "logistic eps_hat " + fmt(scan.eps_hat) + " not > 0.1", r);
    expect(scan.sensitive, "some anchor lacks a separation witness", r);
}

void c10_recurrence(const CorpusContext& ctx, CriterionResult& r) {
    struct Point {
        std::string name;
        double epsilon;
        double gap_bound;
        bool crosscheck;
    };
    // growing-gaps joins the chain checks only: its log-rate returns are a
    // deliberate boundary case for the density surrogates
    std::vector<Point> points = {
        {"rotation", 0.05, 21.0, true},    {"period-2", 2.0 / 64, 3.0, true}, {"period-3", 2.0 / 64, 4.0, true},
        {"period-5", 2.0 / 64, 6.0, true}, {"contraction", 0.05, 100.0, true}, {"logistic", 0.05, 2000.0, true},
        {"stable-focus", 0.1, 100.0, true}, {"preperiodic-shift", 0.5, 16.0, true},
        {"shadowing-shift", 0.5, 8.0, true},
    };

    int violations = 0, cross_ok = 0, cross_total = 0;
    auto run_point = [&](const std::string& name, const OrbitSample& orbit, const CorpusEntry* entry, double eps,
                         double gap_bound, bool crosscheck) {
        auto birkhoff = birkhoff_recurrent_test(orbit, eps, gap_bound);
        bool poisson = poisson_stable_test(orbit, eps);
        auto qwap = qwap_test(orbit, eps, 64);
        if (birkhoff.ok && !poisson) {
            ++violations;
            expect(false, name + ": birkhoff holds but poisson fails", r);
        }
        if (poisson && !qwap.ok) {
            ++violations;
            expect(false, name + ": poisson holds but qwap fails", r);
        }
        if (crosscheck && entry) {
            ++cross_total;
            CrosscheckParams params;
            params.horizon = entry->horizon;
            params.delta = entry->delta;
            params.delta_pos = entry->delta_pos;
            params.policy = kLinear;
            auto cross = prop_qwap_center_crosscheck(entry->system, entry->x0, entry->partition, params);
            if (cross.ok)
                ++cross_ok;
            else
                expect(false,
                       name + ": crosscheck disagrees (qwap=" + std::to_string(cross.qwap) +
                           " in_estimate=" + std::to_string(cross.in_estimate) + ")",
                       r);
        }
    };

    for (const auto& p : points) {
        const auto& e = ctx.by_name(p.name);
        run_point(p.name, e.orbit, &e, p.epsilon, p.gap_bound, p.crosscheck);
    }
    auto gg_system = SystemSpec::full_shift();
    auto gg_orbit = sample_orbit(gg_system, SymbolicState{growing_gap_point(), 0}, 1.0, 100'000);
    run_point("growing-gaps", gg_orbit, nullptr, 0.5, 1000.0, false);

    r.metric = violations == 0 && cross_ok == cross_total ? 1.0 : 0.0;
    if (r.pass)
        r.detail = "chain violations=0, crosscheck ok on " + std::to_string(cross_ok) + "/" +
                   std::to_string(cross_total) + " points";
}

void c11_multi(const CorpusContext& ctx, CriterionResult& r) {
    const double sqrt2 = std::sqrt(2.0);
    double worst = 1.0;
    for (const auto& e : ctx.entries) {
        for (std::initializer_list<double> times : {{1.0, 2.0}, {1.0, sqrt2}}) {
            double eps = 2.0 * e.partition.cell_diameter();
            auto d = multi_attraction_density(e.system, e.x0, e.estimate, std::vector<double>(times), eps, e.horizon,
                                              e.delta, kLinear);
            worst = std::min(worst, d.lower);
            expect(d.lower >= 0.99, e.name + ": intersection density lower " + fmt(d.lower) + " below 0.99", r);
        }
    }
    r.metric = worst;
    if (r.pass) r.detail = "min intersection lower=" + fmt(worst);
}

// Determinism: the report-producing pipeline run twice with one seed must
// be byte-identical.
const char* kDeterminismConfigs[] = {
    "[system]\n"
    "kind = discrete-map\n"
    "family = rotation\n"
    "alpha = 0.61803398874989484820\n"
    "[experiment]\n"
    "kind = mca\n"
    "x0 = 0.0\n"
    "horizon = 20000\n"
    "resolution = 64\n"
    "spacing = linear\n"
    "seed = SEED\n"
    "[accept]\n"
    "min_cells_count = 64\n"
    "[output]\n"
    "report = mca_rotation.json\n"
    "cells_csv = mca_rotation_cells.csv\n",

    "[experiment]\n"
    "kind = density\n"
    "set = evens\n"
    "horizon = 10000\n"
    "spacing = linear\n"
    "seed = SEED\n"
    "[accept]\n"
    "min_lower = 0.499\n"
    "max_upper = 0.501\n"
    "[output]\n"
    "report = density_evens.json\n"
    "timeset_csv = evens_rle.csv\n",

    "[system]\n"
    "kind = discrete-map\n"
    "family = logistic\n"
    "r = 4\n"
    "[experiment]\n"
    "kind = chaos-scan\n"
    "x0 = 0.3\n"
    "y0 = 0.3000000010\n"
    "horizon = 50000\n"
    "seed = SEED\n"
    "[output]\n"
    "report = chaos_logistic.json\n",

    "[system]\n"
    "kind = discrete-map\n"
    "family = logistic\n"
    "r = 4\n"
    "[experiment]\n"
    "kind = sensitivity\n"
    "x0 = 0.437016247040312\n"
    "horizon = 20000\n"
    "resolution = 64\n"
    "bounds_lo = 0\n"
    "bounds_hi = 1\n"
    "spacing = linear\n"
    "n_anchor = 4\n"
    "n_probe = 3\n"
    "seed = SEED\n"
    "[output]\n"
    "report = sensitivity_logistic.json\n"
    "witness_csv = sensitivity_witnesses.csv\n",
};

void c12_determinism(std::uint64_t seed, const std::string& out_dir, CriterionResult& r) {
    namespace fs = std::filesystem;
    fs::path base = out_dir.empty() ? fs::temp_directory_path() / ("corpus_det_" + std::to_string(::getpid()))
                                    : fs::path(out_dir) / "determinism";
    std::vector<std::string> produced;
    for (int run = 1; run <= 2; ++run) {
        fs::path dir = base / ("run" + std::to_string(run));
        fs::create_directories(dir);
        for (const char* templ : kDeterminismConfigs) {
            std::string text(templ);
            auto pos = text.find("SEED");
            text.replace(pos, 4, std::to_string(seed));
            auto ec = experiment_from_config(Config::parse(text));
            auto result = run_experiment(ec, dir.string());
            if (run == 1) {
                produced.push_back(fs::path(result.report_path).filename().string());
                for (const auto& [key, path] : ec.csv_paths) produced.push_back(path);
            }
        }
    }
    int identical = 0;
    for (const auto& name : produced) {
        std::string a = read_file((base / "run1" / name).string());
        std::string b = read_file((base / "run2" / name).string());
        if (a == b)
            ++identical;
        else
            expect(false, name + ": outputs differ between identical runs", r);
    }
    expect(!produced.empty(), "no reports produced", r);
    r.metric = produced.empty() ? 0.0 : static_cast<double>(identical) / static_cast<double>(produced.size());
    if (r.pass) r.detail = std::to_string(identical) + "/" + std::to_string(produced.size()) + " outputs byte-identical";
    if (out_dir.empty()) fs::remove_all(base);
}

}  // namespace

std::vector<CriterionResult> run_corpus(const CorpusOptions& options) {
    struct Spec {
        const char* id;
        const char* kind;
        CriterionFn fn;
    };

    // context shared by the estimate-based criteria; built lazily so a
    // filtered run skips the cost
    std::unique_ptr<CorpusContext> ctx;
    auto context = [&]() -> const CorpusContext& {
        if (!ctx) ctx = std::make_unique<CorpusContext>(build_context());
        return *ctx;
    };

    std::vector<Spec> specs;
    specs.push_back({"C1", "density", [&](CriterionResult& r) { c1_density_evens(r); }});
    specs.push_back({"C2", "density", [&](CriterionResult& r) { c2_scaling(r); }});
    specs.push_back({"C3", "mca", [&](CriterionResult& r) { c3_mca_oracles(context(), r); }});
    specs.push_back({"C4", "mca", [&](CriterionResult& r) { c4_invariance(context(), r); }});
    specs.push_back({"C5", "mca", [&](CriterionResult& r) { c5_theta(r); }});
    specs.push_back({"C6", "genericity", [&](CriterionResult& r) { c6_genericity(context(), options.seed, r); }});
    specs.push_back({"C7", "chaos", [&](CriterionResult& r) { c7_li_yorke(options.seed, r); }});
    specs.push_back({"C8", "chaos", [&](CriterionResult& r) { c8_half_diameter(context(), r); }});
    specs.push_back({"C9", "sensitivity", [&](CriterionResult& r) { c9_sensitivity(context(), options.seed, r); }});
    specs.push_back({"C10", "recurrence", [&](CriterionResult& r) { c10_recurrence(context(), r); }});
    specs.push_back({"C11", "multi", [&](CriterionResult& r) { c11_multi(context(), r); }});
    specs.push_back(
        {"C12", "determinism", [&](CriterionResult& r) { c12_determinism(options.seed, options.out_dir, r); }});

    std::vector<CriterionResult> results;
    for (auto& spec : specs) {
        if (!options.filter.empty() && options.filter != spec.kind) continue;
        CriterionResult r;
        r.id = spec.id;
        r.kind = spec.kind;
        r.pass = true;
        auto t0 = std::chrono::steady_clock::now();
        try {
            spec.fn(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail += (r.detail.empty() ? "" : "; ") + std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(std::move(r));
    }
    return results;
}

Json corpus_summary(const std::vector<CriterionResult>& results, std::uint64_t seed) {
    Json j = Json::object();
    j["artifact_version"] = kVersion;
    j["seed"] = static_cast<std::int64_t>(seed);
    Json rows;
    for (const auto& r : results) {
        Json row = Json::object();
        row["id"] = r.id;
        row["kind"] = r.kind;
        row["pass"] = r.pass;
        row["metric"] = r.metric;
        row["detail"] = r.detail;
        rows.push_back(std::move(row));
    }
    j["criteria"] = std::move(rows);
    return j;
}

std::vector<std::string> diff_against_golden(const std::vector<CriterionResult>& results,
                                             const std::string& golden_text, double tol) {
    std::vector<std::string> diffs;
    nlohmann::json golden;
    try {
        golden = nlohmann::json::parse(golden_text);
    } catch (const std::exception& e) {
        diffs.push_back(std::string("golden file is not valid JSON: ") + e.what());
        return diffs;
    }
    if (!golden.contains("criteria") || !golden["criteria"].is_array()) {
        diffs.push_back("golden file has no criteria array");
        return diffs;
    }
    std::map<std::string, std::pair<bool, double>> want;
    for (const auto& row : golden["criteria"]) {
        if (!row.contains("id") || !row.contains("pass") || !row.contains("metric")) {
            diffs.push_back("golden row missing id/pass/metric");
            return diffs;
        }
        want[row["id"].get<std::string>()] = {row["pass"].get<bool>(), row["metric"].get<double>()};
    }
    for (const auto& r : results) {
        auto it = want.find(r.id);
        if (it == want.end()) {
            diffs.push_back(r.id + ": missing from golden file");
            continue;
        }
        if (r.pass != it->second.first)
            diffs.push_back(r.id + ": pass=" + (r.pass ? "true" : "false") + " golden=" +
                            (it->second.first ? "true" : "false"));
        if (std::fabs(r.metric - it->second.second) > tol)
            diffs.push_back(r.id + ": metric=" + fmt(r.metric) + " golden=" + fmt(it->second.second));
    }
    return diffs;
}

}  // namespace sojourn
