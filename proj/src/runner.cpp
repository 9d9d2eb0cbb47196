#include "sojourn/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "sojourn/chaos.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/mca.hpp"
#include "sojourn/recurrence.hpp"
#include "sojourn/version.hpp"

namespace sojourn {

namespace {

double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;
    return y;
}

Json density_json(const DensityEstimate& d) {
    Json j = Json::object();
    j["lower"] = d.lower;
    j["upper"] = d.upper;
    Json cps, vals;
    for (double t : d.checkpoints) cps.push_back(t);
    for (double v : d.values) vals.push_back(v);
    j["checkpoints"] = std::move(cps);
    j["values"] = std::move(vals);
    return j;
}

Json report_header(const ExperimentConfig& ec) {
    Json j = Json::object();
    j["schema_version"] = kReportSchemaVersion;
    j["artifact_version"] = kVersion;
    j["experiment"] = experiment_kind_name(ec.kind);
    j["config_hash"] = ec.config_hash;
    j["seed"] = static_cast<std::int64_t>(ec.seed);
    Json policy = Json::object();
    policy["checkpoints"] = ec.policy.count;
    policy["tail_fraction"] = ec.policy.tail_fraction;
    policy["spacing"] = ec.policy.spacing_name();
    j["checkpoint_policy"] = std::move(policy);
    if (ec.system) j["system"] = ec.system->describe();
    return j;
}

// Synthetic time sets for the density experiment.
TimeSet synthetic_timeset(const ExperimentConfig& ec) {
    const std::string& spec = ec.set_spec;
    auto head = spec.substr(0, spec.find(':'));
    std::string rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
    if (head == "evens" || head == "multiples") {
        std::uint64_t m = head == "evens" ? 2 : static_cast<std::uint64_t>(std::stoull(rest));
        if (m == 0) throw ConfigError("multiples: modulus must be positive");
        std::vector<std::uint64_t> members;
        for (std::uint64_t k = 0; k <= ec.horizon; k += m) members.push_back(k);
        return TimeSet(TimeSet::Mode::discrete, std::move(members), 1.0, static_cast<double>(ec.horizon));
    }
    if (head == "blocks") {
        // union of [n*period, n*period + width) on the delta grid
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw ConfigError("blocks set needs width,period");
        double width = std::stod(rest.substr(0, comma));
        double period = std::stod(rest.substr(comma + 1));
        if (!(width > 0.0 && period > width)) throw ConfigError("blocks set needs 0 < width < period");
        std::vector<std::uint64_t> members;
        double t_max = static_cast<double>(ec.horizon) * ec.delta;
        for (std::uint64_t k = 0; k * ec.delta < t_max; ++k) {
            double phase = std::fmod(static_cast<double>(k) * ec.delta, period);
            if (phase < width) members.push_back(k);
        }
        return TimeSet(TimeSet::Mode::continuous, std::move(members), ec.delta, t_max);
    }
    if (head == "dyadic") {
        // full blocks [2^k, 2^(k+1)) for even k
        std::vector<std::uint64_t> members;
        for (std::uint64_t k = 1; k <= ec.horizon; ++k) {
            int level = static_cast<int>(std::floor(std::log2(static_cast<double>(k))));
            if (level % 2 == 0) members.push_back(k);
        }
        return TimeSet(TimeSet::Mode::continuous, std::move(members), 1.0, static_cast<double>(ec.horizon) + 1.0);
    }
    throw ConfigError("unknown density set spec: " + spec);
}

struct Metrics {
    std::map<std::string, double> values;
    std::vector<std::uint32_t> cells;
};

bool evaluate_acceptance(const ExperimentConfig& ec, const Metrics& m, Json& report) {
    bool pass = true;
    Json acc = Json::object();
    for (const auto& [key, bound] : ec.accept_min) {
        auto it = m.values.find(key);
        if (it == m.values.end()) throw ConfigError("acceptance predicate min_" + key + ": no such metric");
        bool ok = it->second >= bound;
        acc["min_" + key] = ok;
        pass = pass && ok;
    }
    for (const auto& [key, bound] : ec.accept_max) {
        auto it = m.values.find(key);
        if (it == m.values.end()) throw ConfigError("acceptance predicate max_" + key + ": no such metric");
        bool ok = it->second <= bound;
        acc["max_" + key] = ok;
        pass = pass && ok;
    }
    if (!ec.accept_cells.empty()) {
        bool ok = m.cells == ec.accept_cells;
        acc["cells"] = ok;
        pass = pass && ok;
    }
    acc["pass"] = pass;
    report["acceptance"] = std::move(acc);
    return pass;
}

std::string resolve_path(const std::string& out_dir, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute() || out_dir.empty()) return path;
    return (std::filesystem::path(out_dir) / p).string();
}

const SystemSpec& need_system(const ExperimentConfig& ec) {
    if (!ec.system) throw ConfigError("this experiment needs a [system] section");
    return *ec.system;
}

State need_x0(const ExperimentConfig& ec) {
    if (ec.x0_text.empty()) throw ConfigError("this experiment needs x0");
    return initial_state_from(*ec.system, ec.x0_text);
}

double default_epsilon(const ExperimentConfig& ec, const BoxPartition& p) {
    return ec.epsilon > 0.0 ? ec.epsilon : 2.0 * p.cell_diameter();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& ec, const std::string& out_dir) {
    RunResult result;
    result.report = report_header(ec);
    Json& report = result.report;
    Metrics metrics;

    switch (ec.kind) {
        case ExperimentKind::mca: {
            const auto& system = need_system(ec);
            auto partition = partition_from_config(ec);
            auto orbit = sample_orbit(system, need_x0(ec), ec.delta, ec.horizon);
            auto est = estimate_mca(orbit, partition, ec.delta_pos, ec.policy);
            double eps = default_epsilon(ec, partition);
            auto center = verify_center(orbit, partition, est.cells, eps, ec.tol);
            auto minimal = verify_minimality(orbit, est, ec.tol);
            bool invariant = est.cells.empty() ? false : check_invariance(system, est, 50, eps);

            Json j = Json::object();
            j["delta_pos"] = est.delta_pos;
            j["theta"] = est.theta;
            j["epsilon"] = eps;
            Json cells, uppers;
            for (std::uint32_t c : est.cells) cells.push_back(static_cast<std::int64_t>(c));
            for (double u : est.cell_upper) uppers.push_back(u);
            j["cells"] = std::move(cells);
            j["cell_upper"] = std::move(uppers);
            Json cj = Json::object();
            cj["ok"] = center.ok;
            cj["lower"] = center.density.lower;
            cj["required"] = center.required;
            j["center"] = std::move(cj);
            Json mj = Json::object();
            mj["ok"] = minimal.ok;
            if (minimal.removable) mj["removable"] = static_cast<std::int64_t>(*minimal.removable);
            j["minimality"] = std::move(mj);
            j["invariant"] = invariant;
            report["mca"] = std::move(j);

            metrics.cells = est.cells;
            metrics.values["cells_count"] = static_cast<double>(est.cells.size());
            metrics.values["center_lower"] = center.density.lower;
            metrics.values["center_ok"] = center.ok ? 1.0 : 0.0;
            metrics.values["minimality_ok"] = minimal.ok ? 1.0 : 0.0;
            metrics.values["invariant"] = invariant ? 1.0 : 0.0;
            double min_up = 1.0, max_up = 0.0;
            for (std::uint32_t c : est.cells) {
                min_up = std::min(min_up, est.cell_upper[c]);
                max_up = std::max(max_up, est.cell_upper[c]);
            }
            metrics.values["min_cell_upper"] = est.cells.empty() ? 0.0 : min_up;
            metrics.values["max_cell_upper"] = est.cells.empty() ? 0.0 : max_up;

            if (auto it = ec.csv_paths.find("cells_csv"); it != ec.csv_paths.end()) {
                std::ostringstream ss;
                write_mca_csv(ss, est);
                write_file(resolve_path(out_dir, it->second), ss.str());
            }
            if (auto it = ec.csv_paths.find("orbit_csv"); it != ec.csv_paths.end()) {
                std::ostringstream ss;
                write_orbit_csv(ss, orbit);
                write_file(resolve_path(out_dir, it->second), ss.str());
            }
            break;
        }

        case ExperimentKind::density: {
            TimeSet ts = [&] {
                if (ec.set_spec.empty() || ec.set_spec == "orbit") {
                    const auto& system = need_system(ec);
                    if (ec.arc.size() != 2) throw ConfigError("orbit density needs arc = lo,hi");
                    auto orbit = sample_orbit(system, need_x0(ec), ec.delta, ec.horizon);
                    double lo = ec.arc[0], hi = ec.arc[1];
                    return hitting_times(orbit, [lo, hi](const State& s) {
                        double x = wrap01(std::get<DenseState>(s)[0]);
                        return x >= lo && x < hi;
                    });
                }
                return synthetic_timeset(ec);
            }();

            auto d = density(ts, ec.policy);
            report["density"] = density_json(d);
            metrics.values["lower"] = d.lower;
            metrics.values["upper"] = d.upper;

            if (ec.scale_tau > 0.0) {
                auto scaled = density(ts.scaled(ec.scale_tau), ec.policy);
                Json sj = density_json(scaled);
                sj["tau"] = ec.scale_tau;
                report["scaled"] = std::move(sj);
                metrics.values["scale_dev"] =
                    std::max(std::fabs(scaled.upper - d.upper), std::fabs(scaled.lower - d.lower));
            }
            if (auto it = ec.csv_paths.find("timeset_csv"); it != ec.csv_paths.end()) {
                std::ostringstream ss;
                write_timeset_rle_csv(ss, ts);
                write_file(resolve_path(out_dir, it->second), ss.str());
            }
            break;
        }

        case ExperimentKind::chaos_scan: {
            const auto& system = need_system(ec);
            if (ec.y0_text.empty()) throw ConfigError("chaos-scan needs y0");
            auto d = pair_diagnostics(system, need_x0(ec), initial_state_from(system, ec.y0_text), ec.horizon,
                                      ec.policy.count, ec.delta);
            bool ly = is_li_yorke(d, ec.zero_tol, ec.pos_tol);
            bool chaotic = d.liminf_point <= ec.zero_tol && d.limsup_point >= ec.pos_tol && ly;

            Json j = Json::object();
            j["liminf_pair"] = d.liminf_pair;
            j["limsup_pair"] = d.limsup_pair;
            j["liminf_point"] = d.liminf_point;
            j["limsup_point"] = d.limsup_point;
            j["li_yorke"] = ly;
            j["chaotic_motion"] = chaotic;
            report["pair"] = std::move(j);
            metrics.values["liminf_pair"] = d.liminf_pair;
            metrics.values["limsup_pair"] = d.limsup_pair;
            metrics.values["liminf_point"] = d.liminf_point;
            metrics.values["limsup_point"] = d.limsup_point;
            metrics.values["li_yorke"] = ly ? 1.0 : 0.0;
            break;
        }

        case ExperimentKind::qwap: {
            const auto& system = need_system(ec);
            auto partition = partition_from_config(ec);
            auto orbit = sample_orbit(system, need_x0(ec), ec.delta, ec.horizon);
            double eps = default_epsilon(ec, partition);
            auto witness = qwap_test(orbit, eps, ec.qwap_n_max);
            bool poisson = poisson_stable_test(orbit, eps, ec.n_returns);
            double gap_bound = ec.gap_bound > 0.0 ? ec.gap_bound : orbit.duration() / 10.0;
            auto birkhoff = birkhoff_recurrent_test(orbit, eps, gap_bound);
            CrosscheckParams params;
            params.horizon = ec.horizon;
            params.delta = ec.delta;
            params.delta_pos = ec.delta_pos;
            params.qwap_n_max = ec.qwap_n_max;
            params.policy = ec.policy;
            auto cross = prop_qwap_center_crosscheck(system, initial_state_from(system, ec.x0_text), partition, params);

            Json j = Json::object();
            j["epsilon"] = eps;
            j["qwap"] = witness.ok;
            if (witness.ok) {
                std::ostringstream ss;
                write_qwap_json(ss, witness);
                j["witness"] = ss.str();
            }
            j["poisson"] = poisson;
            Json bj = Json::object();
            bj["ok"] = birkhoff.ok;
            bj["max_gap"] = birkhoff.max_gap;
            bj["gap_bound"] = gap_bound;
            j["birkhoff"] = std::move(bj);
            j["crosscheck_ok"] = cross.ok;
            report["recurrence"] = std::move(j);

            metrics.values["qwap"] = witness.ok ? 1.0 : 0.0;
            metrics.values["poisson"] = poisson ? 1.0 : 0.0;
            metrics.values["birkhoff"] = birkhoff.ok ? 1.0 : 0.0;
            metrics.values["max_gap"] = birkhoff.max_gap;
            metrics.values["crosscheck_ok"] = cross.ok ? 1.0 : 0.0;

            if (auto it = ec.csv_paths.find("witness_json"); it != ec.csv_paths.end()) {
                std::ostringstream ss;
                write_qwap_json(ss, witness);
                write_file(resolve_path(out_dir, it->second), ss.str());
            }
            break;
        }

        case ExperimentKind::multi: {
            const auto& system = need_system(ec);
            auto partition = partition_from_config(ec);
            if (ec.times.empty()) throw ConfigError("multi experiment needs times");
            auto x0 = need_x0(ec);
            auto orbit = sample_orbit(system, x0, ec.delta, ec.horizon);
            auto est = estimate_mca(orbit, partition, ec.delta_pos, ec.policy);
            double eps = default_epsilon(ec, partition);
            auto d = multi_attraction_density(system, x0, est, ec.times, eps, ec.horizon, ec.delta,
                                              {20, 0.5, CheckpointPolicy::Spacing::linear}, ec.budget);
            Json j = density_json(d);
            Json tj;
            for (double t : ec.times) tj.push_back(t);
            j["times"] = std::move(tj);
            j["epsilon"] = eps;
            report["multi_attraction"] = std::move(j);
            metrics.values["lower"] = d.lower;
            metrics.values["upper"] = d.upper;
            break;
        }

        case ExperimentKind::genericity: {
            const auto& system = need_system(ec);
            auto partition = partition_from_config(ec);
            auto orbit = sample_orbit(system, need_x0(ec), ec.delta, ec.horizon);
            auto reference = estimate_mca(orbit, partition, ec.delta_pos, ec.policy);
            auto probe = genericity_probe(system, reference, uniform_sampler(partition), ec.n_samples, ec.horizon,
                                          ec.seed);
            Json j = Json::object();
            j["fraction"] = probe.fraction;
            j["n_samples"] = ec.n_samples;
            Json scores;
            for (double s : probe.scores) scores.push_back(s);
            j["scores"] = std::move(scores);
            report["genericity"] = std::move(j);
            metrics.values["fraction"] = probe.fraction;
            break;
        }

        case ExperimentKind::sensitivity: {
            const auto& system = need_system(ec);
            auto partition = partition_from_config(ec);
            auto orbit = sample_orbit(system, need_x0(ec), ec.delta, ec.horizon);
            auto est = estimate_mca(orbit, partition, ec.delta_pos, ec.policy);
            auto scan = sensitivity_scan(system, est, ec.n_anchor, ec.n_probe, ec.horizon, ec.seed);
            Json j = Json::object();
            j["delta_hat"] = scan.delta_hat;
            j["eps_hat"] = scan.eps_hat;
            j["sensitive"] = scan.sensitive;
            int ok = 0;
            for (const auto& w : scan.witnesses) ok += w.success ? 1 : 0;
            j["witnesses_total"] = static_cast<std::int64_t>(scan.witnesses.size());
            j["witnesses_ok"] = ok;
            report["sensitivity"] = std::move(j);
            metrics.values["eps_hat"] = scan.eps_hat;
            metrics.values["sensitive"] = scan.sensitive ? 1.0 : 0.0;
            metrics.values["witness_fraction"] =
                scan.witnesses.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(scan.witnesses.size());

            if (auto it = ec.csv_paths.find("witness_csv"); it != ec.csv_paths.end()) {
                std::ostringstream ss;
                write_witness_csv(ss, scan, partition);
                write_file(resolve_path(out_dir, it->second), ss.str());
            }
            break;
        }
    }

    result.accepted = evaluate_acceptance(ec, metrics, report);

    std::string path = ec.report_path;
    if (path.empty() && !out_dir.empty()) path = std::string(experiment_kind_name(ec.kind)) + "_report.json";
    if (!path.empty()) {
        result.report_path = resolve_path(out_dir, path);
        write_file(result.report_path, report.dump());
    }
    return result;
}

}  // namespace sojourn
