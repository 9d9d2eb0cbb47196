#include "sojourn/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sojourn/errors.hpp"
#include "sojourn/report.hpp"

namespace sojourn {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& what, int line) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": " + what + ": not a number: '" + v + "'", line);
    }
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    cfg.text_ = text;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find_first_of("#;");
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name", line_no);
            cfg.sections_[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value", line_no);
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any [section]", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key", line_no);
        auto [it, inserted] = cfg.sections_[section].emplace(key, Entry{value, line_no});
        if (!inserted)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "' in [" + section + "]",
                              line_no);
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) { return parse(read_file(path)); }

bool Config::has_section(const std::string& name) const { return sections_.count(name) > 0; }

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const std::string& Config::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) throw ConfigError("missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw ConfigError("missing key '" + key + "' in [" + section + "]");
    return k->second.value;
}

std::string Config::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) throw ConfigError("missing section [" + section + "]");
    auto k = s->second.find(key);
    if (k == s->second.end()) throw ConfigError("missing key '" + key + "' in [" + section + "]");
    return parse_double(k->second.value, section + "." + key, k->second.line);
}

double Config::get_double_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    double v = get_double(section, key);
    auto r = static_cast<std::int64_t>(std::llround(v));
    if (std::fabs(v - static_cast<double>(r)) > 1e-9)
        throw ConfigError("key '" + key + "' in [" + section + "] must be an integer");
    return r;
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key, std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        auto comma = v.find(',', pos);
        std::string item = trim(comma == std::string::npos ? v.substr(pos) : v.substr(pos, comma - pos));
        if (!item.empty()) out.push_back(parse_double(item, section + "." + key, 0));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("key '" + key + "' in [" + section + "] is an empty list");
    return out;
}

std::vector<std::string> Config::keys(const std::string& section) const {
    std::vector<std::string> out;
    auto s = sections_.find(section);
    if (s == sections_.end()) return out;
    for (const auto& [k, v] : s->second) out.push_back(k);
    return out;
}

SystemSpec system_from_config(const Config& cfg, const std::string& section) {
    if (!cfg.has_section(section)) throw ConfigError("missing section [" + section + "]");
    std::string kind = cfg.get_or(section, "kind", "discrete-map");
    std::string family = cfg.get(section, "family");

    if (family == "rotation") {
        double alpha = cfg.get_double(section, "alpha");
        if (kind == "ode-semiflow") return SystemSpec::rotation_flow(alpha);
        if (kind == "discrete-map") return SystemSpec::rotation(alpha);
        throw ConfigError("rotation supports kinds discrete-map and ode-semiflow, got " + kind);
    }
    if (family == "logistic") {
        if (kind != "discrete-map") throw ConfigError("logistic is a discrete-map family");
        return SystemSpec::logistic(cfg.get_double_or(section, "r", 4.0));
    }
    if (family == "tent") {
        if (kind != "discrete-map") throw ConfigError("tent is a discrete-map family");
        return SystemSpec::tent(cfg.get_double_or(section, "mu", 2.0));
    }
    if (family == "linear-contraction") {
        if (kind != "discrete-map") throw ConfigError("linear-contraction is a discrete-map family");
        return SystemSpec::contraction(cfg.get_double_or(section, "factor", 0.5));
    }
    if (family == "stable-focus-ode") {
        if (kind != "ode-semiflow") throw ConfigError("stable-focus-ode is an ode-semiflow family");
        return SystemSpec::stable_focus(cfg.get_double_or(section, "lambda", -0.5),
                                        cfg.get_double_or(section, "omega", 2.0));
    }
    if (family == "full-shift-sequence") {
        if (kind != "symbolic-shift") throw ConfigError("full-shift-sequence is a symbolic-shift family");
        return SystemSpec::full_shift();
    }
    throw ConfigError("unknown system family: " + family);
}

State initial_state_from(const SystemSpec& system, const std::string& text) {
    if (system.kind() == SystemKind::shift) {
        try {
            return SymbolicState{parse_sequence_spec(text), 0};
        } catch (const InvalidArgumentError& e) {
            throw ConfigError(std::string("bad initial sequence: ") + e.what());
        }
    }
    DenseState x;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        std::string item = trim(comma == std::string::npos ? text.substr(pos) : text.substr(pos, comma - pos));
        if (!item.empty()) x.push_back(parse_double(item, "x0", 0));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (static_cast<int>(x.size()) != system.dimension())
        throw ConfigError("x0 has dimension " + std::to_string(x.size()) + ", system expects " +
                          std::to_string(system.dimension()));
    return x;
}

const char* experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::mca: return "mca";
        case ExperimentKind::density: return "density";
        case ExperimentKind::chaos_scan: return "chaos-scan";
        case ExperimentKind::qwap: return "qwap";
        case ExperimentKind::multi: return "multi";
        case ExperimentKind::genericity: return "genericity";
        case ExperimentKind::sensitivity: return "sensitivity";
    }
    return "?";
}

ExperimentConfig experiment_from_config(const Config& cfg) {
    ExperimentConfig ec;
    ec.config_text = cfg.text();
    ec.config_hash = fnv1a_hex(cfg.text());

    const std::string E = "experiment";
    if (!cfg.has_section(E)) throw ConfigError("missing section [experiment]");
    std::string kind = cfg.get(E, "kind");
    if (kind == "mca")
        ec.kind = ExperimentKind::mca;
    else if (kind == "density")
        ec.kind = ExperimentKind::density;
    else if (kind == "chaos-scan")
        ec.kind = ExperimentKind::chaos_scan;
    else if (kind == "qwap")
        ec.kind = ExperimentKind::qwap;
    else if (kind == "multi")
        ec.kind = ExperimentKind::multi;
    else if (kind == "genericity")
        ec.kind = ExperimentKind::genericity;
    else if (kind == "sensitivity")
        ec.kind = ExperimentKind::sensitivity;
    else
        throw ConfigError("unknown experiment kind: " + kind);

    if (cfg.has_section("system")) ec.system = system_from_config(cfg);

    ec.horizon = static_cast<std::uint64_t>(cfg.get_int_or(E, "horizon", 100'000));
    if (ec.horizon < 1) throw ConfigError("horizon must be at least 1");
    ec.delta = cfg.get_double_or(E, "delta", 1.0);
    if (!(ec.delta > 0.0)) throw ConfigError("delta must be positive");
    ec.epsilon = cfg.get_double_or(E, "epsilon", 0.0);
    if (ec.epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
    ec.tol = cfg.get_double_or(E, "tol", 0.01);
    if (!(ec.tol > 0.0)) throw ConfigError("tol must be positive");
    ec.delta_pos = cfg.get_double_or(E, "delta_pos", 0.0);
    if (ec.delta_pos < 0.0) throw ConfigError("delta_pos must be nonnegative");
    if (cfg.has(E, "theta")) ec.theta = cfg.get_list(E, "theta");
    if (cfg.has(E, "times")) ec.times = cfg.get_list(E, "times");
    ec.zero_tol = cfg.get_double_or(E, "zero_tol", 1e-3);
    ec.pos_tol = cfg.get_double_or(E, "pos_tol", 10.0 * ec.zero_tol);
    if (!(ec.zero_tol > 0.0) || !(ec.pos_tol > ec.zero_tol))
        throw ConfigError("tolerances must satisfy 0 < zero_tol < pos_tol");
    ec.n_samples = static_cast<int>(cfg.get_int_or(E, "n_samples", 100));
    ec.n_anchor = static_cast<int>(cfg.get_int_or(E, "n_anchor", 8));
    ec.n_probe = static_cast<int>(cfg.get_int_or(E, "n_probe", 4));
    ec.qwap_n_max = static_cast<int>(cfg.get_int_or(E, "n_max", 64));
    ec.gap_bound = cfg.get_double_or(E, "gap_bound", 0.0);
    ec.n_returns = static_cast<int>(cfg.get_int_or(E, "n_returns", 3));
    ec.budget = static_cast<std::uint64_t>(cfg.get_int_or(E, "budget", 200'000'000));

    ec.seed_given = cfg.has(E, "seed");
    ec.seed = static_cast<std::uint64_t>(cfg.get_int_or(E, "seed", 0));
    if ((ec.kind == ExperimentKind::genericity || ec.kind == ExperimentKind::sensitivity) && !ec.seed_given)
        throw ConfigError("sampled experiments need an explicit seed for reproducibility");

    ec.policy.count = static_cast<int>(cfg.get_int_or(E, "checkpoints", 20));
    ec.policy.tail_fraction = cfg.get_double_or(E, "tail_fraction", 0.5);
    std::string spacing = cfg.get_or(E, "spacing", "geometric");
    if (spacing == "geometric")
        ec.policy.spacing = CheckpointPolicy::Spacing::geometric;
    else if (spacing == "linear")
        ec.policy.spacing = CheckpointPolicy::Spacing::linear;
    else
        throw ConfigError("spacing must be geometric or linear");
    if (!(ec.policy.tail_fraction > 0.0 && ec.policy.tail_fraction <= 1.0))
        throw ConfigError("tail_fraction must lie in (0,1]");

    ec.resolution = static_cast<int>(cfg.get_int_or(E, "resolution", 64));
    ec.depth = static_cast<int>(cfg.get_int_or(E, "depth", 2));
    if (cfg.has(E, "bounds_lo")) ec.bounds_lo = cfg.get_list(E, "bounds_lo");
    if (cfg.has(E, "bounds_hi")) ec.bounds_hi = cfg.get_list(E, "bounds_hi");

    ec.x0_text = cfg.get_or(E, "x0", "");
    ec.y0_text = cfg.get_or(E, "y0", "");
    ec.set_spec = cfg.get_or(E, "set", "");
    if (cfg.has(E, "arc")) ec.arc = cfg.get_list(E, "arc");
    ec.scale_tau = cfg.get_double_or(E, "scale_tau", 0.0);

    if (cfg.has_section("accept")) {
        for (const auto& key : cfg.keys("accept")) {
            if (key == "cells") {
                for (double v : cfg.get_list("accept", "cells"))
                    ec.accept_cells.push_back(static_cast<std::uint32_t>(v));
                std::sort(ec.accept_cells.begin(), ec.accept_cells.end());
            } else if (key.rfind("min_", 0) == 0) {
                ec.accept_min[key.substr(4)] = cfg.get_double("accept", key);
            } else if (key.rfind("max_", 0) == 0) {
                ec.accept_max[key.substr(4)] = cfg.get_double("accept", key);
            } else {
                throw ConfigError("unknown acceptance key '" + key + "' (use min_*, max_*, or cells)");
            }
        }
    }

    if (cfg.has_section("output")) {
        for (const auto& key : cfg.keys("output")) {
            if (key == "report")
                ec.report_path = cfg.get("output", "report");
            else
                ec.csv_paths[key] = cfg.get("output", key);
        }
    }
    return ec;
}

BoxPartition partition_from_config(const ExperimentConfig& ec) {
    if (!ec.system) throw ConfigError("partition needs a [system] section");
    switch (ec.system->metric()) {
        case MetricKind::circle:
            return BoxPartition::circle(ec.resolution);
        case MetricKind::symbolic:
            return BoxPartition::cylinders(ec.depth);
        case MetricKind::euclidean: {
            std::vector<double> lo = ec.bounds_lo, hi = ec.bounds_hi;
            if (lo.empty()) lo.assign(ec.system->dimension(), 0.0);
            if (hi.empty()) hi.assign(ec.system->dimension(), 1.0);
            if (static_cast<int>(lo.size()) != ec.system->dimension() || lo.size() != hi.size())
                throw ConfigError("bounds_lo/bounds_hi must match the system dimension");
            return BoxPartition::boxes(lo, hi, std::vector<int>(lo.size(), ec.resolution));
        }
    }
    throw ConfigError("unreachable metric kind");
}

}  // namespace sojourn
