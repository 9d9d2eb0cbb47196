#ifndef SOJOURN_CONFIG_HPP
#define SOJOURN_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sojourn/density.hpp"
#include "sojourn/partition.hpp"
#include "sojourn/systems.hpp"

namespace sojourn {

/// Plain-text sectioned key=value configuration. '#' and ';' start
/// comments; section headers are bracketed. Parse and lookup failures throw
/// ConfigError carrying the offending line.
class Config {
public:
    static Config parse(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has_section(const std::string& name) const;
    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    const std::string& text() const { return text_; }
    std::vector<std::string> keys(const std::string& section) const;

private:
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string text_;
};

/// Build a system from its config section (keys: kind, family, parameters,
/// metric is implied by the family).
SystemSpec system_from_config(const Config& cfg, const std::string& section = "system");

/// Parse an initial state: comma-separated coordinates for maps/flows, a
/// sequence spec for shifts.
State initial_state_from(const SystemSpec& system, const std::string& text);

enum class ExperimentKind { mca, density, chaos_scan, qwap, multi, genericity, sensitivity };

const char* experiment_kind_name(ExperimentKind k);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::mca;
    std::optional<SystemSpec> system;
    std::string x0_text;
    std::uint64_t horizon = 100'000;
    double delta = 1.0;
    double epsilon = 0.0;     // 0: two cell diameters
    double tol = 0.01;
    double delta_pos = 0.0;   // 0: default 10/N
    std::vector<double> theta;
    std::vector<double> times;
    double zero_tol = 1e-3;
    double pos_tol = 1e-2;
    int n_samples = 100;
    int n_anchor = 8;
    int n_probe = 4;
    int qwap_n_max = 64;
    double gap_bound = 0.0;
    int n_returns = 3;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t budget = 200'000'000;
    CheckpointPolicy policy;
    // partition
    int resolution = 64;
    int depth = 2;
    std::vector<double> bounds_lo, bounds_hi;
    // density experiment source
    std::string set_spec;     // evens | multiples:<m> | blocks:<width>,<period> | orbit
    std::vector<double> arc;  // region arc for orbit-based density
    double scale_tau = 0.0;
    // second point for chaos
    std::string y0_text;
    // acceptance predicates
    std::map<std::string, double> accept_min;   // key -> minimum value
    std::map<std::string, double> accept_max;   // key -> maximum value
    std::vector<std::uint32_t> accept_cells;    // exact flagged cell set
    // outputs
    std::string report_path;
    std::map<std::string, std::string> csv_paths;

    std::string config_hash;
    std::string config_text;
};

/// Parse and validate the experiment sections ([experiment], [accept],
/// [output], plus [system] when present). Throws ConfigError on invalid or
/// missing values (nonpositive delta/tolerances, missing seed for sampled
/// experiments).
ExperimentConfig experiment_from_config(const Config& cfg);

/// Partition from the experiment settings and the system's metric.
BoxPartition partition_from_config(const ExperimentConfig& ec);

}  // namespace sojourn

#endif
