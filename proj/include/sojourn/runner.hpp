#ifndef SOJOURN_RUNNER_HPP
#define SOJOURN_RUNNER_HPP

#include <string>

#include "sojourn/config.hpp"
#include "sojourn/report.hpp"

namespace sojourn {

struct RunResult {
    bool accepted = true;  // all declared acceptance predicates held
    Json report;
    std::string report_path;  // empty when no report was written
};

/// Execute one experiment: run the computation, write the JSON report and
/// any requested CSV files, and evaluate the config's acceptance
/// predicates. Deterministic for a fixed config and seed. Throws ConfigError
/// for invalid setups and runtime errors (budget, escape) as their own
/// types.
RunResult run_experiment(const ExperimentConfig& ec, const std::string& out_dir = "");

}  // namespace sojourn

#endif
