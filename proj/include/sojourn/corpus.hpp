#ifndef SOJOURN_CORPUS_HPP
#define SOJOURN_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sojourn/report.hpp"

namespace sojourn {

/// One row of the regression corpus: an oracle-backed acceptance criterion
/// with its headline metric.
struct CriterionResult {
    std::string id;      // C1..C12
    std::string kind;    // density | mca | genericity | chaos | sensitivity | recurrence | multi | determinism
    std::string detail;  // key numbers, or the error text on failure
    bool pass = false;
    double metric = 0.0;
    double seconds = 0.0;
};

struct CorpusOptions {
    std::uint64_t seed = 42;
    std::string filter;   // run only criteria whose kind matches
    std::string out_dir;  // where determinism runs and reports land; temp dir when empty
};

/// Run the built-in oracle corpus (rotation, contraction, periodic points,
/// logistic, stable focus, engineered shift points). Each criterion is
/// evaluated at its pinned tolerance; failures are recorded, not thrown.
std::vector<CriterionResult> run_corpus(const CorpusOptions& options);

Json corpus_summary(const std::vector<CriterionResult>& results, std::uint64_t seed);

/// Compare a freshly computed summary against a golden summary file.
/// Returns human-readable diff lines; empty means match. Metric values
/// compare within tol.
std::vector<std::string> diff_against_golden(const std::vector<CriterionResult>& results,
                                             const std::string& golden_text, double tol = 1e-9);

}  // namespace sojourn

#endif
