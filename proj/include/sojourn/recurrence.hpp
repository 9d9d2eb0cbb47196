#ifndef SOJOURN_RECURRENCE_HPP
#define SOJOURN_RECURRENCE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "sojourn/mca.hpp"
#include "sojourn/systems.hpp"

namespace sojourn {

/// Quasi-weak almost periodicity witness: a window factor N and three
/// witness counts n_1 < n_2 < n_3 (n_3 >= 4*n_1) such that at least n_j
/// unit-separated returns to B_eps(x0) occur inside [0, n_j*N).
struct QwapWitness {
    bool ok = false;
    int window = 0;                       // N
    std::array<std::uint64_t, 3> counts{};  // n_1, n_2, n_3
    std::vector<double> return_times;     // the greedily separated returns used
};

/// Returns are selected greedily: scan visits to B_eps(x0), keeping a visit
/// when it is at least one time unit after the last kept one (ceil(1/delta)
/// samples when delta does not divide 1). t = 0 is counted as a visit but
/// is not required to be one.
QwapWitness qwap_test(const OrbitSample& orbit, double epsilon, int n_max);

/// Infinitely-often return surrogate: at least n_returns visits to
/// B_eps(x0) at positive times, the last one in the final quarter of the
/// horizon.
bool poisson_stable_test(const OrbitSample& orbit, double epsilon, int n_returns = 3);

struct BirkhoffReport {
    bool ok = false;
    double max_gap = 0.0;  // largest gap between consecutive returns (and to horizon end)
    std::uint64_t n_returns = 0;
};

/// Uniform recurrence surrogate: return times to B_eps(x0) are syndetic on
/// the sampled horizon (max gap <= gap_bound, including the gap from the
/// last return to the horizon end).
BirkhoffReport birkhoff_recurrent_test(const OrbitSample& orbit, double epsilon, double gap_bound);

struct CrosscheckReport {
    bool ok = false;        // the two sides agree
    bool qwap = false;      // side 1: quasi-weakly almost periodic
    bool in_estimate = false;  // side 2: cell of x0 belongs to the estimated center
    QwapWitness witness;
    std::optional<std::uint32_t> x0_cell;
    std::vector<std::uint32_t> estimate_cells;
};

struct CrosscheckParams {
    std::uint64_t horizon = 100'000;
    double delta = 1.0;
    double delta_pos = 0.0;  // <= 0: default
    int qwap_n_max = 64;
    CheckpointPolicy policy{};
};

/// Consistency check of the equivalence "x is quasi-weakly almost periodic
/// iff x lies in its own minimal center of attraction", at epsilon = 2 cell
/// widths.
CrosscheckReport prop_qwap_center_crosscheck(const SystemSpec& system, const State& x0, const BoxPartition& partition,
                                             const CrosscheckParams& params = {});

/// Write a QWAP witness as JSON (window, counts, return times).
void write_qwap_json(std::ostream& out, const QwapWitness& w);

}  // namespace sojourn

#endif
