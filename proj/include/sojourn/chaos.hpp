#ifndef SOJOURN_CHAOS_HPP
#define SOJOURN_CHAOS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sojourn/mca.hpp"
#include "sojourn/systems.hpp"

namespace sojourn {

/// Tail extrema of the two distance signals of a pair of motions:
/// d(f(t,x), f(t,y)) (pair) and d(f(t,x), y) (point). liminf/limsup over
/// t -> infinity are replaced by min/max over the tail window of the
/// sampled horizon; per-segment extrema are retained so nested windows can
/// be evaluated from one run.
struct PairDiagnostics {
    double liminf_pair = 0.0, limsup_pair = 0.0;
    double liminf_point = 0.0, limsup_point = 0.0;
    std::uint64_t horizon = 0;
    double delta = 1.0;
    std::vector<double> checkpoint_times;  // segment end times
    std::vector<double> seg_min_pair, seg_max_pair;
    std::vector<double> seg_min_point, seg_max_point;

    /// Extrema over segments [first_segment, end).
    double window_min_pair(std::size_t first_segment) const;
    double window_max_pair(std::size_t first_segment) const;
};

PairDiagnostics pair_diagnostics(const SystemSpec& system, const State& x, const State& y, std::uint64_t horizon,
                                 int n_checkpoints = 20, double delta = 1.0);

/// Li-Yorke pair test: proximal (liminf_pair <= zero_tol) but not
/// asymptotic (limsup_pair >= pos_tol). Requires pos_tol > zero_tol.
bool is_li_yorke(const PairDiagnostics& d, double zero_tol, double pos_tol);

inline constexpr double kDefaultZeroTol = 1e-3;
inline constexpr double kDefaultPosTol = 1e-2;

/// Chaotic motion test: some y is approached infinitely often but not
/// converged to, while the two motions are proximal but not asymptotic
/// (all four tail conditions from one diagnostics run).
bool is_chaotic_motion(const SystemSpec& system, const State& x, const State& y, std::uint64_t horizon,
                       double zero_tol = kDefaultZeroTol, double pos_tol = kDefaultPosTol, double delta = 1.0);

struct PartnerResult {
    bool found = false;
    std::size_t best_index = 0;  // valid when some candidate is proximal
    bool any_proximal = false;
    PairDiagnostics best;
    std::vector<PairDiagnostics> all;
};

/// Search a finite candidate list for a Li-Yorke partner of x: among
/// proximal candidates, the one maximizing limsup_pair. found is true only
/// if that maximum also clears pos_tol; absence of a partner in the list is
/// reported, not thrown.
PartnerResult find_li_yorke_partner(const SystemSpec& system, const State& x, std::span<const State> candidates,
                                    std::uint64_t horizon, double zero_tol = kDefaultZeroTol,
                                    double pos_tol = kDefaultPosTol, double delta = 1.0);

struct SensitivityWitness {
    std::uint32_t anchor_cell = 0;
    double radius = 0.0;
    bool success = false;
    double achieved = 0.0;  // best limsup of a separation over the probe set
};

struct SensitivityScan {
    double delta_hat = 0.0;  // min over anchors of the farthest excursion of some motion
    double eps_hat = 0.0;    // delta_hat / 4
    bool sensitive = false;  // every anchor separated at every radius
    std::vector<std::uint32_t> anchor_cells;
    std::vector<SensitivityWitness> witnesses;  // one per (anchor, radius)
};

inline constexpr double kDefaultProbeRadiiArr[3] = {1e-2, 1e-4, 1e-6};
inline constexpr std::span<const double> kDefaultProbeRadii{kDefaultProbeRadiiArr, 3};

/// Sensitivity scan near an estimated center. delta_hat is the min over
/// sampled anchors of the max over sampled motions (orbit segments of
/// length horizon/10 from estimate cell centers) of the farthest excursion
/// max_t d(anchor, f(t,q)); eps_hat = delta_hat/4. Each anchor is then
/// probed with n_probe random starts in shrinking neighborhoods; a witness
/// succeeds when some pair among {anchor, probes} separates to eps_hat.
/// A single-cell estimate is degenerate (DegenerateEstimateError).
SensitivityScan sensitivity_scan(const SystemSpec& system, const McaEstimate& est, int n_anchor, int n_probe,
                                 std::uint64_t horizon, std::uint64_t seed,
                                 std::span<const double> radii = kDefaultProbeRadii, double delta = 1.0);

/// Diameter of a cell set: max pairwise center distance plus one cell
/// diameter, capped by the diameter of the partitioned space.
double diameter(const BoxPartition& partition, std::span<const std::uint32_t> cells);

/// Write a sensitivity witness table as CSV (anchor, radius, achieved,
/// success).
void write_witness_csv(std::ostream& out, const SensitivityScan& scan, const BoxPartition& partition);

}  // namespace sojourn

#endif
