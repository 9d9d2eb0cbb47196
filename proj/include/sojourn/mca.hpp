#ifndef SOJOURN_MCA_HPP
#define SOJOURN_MCA_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "sojourn/density.hpp"
#include "sojourn/partition.hpp"
#include "sojourn/systems.hpp"

namespace sojourn {

/// Estimated minimal center of attraction: the partition cells whose visit
/// time set has upper density >= delta_pos, together with the full per-cell
/// upper-density table.
struct McaEstimate {
    BoxPartition partition;
    std::vector<std::uint32_t> cells;  // sorted
    std::vector<double> cell_upper;    // size cell_count()
    double delta_pos = 0.0;
    std::uint64_t horizon = 0;
    double theta = 1.0;  // sampling step of the estimating orbit
    CheckpointPolicy policy;
};

/// Fraction of time in [0, T) the orbit spends in the region (rectangle
/// rule on the sampling grid). T must be positive and within the orbit.
double sojourn_fraction(const OrbitSample& orbit, const std::function<bool(const State&)>& region, double T);

/// Default positivity threshold: 10 visits' worth of density at the given
/// sample count.
inline double default_delta_pos(std::uint64_t n_samples) { return 10.0 / static_cast<double>(n_samples); }

/// Estimate the minimal center of attraction from per-cell upper visit
/// densities. delta_pos <= 0 selects the default. The orbit must stay
/// inside the partition bounds (NotLagrangeStableError otherwise).
McaEstimate estimate_mca(const OrbitSample& orbit, const BoxPartition& partition, double delta_pos = 0.0,
                         const CheckpointPolicy& policy = {});

struct CenterReport {
    bool ok = false;
    DensityEstimate density;  // visit density of the eps-fattened candidate
    double required = 0.0;    // 1 - tol
};

/// Attraction check: the eps-fattened candidate cell set must carry lower
/// visit density >= 1 - tol. Verification uses linear checkpoints by
/// default (the density should settle, not oscillate).
CenterReport verify_center(const OrbitSample& orbit, const BoxPartition& partition,
                           std::span<const std::uint32_t> candidate, double epsilon, double tol,
                           const CheckpointPolicy& policy = {20, 0.5, CheckpointPolicy::Spacing::linear});

struct MinimalityReport {
    bool ok = false;
    std::optional<std::uint32_t> removable;  // first cell whose removal keeps density >= 1 - tol
    std::vector<double> retained_lower;      // lower density with each estimate cell removed
};

/// Cell-by-cell minimality: removing any single estimate cell must drop the
/// lower visit density of the remaining (unfattened) cell union below
/// 1 - tol.
MinimalityReport verify_minimality(const OrbitSample& orbit, const McaEstimate& est, double tol,
                                   const CheckpointPolicy& policy = {20, 0.5, CheckpointPolicy::Spacing::linear});

/// Invariance check: the image of each estimate cell center under
/// k = 1..steps sample steps stays within eps of the estimate cell union.
bool check_invariance(const SystemSpec& system, const McaEstimate& est, std::uint64_t steps, double epsilon);

struct ThetaAgreement {
    double score = 0.0;  // fraction of cells agreeing after one-cell fattening
    bool resonance_warning = false;
    std::vector<std::uint32_t> cells_a, cells_b;
};

/// Compare estimates from two sampling steps of the same motion. Orbits
/// must cover the same total time within one coarse sample step.
ThetaAgreement theta_robustness(const OrbitSample& orbit_a, const OrbitSample& orbit_b,
                                const BoxPartition& partition, double delta_pos = 0.0,
                                const CheckpointPolicy& policy = {}, double warn_below = 0.98);

/// Agreement score used by theta_robustness and genericity_probe.
double agreement_score(const BoxPartition& partition, std::span<const std::uint32_t> cells_a,
                       std::span<const std::uint32_t> cells_b);

struct GenericityResult {
    double fraction = 0.0;            // fraction of samples agreeing with the reference
    std::vector<double> scores;       // per-sample agreement scores
    std::vector<State> disagreeing;   // sampled starts whose estimate disagreed
};

using StateSampler = std::function<State(std::mt19937_64&)>;

/// Sampling surrogate for genericity: fraction of sampled initial states
/// whose estimate agrees with the reference (score >= agree_at). This
/// probes, but cannot verify, residuality: a fraction below 1 does not
/// refute it.
GenericityResult genericity_probe(const SystemSpec& system, const McaEstimate& reference, const StateSampler& sampler,
                                  int n_samples, std::uint64_t horizon, std::uint64_t seed, double agree_at = 0.95);

/// Uniform sampler over the partition's region.
StateSampler uniform_sampler(const BoxPartition& partition);

/// Density of {t : f(t_i*t, x0) in B_eps(estimate) for all i} on the common
/// parameter grid t = k*delta. Each factor runs on its own scaled grid
/// (flows step at t_i*delta; maps/shifts evaluate at round(t_i*k)).
/// horizon*max(times) above budget throws BudgetExceededError.
DensityEstimate multi_attraction_density(const SystemSpec& system, const State& x0, const McaEstimate& est,
                                         std::span<const double> times, double epsilon, std::uint64_t horizon,
                                         double delta = 1.0,
                                         const CheckpointPolicy& policy = {20, 0.5, CheckpointPolicy::Spacing::linear},
                                         std::uint64_t budget = 200'000'000);

/// Ball region around a point in the system metric (closed: boundary counts
/// as inside).
std::function<bool(const State&)> ball_region(const SystemSpec& system, State center, double radius);

/// Region of states whose cell belongs to the given sorted cell set.
std::function<bool(const State&)> cell_region(const BoxPartition& partition, std::vector<std::uint32_t> cells);

/// Write estimate cells as CSV rows (cell, center coordinates, upper
/// density) for external plotting.
void write_mca_csv(std::ostream& out, const McaEstimate& est);

}  // namespace sojourn

#endif
