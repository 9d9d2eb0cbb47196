#ifndef SOJOURN_DENSITY_HPP
#define SOJOURN_DENSITY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sojourn/systems.hpp"

namespace sojourn {

/// Checkpoint times used as the finite-horizon surrogate for T -> infinity:
/// running averages are evaluated at m increasing times and liminf/limsup
/// are replaced by min/max over the last ceil(tail_fraction*m) of them.
/// Geometric spacing (T, T/2, T/4, ...) resolves block-structured
/// oscillation; linear spacing suits densities that settle.
struct CheckpointPolicy {
    enum class Spacing { geometric, linear };

    int count = 20;
    double tail_fraction = 0.5;
    Spacing spacing = Spacing::geometric;

    /// Increasing positive times ending at t_max (deduplicated when t_max is
    /// too small to support `count` distinct values).
    std::vector<double> times(double t_max) const;

    std::size_t tail_start(std::size_t m) const;

    const char* spacing_name() const { return spacing == Spacing::geometric ? "geometric" : "linear"; }
};

/// A subset of sampled times. Continuous mode holds sample intervals
/// [k*delta, (k+1)*delta); discrete mode holds integer times of Z_+.
/// Members are sorted unique sample indices.
class TimeSet {
public:
    enum class Mode { continuous, discrete };

    TimeSet(Mode mode, std::vector<std::uint64_t> members, double delta, double t_max);

    Mode mode() const { return mode_; }
    double delta() const { return delta_; }
    double t_max() const { return t_max_; }
    const std::vector<std::uint64_t>& members() const { return members_; }

    /// Lebesgue measure of S intersected with [0, T) (continuous), or the
    /// counting measure #{k in S : k < T} (discrete).
    double measure_before(double T) const;

    /// Image under t -> tau*t. Defined for continuous sets only: scaling a
    /// discrete set does not preserve density in Z_+ (the even integers have
    /// density 1/2 there, yet halving them yields all of Z_+, density 1), so
    /// discrete mode throws UnsupportedOperationError.
    TimeSet scaled(double tau) const;

    TimeSet united(const TimeSet& other) const;

    bool operator==(const TimeSet&) const = default;

private:
    Mode mode_;
    std::vector<std::uint64_t> members_;
    double delta_;
    double t_max_;
};

struct DensityEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> checkpoints;
    std::vector<double> values;  // running averages measure([0,T_j))/T_j
};

/// Sample times whose state satisfies the region predicate. Mode follows
/// the system: continuous for flows, discrete for maps and shifts.
TimeSet hitting_times(const OrbitSample& orbit, const std::function<bool(const State&)>& region);

/// Running sojourn averages at explicit checkpoints; lower/upper are
/// min/max over the tail window. Checkpoints must be increasing, positive,
/// and nonempty.
DensityEstimate density(const TimeSet& ts, std::span<const double> checkpoints, double tail_fraction);

DensityEstimate density(const TimeSet& ts, const CheckpointPolicy& policy = {});

/// Upper density with the default policy (20 geometric checkpoints, tail
/// half).
double upper_density(const TimeSet& ts);

/// Write a time set as run-length-encoded CSV (start,end per run).
void write_timeset_rle_csv(std::ostream& out, const TimeSet& ts);

/// Write a density estimate as JSON {lower, upper, checkpoints[], values[]}.
void write_density_json(std::ostream& out, const DensityEstimate& est);

}  // namespace sojourn

#endif
