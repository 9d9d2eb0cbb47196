#include "sojourn/mca.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sojourn/core.hpp"
#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

// Snapshot sample indices for checkpoint times on the orbit grid.
std::vector<std::uint64_t> snap_indices(std::uint64_t n_samples, double delta, std::span<const double> times) {
    std::vector<std::uint64_t> out;
    out.reserve(times.size());
    for (double t : times) {
        auto idx = static_cast<std::uint64_t>(std::llround(t / delta));
        idx = std::clamp<std::uint64_t>(idx, 1, n_samples);
        if (out.empty() || idx > out.back()) out.push_back(idx);
    }
    return out;
}

// Density estimate of a per-sample membership flag vector: running averages
// count/index at the policy's checkpoints.
DensityEstimate flag_density(std::span<const std::uint8_t> sample_flags, double delta,
                             const CheckpointPolicy& policy) {
    const auto n = static_cast<std::uint64_t>(sample_flags.size());
    auto times = policy.times(static_cast<double>(n) * delta);
    auto snaps = snap_indices(n, delta, times);
    auto counts = core::flag_counts(sample_flags, snaps);

    DensityEstimate est;
    est.checkpoints.reserve(snaps.size());
    est.values.reserve(snaps.size());
    for (std::size_t j = 0; j < snaps.size(); ++j) {
        est.checkpoints.push_back(static_cast<double>(snaps[j]) * delta);
        est.values.push_back(static_cast<double>(counts[j]) / static_cast<double>(snaps[j]));
    }
    std::size_t from = policy.tail_start(est.values.size());
    est.lower = *std::min_element(est.values.begin() + from, est.values.end());
    est.upper = *std::max_element(est.values.begin() + from, est.values.end());
    return est;
}

std::uint64_t steps_per_sample(const SystemSpec& system, double theta) {
    if (system.kind() == SystemKind::flow) return 1;
    auto r = std::llround(theta);
    return r >= 1 ? static_cast<std::uint64_t>(r) : 1;
}

}  // namespace

double sojourn_fraction(const OrbitSample& orbit, const std::function<bool(const State&)>& region, double T) {
    if (!(T > 0.0)) throw InvalidArgumentError("sojourn_fraction: T must be positive");
    const double delta = orbit.delta();
    if (T > static_cast<double>(orbit.size()) * delta * (1.0 + 1e-12))
        throw InvalidArgumentError("sojourn_fraction: T exceeds the sampled horizon");
    double q = T / delta;
    auto full = static_cast<std::uint64_t>(std::floor(q));
    double acc = 0.0;
    for (std::uint64_t k = 0; k < full && k <= orbit.horizon(); ++k)
        if (region(orbit.state(k))) acc += delta;
    if (full <= orbit.horizon() && q > static_cast<double>(full)) {
        if (region(orbit.state(full))) acc += T - static_cast<double>(full) * delta;
    }
    return acc / T;
}

McaEstimate estimate_mca(const OrbitSample& orbit, const BoxPartition& partition, double delta_pos,
                         const CheckpointPolicy& policy) {
    if (delta_pos <= 0.0) delta_pos = default_delta_pos(orbit.size());
    auto times = policy.times(static_cast<double>(orbit.size()) * orbit.delta());
    auto snaps = snap_indices(orbit.size(), orbit.delta(), times);
    auto counts = core::cell_counts(orbit, partition, snaps);

    McaEstimate est;
    est.partition = partition;
    est.delta_pos = delta_pos;
    est.horizon = orbit.horizon();
    est.theta = orbit.delta();
    est.policy = policy;

    const std::size_t cells = partition.cell_count();
    const std::size_t from = policy.tail_start(snaps.size());
    est.cell_upper.assign(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
        double up = 0.0;
        for (std::size_t j = from; j < snaps.size(); ++j)
            up = std::max(up, static_cast<double>(counts[j][c]) / static_cast<double>(snaps[j]));
        est.cell_upper[c] = up;
        if (up >= delta_pos) est.cells.push_back(static_cast<std::uint32_t>(c));
    }
    return est;
}

CenterReport verify_center(const OrbitSample& orbit, const BoxPartition& partition,
                           std::span<const std::uint32_t> candidate, double epsilon, double tol,
                           const CheckpointPolicy& policy) {
    if (epsilon + 1e-12 < partition.cell_diameter())
        throw InvalidArgumentError("verify_center: epsilon must be at least one cell diameter");
    auto fat = partition.fatten(candidate, epsilon);
    auto cell_flags = partition.flags(fat);
    auto sample_flags = core::membership_flags(orbit, partition, cell_flags);

    CenterReport report;
    report.density = flag_density(sample_flags, orbit.delta(), policy);
    report.required = 1.0 - tol;
    report.ok = report.density.lower >= report.required;
    return report;
}

MinimalityReport verify_minimality(const OrbitSample& orbit, const McaEstimate& est, double tol,
                                   const CheckpointPolicy& policy) {
    MinimalityReport report;
    report.ok = true;
    if (est.cells.empty()) return report;

    auto times = policy.times(static_cast<double>(orbit.size()) * orbit.delta());
    auto snaps = snap_indices(orbit.size(), orbit.delta(), times);
    auto counts = core::cell_counts(orbit, est.partition, snaps);

    // Removal keeps the remaining cells unfattened: a removed cell's own
    // visit share must show up as a density drop, so the estimate's visits
    // are counted per cell identity.
    const std::size_t from = policy.tail_start(snaps.size());
    std::vector<std::uint64_t> total(snaps.size(), 0);
    for (std::size_t j = 0; j < snaps.size(); ++j)
        for (std::uint32_t c : est.cells) total[j] += counts[j][c];

    report.retained_lower.reserve(est.cells.size());
    for (std::uint32_t c : est.cells) {
        double lower = 1.0;
        for (std::size_t j = from; j < snaps.size(); ++j) {
            double v = static_cast<double>(total[j] - counts[j][c]) / static_cast<double>(snaps[j]);
            lower = std::min(lower, v);
        }
        report.retained_lower.push_back(lower);
        if (lower >= 1.0 - tol && !report.removable) {
            report.removable = c;
            report.ok = false;
        }
    }
    return report;
}

bool check_invariance(const SystemSpec& system, const McaEstimate& est, std::uint64_t steps, double epsilon) {
    if (est.cells.empty()) throw InvalidArgumentError("check_invariance: empty estimate");
    const std::uint64_t per = steps_per_sample(system, est.theta);
    for (std::uint32_t c : est.cells) {
        State y = est.partition.center(c);
        for (std::uint64_t k = 0; k < steps; ++k) {
            y = system.advance(std::move(y), per, est.theta);
            if (est.partition.point_set_distance(y, est.cells) > epsilon) return false;
        }
    }
    return true;
}

double agreement_score(const BoxPartition& partition, std::span<const std::uint32_t> cells_a,
                       std::span<const std::uint32_t> cells_b) {
    // one-cell fattening (touching neighbors) absorbs boundary flicker
    auto fat_a = partition.flags(partition.fatten(cells_a, 0.0));
    auto fat_b = partition.flags(partition.fatten(cells_b, 0.0));
    auto in_a = partition.flags(cells_a);
    auto in_b = partition.flags(cells_b);
    std::size_t disagree = 0;
    for (std::size_t c = 0; c < partition.cell_count(); ++c) {
        bool bad = (in_a[c] && !fat_b[c]) || (in_b[c] && !fat_a[c]);
        if (bad) ++disagree;
    }
    return 1.0 - static_cast<double>(disagree) / static_cast<double>(partition.cell_count());
}

ThetaAgreement theta_robustness(const OrbitSample& orbit_a, const OrbitSample& orbit_b,
                                const BoxPartition& partition, double delta_pos, const CheckpointPolicy& policy,
                                double warn_below) {
    const double slack = std::max(orbit_a.delta(), orbit_b.delta()) * (1.0 + 1e-9);
    if (std::fabs(orbit_a.duration() - orbit_b.duration()) > slack)
        throw InvalidArgumentError("theta_robustness: orbits must cover the same horizon time");
    auto est_a = estimate_mca(orbit_a, partition, delta_pos, policy);
    auto est_b = estimate_mca(orbit_b, partition, delta_pos, policy);

    ThetaAgreement out;
    out.cells_a = est_a.cells;
    out.cells_b = est_b.cells;
    out.score = agreement_score(partition, est_a.cells, est_b.cells);
    out.resonance_warning = out.score < warn_below;
    return out;
}

GenericityResult genericity_probe(const SystemSpec& system, const McaEstimate& reference, const StateSampler& sampler,
                                  int n_samples, std::uint64_t horizon, std::uint64_t seed, double agree_at) {
    if (n_samples < 1) throw InvalidArgumentError("genericity_probe: n_samples must be positive");
    std::mt19937_64 rng(seed);
    std::vector<State> starts;
    starts.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) starts.push_back(sampler(rng));

    GenericityResult out;
    out.scores.assign(n_samples, 0.0);
    std::vector<std::uint8_t> escaped(n_samples, 0);

    core::parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        try {
            auto orbit = sample_orbit(system, starts[i], reference.theta, horizon);
            auto est = estimate_mca(orbit, reference.partition, reference.delta_pos, reference.policy);
            out.scores[i] = agreement_score(reference.partition, reference.cells, est.cells);
        } catch (const NotLagrangeStableError&) {
            // an escaping start simply fails to agree
            escaped[i] = 1;
        }
    });

    int agreeing = 0;
    for (int i = 0; i < n_samples; ++i) {
        if (!escaped[i] && out.scores[i] >= agree_at)
            ++agreeing;
        else
            out.disagreeing.push_back(starts[i]);
    }
    out.fraction = static_cast<double>(agreeing) / static_cast<double>(n_samples);
    return out;
}

StateSampler uniform_sampler(const BoxPartition& partition) {
    if (partition.kind() == BoxPartition::Kind::cylinders) {
        return [](std::mt19937_64& rng) -> State {
            return SymbolicState{random_point(rng()), 0};
        };
    }
    const int dim = partition.dimension();
    std::vector<double> lo = partition.lower_bounds();
    std::vector<double> hi = partition.upper_bounds();
    return [dim, lo = std::move(lo), hi = std::move(hi)](std::mt19937_64& rng) -> State {
        DenseState x(dim);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int a = 0; a < dim; ++a) x[a] = lo[a] + u(rng) * (hi[a] - lo[a]);
        return x;
    };
}

DensityEstimate multi_attraction_density(const SystemSpec& system, const State& x0, const McaEstimate& est,
                                         std::span<const double> times, double epsilon, std::uint64_t horizon,
                                         double delta, const CheckpointPolicy& policy, std::uint64_t budget) {
    if (times.empty()) throw InvalidArgumentError("multi_attraction_density: need at least one time factor");
    double max_t = 0.0;
    for (double t : times) {
        if (!(t > 0.0)) throw InvalidArgumentError("multi_attraction_density: time factors must be positive");
        max_t = std::max(max_t, t);
    }
    double needed = max_t * static_cast<double>(horizon);
    if (needed > static_cast<double>(budget))
        throw BudgetExceededError("multi_attraction_density: horizon*max(times) = " + std::to_string(needed) +
                                  " exceeds the simulation budget " + std::to_string(budget));

    auto fat_flags = est.partition.flags(est.partition.fatten(est.cells, epsilon));
    std::vector<std::uint8_t> inside((horizon + 1), 1);

    if (system.kind() == SystemKind::flow) {
        for (double t : times) {
            auto orbit = sample_orbit(system, x0, t * delta, horizon);
            for (std::uint64_t k = 0; k <= horizon; ++k) {
                auto cell = est.partition.locate(orbit, k);
                if (!(cell && fat_flags[*cell])) inside[k] = 0;
            }
        }
    } else {
        // one fine orbit covers all factors: factor i at parameter k reads
        // application round(t_i * k * delta)
        auto n_max = static_cast<std::uint64_t>(std::llround(max_t * static_cast<double>(horizon) * delta)) + 1;
        auto orbit = sample_orbit(system, x0, 1.0, n_max);
        for (double t : times) {
            for (std::uint64_t k = 0; k <= horizon; ++k) {
                auto n = static_cast<std::uint64_t>(std::llround(t * static_cast<double>(k) * delta));
                auto cell = est.partition.locate(orbit, n);
                if (!(cell && fat_flags[*cell])) inside[k] = 0;
            }
        }
    }

    double grid = system.kind() == SystemKind::flow ? delta : std::max(1.0, std::round(delta));
    return flag_density(inside, grid, policy);
}

std::function<bool(const State&)> ball_region(const SystemSpec& system, State center, double radius) {
    if (!(radius >= 0.0)) throw InvalidArgumentError("ball_region: radius must be nonnegative");
    return [system, center = std::move(center), radius](const State& s) {
        return system.distance(s, center) <= radius;
    };
}

std::function<bool(const State&)> cell_region(const BoxPartition& partition, std::vector<std::uint32_t> cells) {
    auto flags = partition.flags(cells);
    return [partition, flags = std::move(flags)](const State& s) {
        auto cell = partition.locate(s);
        return cell && flags[*cell];
    };
}

void write_mca_csv(std::ostream& out, const McaEstimate& est) {
    const bool symbolic = est.partition.kind() == BoxPartition::Kind::cylinders;
    out << (symbolic ? "cell,word,upper_density\n" : "cell,center,upper_density\n");
    char buf[64];
    for (std::uint32_t c : est.cells) {
        out << c << ",";
        State center = est.partition.center(c);
        if (symbolic) {
            const auto& sym = std::get<SymbolicState>(center);
            for (int i = 0; i < est.partition.cylinder_depth(); ++i) out << sym.symbol(i);
        } else {
            const auto& x = std::get<DenseState>(center);
            for (std::size_t a = 0; a < x.size(); ++a) {
                std::snprintf(buf, sizeof buf, "%.17g", x[a]);
                out << (a ? " " : "") << buf;
            }
        }
        std::snprintf(buf, sizeof buf, "%.17g", est.cell_upper[c]);
        out << "," << buf << "\n";
    }
}

}  // namespace sojourn
