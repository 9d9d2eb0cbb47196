#include "sojourn/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sojourn/errors.hpp"

namespace sojourn {

std::vector<double> CheckpointPolicy::times(double t_max) const {
    if (count < 1) throw InvalidArgumentError("checkpoint policy: count must be positive");
    if (!(t_max > 0.0)) throw InvalidArgumentError("checkpoint policy: horizon must be positive");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw InvalidArgumentError("checkpoint policy: tail_fraction must lie in (0,1]");
    std::vector<double> out;
    out.reserve(count);
    for (int j = 1; j <= count; ++j) {
        double t = spacing == Spacing::geometric ? t_max / std::ldexp(1.0, count - j)
                                                 : t_max * static_cast<double>(j) / count;
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
}

std::size_t CheckpointPolicy::tail_start(std::size_t m) const {
    std::size_t tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(m)));
    tail = std::clamp<std::size_t>(tail, 1, m);
    return m - tail;
}

TimeSet::TimeSet(Mode mode, std::vector<std::uint64_t> members, double delta, double t_max)
    : mode_(mode), members_(std::move(members)), delta_(delta), t_max_(t_max) {
    if (!(delta_ > 0.0)) throw InvalidArgumentError("time set: delta must be positive");
    if (!(t_max_ > 0.0)) throw InvalidArgumentError("time set: t_max must be positive");
    for (std::size_t i = 1; i < members_.size(); ++i)
        if (members_[i] <= members_[i - 1]) throw InvalidArgumentError("time set: members must be sorted and unique");
    if (!members_.empty()) {
        double last = mode_ == Mode::discrete ? static_cast<double>(members_.back())
                                              : static_cast<double>(members_.back()) * delta_;
        if (last > t_max_ + 1e-9) throw InvalidArgumentError("time set: member past t_max");
    }
    if (mode_ == Mode::discrete && delta_ != 1.0)
        throw InvalidArgumentError("time set: discrete mode uses unit delta");
}

double TimeSet::measure_before(double T) const {
    if (T <= 0.0 || members_.empty()) return 0.0;
    if (mode_ == Mode::discrete) {
        // counting measure of {k in S : k < T}
        auto bound = static_cast<std::uint64_t>(std::ceil(T));
        auto it = std::lower_bound(members_.begin(), members_.end(), bound);
        return static_cast<double>(it - members_.begin());
    }
    // Lebesgue measure of the sample intervals [k*delta, (k+1)*delta)
    // intersected with [0, T)
    double q = T / delta_;
    auto kf = static_cast<std::uint64_t>(std::floor(q));
    auto it = std::lower_bound(members_.begin(), members_.end(), kf);
    double full = static_cast<double>(it - members_.begin()) * delta_;
    double partial = 0.0;
    if (it != members_.end() && *it == kf) partial = std::max(0.0, T - static_cast<double>(kf) * delta_);
    return full + partial;
}

TimeSet TimeSet::scaled(double tau) const {
    if (!(tau > 0.0)) throw InvalidArgumentError("scale: tau must be positive");
    if (mode_ == Mode::discrete)
        throw UnsupportedOperationError(
            "time scaling is undefined for discrete time sets: it does not preserve density in the "
            "nonnegative integers (halving {0,2,4,...}, of density 1/2, yields all of Z_+, density 1)");
    // each interval [k*delta, (k+1)*delta) maps onto [k*tau*delta, (k+1)*tau*delta)
    return TimeSet(Mode::continuous, members_, delta_ * tau, t_max_ * tau);
}

TimeSet TimeSet::united(const TimeSet& other) const {
    if (mode_ != other.mode_ || delta_ != other.delta_)
        throw InvalidArgumentError("union: time sets must share mode and grid");
    std::vector<std::uint64_t> merged;
    merged.reserve(members_.size() + other.members_.size());
    std::merge(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return TimeSet(mode_, std::move(merged), delta_, std::max(t_max_, other.t_max_));
}

TimeSet hitting_times(const OrbitSample& orbit, const std::function<bool(const State&)>& region) {
    std::vector<std::uint64_t> members;
    const bool discrete = orbit.system().kind() != SystemKind::flow && orbit.delta() == 1.0;
    for (std::uint64_t k = 0; k <= orbit.horizon(); ++k) {
        if (region(orbit.state(k))) members.push_back(k);
    }
    if (discrete)
        return TimeSet(TimeSet::Mode::discrete, std::move(members), 1.0, static_cast<double>(orbit.horizon()));
    return TimeSet(TimeSet::Mode::continuous, std::move(members), orbit.delta(),
                   orbit.delta() * static_cast<double>(orbit.horizon() + 1));
}

DensityEstimate density(const TimeSet& ts, std::span<const double> checkpoints, double tail_fraction) {
    if (checkpoints.empty()) throw InvalidArgumentError("density: checkpoint list must be nonempty");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw InvalidArgumentError("density: tail_fraction must lie in (0,1]");
    double prev = 0.0;
    for (double t : checkpoints) {
        if (!(t > prev)) throw InvalidArgumentError("density: checkpoints must be increasing and positive");
        prev = t;
    }
    if (prev > ts.t_max() * (1.0 + 1e-12) + 1e-9)
        throw InvalidArgumentError("density: checkpoint past the time set horizon");

    DensityEstimate est;
    est.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    est.values.reserve(checkpoints.size());
    for (double t : checkpoints) est.values.push_back(ts.measure_before(t) / t);

    CheckpointPolicy p;
    p.tail_fraction = tail_fraction;
    std::size_t from = p.tail_start(est.values.size());
    est.lower = *std::min_element(est.values.begin() + from, est.values.end());
    est.upper = *std::max_element(est.values.begin() + from, est.values.end());
    return est;
}

DensityEstimate density(const TimeSet& ts, const CheckpointPolicy& policy) {
    auto cps = policy.times(ts.t_max());
    return density(ts, cps, policy.tail_fraction);
}

double upper_density(const TimeSet& ts) {
    if (ts.members().empty()) return 0.0;
    return density(ts, CheckpointPolicy{}).upper;
}

void write_timeset_rle_csv(std::ostream& out, const TimeSet& ts) {
    out << "start,end\n";
    const auto& m = ts.members();
    char buf[64];
    std::size_t i = 0;
    while (i < m.size()) {
        std::size_t j = i;
        while (j + 1 < m.size() && m[j + 1] == m[j] + 1) ++j;
        if (ts.mode() == TimeSet::Mode::discrete) {
            out << m[i] << "," << m[j] << "\n";
        } else {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", static_cast<double>(m[i]) * ts.delta(),
                          (static_cast<double>(m[j]) + 1.0) * ts.delta());
            out << buf << "\n";
        }
        i = j + 1;
    }
}

void write_density_json(std::ostream& out, const DensityEstimate& est) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "{\"lower\": " << num(est.lower) << ", \"upper\": " << num(est.upper) << ", \"checkpoints\": [";
    for (std::size_t i = 0; i < est.checkpoints.size(); ++i) out << (i ? ", " : "") << num(est.checkpoints[i]);
    out << "], \"values\": [";
    for (std::size_t i = 0; i < est.values.size(); ++i) out << (i ? ", " : "") << num(est.values[i]);
    out << "]}";
}

}  // namespace sojourn
