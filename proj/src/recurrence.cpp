#include "sojourn/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

// Visit sample indices of the ball B_eps(x0) along the orbit.
std::vector<std::uint64_t> ball_visits(const OrbitSample& orbit, double epsilon) {
    const auto& system = orbit.system();
    State x0 = orbit.state(0);
    std::vector<std::uint64_t> visits;
    for (std::uint64_t k = 0; k <= orbit.horizon(); ++k)
        if (system.distance(orbit.state(k), x0) <= epsilon) visits.push_back(k);
    return visits;
}

// Greedy unit separation: keep a visit when it is at least ceil(1/delta)
// samples after the last kept one.
std::vector<std::uint64_t> separate_returns(std::span<const std::uint64_t> visits, double delta) {
    std::uint64_t gap = static_cast<std::uint64_t>(std::ceil(1.0 / delta - 1e-12));
    gap = std::max<std::uint64_t>(gap, 1);
    std::vector<std::uint64_t> kept;
    for (std::uint64_t k : visits)
        if (kept.empty() || k >= kept.back() + gap) kept.push_back(k);
    return kept;
}

std::uint64_t count_before(std::span<const std::uint64_t> sorted, double time_bound, double delta) {
    // number of kept returns with sample time k*delta < time_bound
    auto idx_bound = time_bound / delta;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), static_cast<std::uint64_t>(std::ceil(idx_bound - 1e-12)));
    return static_cast<std::uint64_t>(it - sorted.begin());
}

}  // namespace

QwapWitness qwap_test(const OrbitSample& orbit, double epsilon, int n_max) {
    if (!(epsilon > 0.0)) throw InvalidArgumentError("qwap_test: epsilon must be positive");
    if (n_max < 1) throw InvalidArgumentError("qwap_test: n_max must be positive");

    auto kept = separate_returns(ball_visits(orbit, epsilon), orbit.delta());
    const double duration = static_cast<double>(orbit.size()) * orbit.delta();

    QwapWitness w;
    for (int N = 1; N <= n_max; ++N) {
        // Witness counts n with at least n separated returns inside [0, n*N).
        // Three witnesses stand in for the unbounded sequence; they must
        // grow (n2 >= 2*n1, n3 >= 4*n1), reach the horizon scale (n3 >= 16
        // where the horizon permits), and the counting rate must not decay,
        // so that vanishing-rate returns cannot pass on small prefixes.
        const auto n_limit = static_cast<std::uint64_t>(duration / N);
        const std::uint64_t n_cap = std::min<std::uint64_t>(16, n_limit);
        std::uint64_t n1 = 0, n2 = 0, n3 = 0;
        for (std::uint64_t n = 1; n <= n_limit && n3 == 0; ++n) {
            if (count_before(kept, static_cast<double>(n) * N, orbit.delta()) < n) continue;
            if (n1 == 0)
                n1 = n;
            else if (n2 == 0 && n >= 2 * n1)
                n2 = n;
            else if (n2 != 0 && n > n2 && n >= std::max(4 * n1, n_cap))
                n3 = n;
        }
        if (n3 == 0) continue;
        double r1 = static_cast<double>(count_before(kept, static_cast<double>(n1) * N, orbit.delta())) /
                    (static_cast<double>(n1) * N);
        double r3 = static_cast<double>(count_before(kept, static_cast<double>(n3) * N, orbit.delta())) /
                    (static_cast<double>(n3) * N);
        if (r3 < 0.5 * r1) continue;
        w.ok = true;
        w.window = N;
        w.counts = {n1, n2, n3};
        for (std::uint64_t k : kept) {
            if (static_cast<double>(k) * orbit.delta() >= static_cast<double>(n3) * N) break;
            w.return_times.push_back(static_cast<double>(k) * orbit.delta());
        }
        return w;
    }
    return w;
}

bool poisson_stable_test(const OrbitSample& orbit, double epsilon, int n_returns) {
    if (!(epsilon > 0.0)) throw InvalidArgumentError("poisson_stable_test: epsilon must be positive");
    auto visits = ball_visits(orbit, epsilon);
    // drop the trivial visit at t = 0
    std::vector<std::uint64_t> positive;
    for (std::uint64_t k : visits)
        if (k > 0) positive.push_back(k);
    if (positive.size() < static_cast<std::size_t>(n_returns)) return false;
    return positive.back() >= (orbit.horizon() * 3) / 4;
}

BirkhoffReport birkhoff_recurrent_test(const OrbitSample& orbit, double epsilon, double gap_bound) {
    if (!(epsilon > 0.0)) throw InvalidArgumentError("birkhoff_recurrent_test: epsilon must be positive");
    if (!(gap_bound > 0.0)) throw InvalidArgumentError("birkhoff_recurrent_test: gap_bound must be positive");
    auto visits = ball_visits(orbit, epsilon);

    BirkhoffReport report;
    report.n_returns = visits.size();
    if (visits.empty()) {
        report.max_gap = orbit.duration();
        report.ok = false;
        return report;
    }
    std::uint64_t max_gap = visits.front();
    for (std::size_t i = 1; i < visits.size(); ++i) max_gap = std::max(max_gap, visits[i] - visits[i - 1]);
    max_gap = std::max(max_gap, orbit.horizon() - visits.back());
    report.max_gap = static_cast<double>(max_gap) * orbit.delta();
    report.ok = report.max_gap <= gap_bound;
    return report;
}

CrosscheckReport prop_qwap_center_crosscheck(const SystemSpec& system, const State& x0, const BoxPartition& partition,
                                             const CrosscheckParams& params) {
    auto orbit = sample_orbit(system, x0, params.delta, params.horizon);
    auto est = estimate_mca(orbit, partition, params.delta_pos, params.policy);

    CrosscheckReport report;
    report.estimate_cells = est.cells;
    double eps = 2.0 * partition.cell_diameter();
    report.witness = qwap_test(orbit, eps, params.qwap_n_max);
    report.qwap = report.witness.ok;

    report.x0_cell = partition.locate(x0);
    report.in_estimate =
        report.x0_cell && std::binary_search(est.cells.begin(), est.cells.end(), *report.x0_cell);
    report.ok = report.qwap == report.in_estimate;
    return report;
}

void write_qwap_json(std::ostream& out, const QwapWitness& w) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "{\"ok\": " << (w.ok ? "true" : "false") << ", \"window\": " << w.window << ", \"counts\": [";
    for (std::size_t i = 0; i < w.counts.size(); ++i) out << (i ? ", " : "") << w.counts[i];
    out << "], \"return_times\": [";
    for (std::size_t i = 0; i < w.return_times.size(); ++i) out << (i ? ", " : "") << num(w.return_times[i]);
    out << "]}";
}

}  // namespace sojourn
