#include "sojourn/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "sojourn/core.hpp"
#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

std::vector<std::uint64_t> segment_ends(std::uint64_t n_samples, int n_checkpoints) {
    if (n_checkpoints < 1) throw InvalidArgumentError("pair diagnostics: need at least one checkpoint");
    std::vector<std::uint64_t> ends;
    ends.reserve(n_checkpoints);
    for (int j = 1; j <= n_checkpoints; ++j) {
        auto e = static_cast<std::uint64_t>(std::llround(static_cast<double>(n_samples) * j / n_checkpoints));
        e = std::clamp<std::uint64_t>(e, 1, n_samples);
        if (ends.empty() || e > ends.back()) ends.push_back(e);
    }
    return ends;
}

double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;
    return y;
}

double dense_distance(MetricKind metric, std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d;
        if (metric == MetricKind::circle) {
            d = std::fabs(wrap01(a[i]) - wrap01(b[i]));
            d = std::min(d, 1.0 - d);
        } else {
            d = a[i] - b[i];
        }
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Distance between same-index samples of two orbits over the same system.
double sample_distance(const SystemSpec& system, const OrbitSample& a, std::uint64_t ka, const OrbitSample& b,
                       std::uint64_t kb) {
    if (a.is_symbolic()) {
        for (int i = 0; i < kSymbolDepth; ++i)
            if (a.symbol(ka, i) != b.symbol(kb, i)) return std::ldexp(1.0, -i);
        return 0.0;
    }
    return dense_distance(system.metric(), a.coords(ka), b.coords(kb));
}

double sample_to_state_distance(const SystemSpec& system, const OrbitSample& a, std::uint64_t ka, const State& y) {
    if (a.is_symbolic()) {
        const auto& sy = std::get<SymbolicState>(y);
        for (int i = 0; i < kSymbolDepth; ++i)
            if (a.symbol(ka, i) != sy.symbol(i)) return std::ldexp(1.0, -i);
        return 0.0;
    }
    const auto& dy = std::get<DenseState>(y);
    return dense_distance(system.metric(), a.coords(ka), dy);
}

OrbitSample sample_or_escape(const SystemSpec& system, const State& x, double delta, std::uint64_t horizon) {
    try {
        return sample_orbit(system, x, delta, horizon);
    } catch (const NumericOverflowError& e) {
        throw NotLagrangeStableError(std::string("orbit is unbounded: ") + e.what(), e.index().value_or(0));
    }
}

}  // namespace

double PairDiagnostics::window_min_pair(std::size_t first_segment) const {
    double lo = seg_min_pair.at(first_segment);
    for (std::size_t j = first_segment; j < seg_min_pair.size(); ++j) lo = std::min(lo, seg_min_pair[j]);
    return lo;
}

double PairDiagnostics::window_max_pair(std::size_t first_segment) const {
    double hi = seg_max_pair.at(first_segment);
    for (std::size_t j = first_segment; j < seg_max_pair.size(); ++j) hi = std::max(hi, seg_max_pair[j]);
    return hi;
}

PairDiagnostics pair_diagnostics(const SystemSpec& system, const State& x, const State& y, std::uint64_t horizon,
                                 int n_checkpoints, double delta) {
    auto ox = sample_or_escape(system, x, delta, horizon);
    auto oy = sample_or_escape(system, y, delta, horizon);

    const std::uint64_t n = ox.size();
    std::vector<double> pair_signal(n), point_signal(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        pair_signal[k] = sample_distance(system, ox, k, oy, k);
        point_signal[k] = sample_to_state_distance(system, ox, k, y);
    }

    auto ends = segment_ends(n, n_checkpoints);
    auto ext_pair = core::segment_extrema(pair_signal, ends);
    auto ext_point = core::segment_extrema(point_signal, ends);

    PairDiagnostics d;
    d.horizon = horizon;
    d.delta = ox.delta();
    d.checkpoint_times.reserve(ends.size());
    for (auto e : ends) d.checkpoint_times.push_back(static_cast<double>(e) * ox.delta());
    d.seg_min_pair = std::move(ext_pair.mins);
    d.seg_max_pair = std::move(ext_pair.maxs);
    d.seg_min_point = std::move(ext_point.mins);
    d.seg_max_point = std::move(ext_point.maxs);

    const std::size_t m = ends.size();
    const std::size_t tail = m - (m + 1) / 2;  // tail half
    d.liminf_pair = *std::min_element(d.seg_min_pair.begin() + tail, d.seg_min_pair.end());
    d.limsup_pair = *std::max_element(d.seg_max_pair.begin() + tail, d.seg_max_pair.end());
    d.liminf_point = *std::min_element(d.seg_min_point.begin() + tail, d.seg_min_point.end());
    d.limsup_point = *std::max_element(d.seg_max_point.begin() + tail, d.seg_max_point.end());
    return d;
}

bool is_li_yorke(const PairDiagnostics& d, double zero_tol, double pos_tol) {
    if (!(pos_tol > zero_tol)) throw InvalidArgumentError("is_li_yorke: pos_tol must exceed zero_tol");
    return d.liminf_pair <= zero_tol && d.limsup_pair >= pos_tol;
}

bool is_chaotic_motion(const SystemSpec& system, const State& x, const State& y, std::uint64_t horizon,
                       double zero_tol, double pos_tol, double delta) {
    if (!(pos_tol > zero_tol)) throw InvalidArgumentError("is_chaotic_motion: pos_tol must exceed zero_tol");
    auto d = pair_diagnostics(system, x, y, horizon, 20, delta);
    return d.liminf_point <= zero_tol && d.limsup_point >= pos_tol && d.liminf_pair <= zero_tol &&
           d.limsup_pair >= pos_tol;
}

PartnerResult find_li_yorke_partner(const SystemSpec& system, const State& x, std::span<const State> candidates,
                                    std::uint64_t horizon, double zero_tol, double pos_tol, double delta) {
    if (candidates.empty()) throw InvalidArgumentError("find_li_yorke_partner: candidate list must be nonempty");
    if (!(pos_tol > zero_tol)) throw InvalidArgumentError("find_li_yorke_partner: pos_tol must exceed zero_tol");

    PartnerResult out;
    out.all.resize(candidates.size());
    core::parallel_for(candidates.size(), [&](std::size_t i) {
        out.all[i] = pair_diagnostics(system, x, candidates[i], horizon, 20, delta);
    });

    double best_limsup = -1.0;
    for (std::size_t i = 0; i < out.all.size(); ++i) {
        const auto& d = out.all[i];
        if (d.liminf_pair <= zero_tol) {
            out.any_proximal = true;
            if (d.limsup_pair > best_limsup) {
                best_limsup = d.limsup_pair;
                out.best_index = i;
                out.best = d;
            }
        }
    }
    out.found = out.any_proximal && out.best.limsup_pair >= pos_tol;
    return out;
}

SensitivityScan sensitivity_scan(const SystemSpec& system, const McaEstimate& est, int n_anchor, int n_probe,
                                 std::uint64_t horizon, std::uint64_t seed, std::span<const double> radii,
                                 double delta) {
    if (est.cells.size() < 2)
        throw DegenerateEstimateError("sensitivity scan needs at least two estimate cells; a single cell "
                                      "leaves no second motion to separate from");
    if (n_anchor < 1 || n_probe < 1) throw InvalidArgumentError("sensitivity scan: need positive sample counts");
    if (radii.empty()) throw InvalidArgumentError("sensitivity scan: need at least one probe radius");

    SensitivityScan scan;

    // evenly sampled anchor cells
    const std::size_t n_cells = est.cells.size();
    const std::size_t take = std::min<std::size_t>(n_anchor, n_cells);
    for (std::size_t i = 0; i < take; ++i) scan.anchor_cells.push_back(est.cells[i * n_cells / take]);

    // farthest excursion of the motion from q against a fixed anchor point
    const std::uint64_t seg_len = std::max<std::uint64_t>(2, horizon / 10);
    auto excursion = [&](const State& anchor, std::uint32_t q_cell) {
        double far = 0.0;
        for_each_state(system, est.partition.center(q_cell), delta, seg_len,
                       [&](std::uint64_t, const State& s) { far = std::max(far, system.distance(anchor, s)); });
        return far;
    };

    scan.delta_hat = std::numeric_limits<double>::infinity();
    for (std::uint32_t a : scan.anchor_cells) {
        State anchor = est.partition.center(a);
        double best = 0.0;
        for (std::uint32_t q : scan.anchor_cells) best = std::max(best, excursion(anchor, q));
        scan.delta_hat = std::min(scan.delta_hat, best);
    }
    scan.eps_hat = scan.delta_hat / 4.0;

    // witness search: probes in shrinking neighborhoods of each anchor
    std::mt19937_64 rng(seed);
    const bool symbolic = est.partition.kind() == BoxPartition::Kind::cylinders;
    auto perturb = [&](const State& anchor, double radius) -> State {
        if (symbolic) {
            // agree with the anchor to depth ceil(-log2 r), random afterwards
            int depth = radius >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log2(radius)));
            const auto& sym = std::get<SymbolicState>(anchor);
            std::string prefix;
            for (int i = 0; i < depth; ++i) prefix += char('0' + sym.symbol(i));
            auto tail_seed = rng();
            auto tail = random_point(tail_seed);
            auto blocks = [prefix, tail](std::size_t k) {
                if (k == 0 && !prefix.empty()) return prefix;
                std::string b(64, '0');
                std::size_t base = (k - (prefix.empty() ? 0 : 1)) * 64;
                for (int i = 0; i < 64; ++i) b[i] = char('0' + tail->at(base + i));
                return b;
            };
            return SymbolicState{std::make_shared<ConcatSource>(blocks, "probe"), 0};
        }
        const auto& x = std::get<DenseState>(anchor);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        DenseState y(x.size());
        double scale = radius / std::sqrt(static_cast<double>(x.size()));
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + scale * u(rng);
        return y;
    };

    scan.sensitive = true;
    for (std::uint32_t a : scan.anchor_cells) {
        State anchor = est.partition.center(a);
        for (double r : radii) {
            std::vector<State> cloud{anchor};
            for (int p = 0; p < n_probe; ++p) cloud.push_back(perturb(anchor, r));

            // limsup separation over all pairs touching at least one probe
            double achieved = 0.0;
            std::vector<OrbitSample> orbits;
            orbits.reserve(cloud.size());
            for (const auto& s : cloud) orbits.push_back(sample_or_escape(system, s, delta, horizon));
            const std::uint64_t n = orbits[0].size();
            const std::uint64_t tail_from = n / 2;
            for (std::size_t i = 0; i < cloud.size(); ++i) {
                for (std::size_t j = i + 1; j < cloud.size(); ++j) {
                    double hi = 0.0;
                    for (std::uint64_t k = tail_from; k < n; ++k)
                        hi = std::max(hi, sample_distance(system, orbits[i], k, orbits[j], k));
                    achieved = std::max(achieved, hi);
                }
            }

            SensitivityWitness w;
            w.anchor_cell = a;
            w.radius = r;
            w.achieved = achieved;
            w.success = achieved >= scan.eps_hat && scan.eps_hat > 0.0;
            scan.witnesses.push_back(w);
            if (!w.success) scan.sensitive = false;
        }
    }
    return scan;
}

double diameter(const BoxPartition& partition, std::span<const std::uint32_t> cells) {
    if (cells.empty()) throw InvalidArgumentError("diameter: empty cell set");
    double best = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            best = std::max(best, partition.center_distance(cells[i], cells[j]));
    return std::min(best + partition.cell_diameter(), partition.space_diameter());
}

void write_witness_csv(std::ostream& out, const SensitivityScan& scan, const BoxPartition& partition) {
    out << "anchor_cell,radius,achieved,success\n";
    char buf[64];
    for (const auto& w : scan.witnesses) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", w.radius, w.achieved);
        out << w.anchor_cell << "," << buf << "," << (w.success ? 1 : 0) << "\n";
    }
    (void)partition;
}

}  // namespace sojourn
