// Benchmark of the parallel fold kernels against their serial references:
// per-cell occupancy counting, membership counting, and segment extrema on a
// long orbit, plus an ensemble of estimates.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "sojourn/core.hpp"
#include "sojourn/mca.hpp"
#include "sojourn/systems.hpp"

using namespace sojourn;

namespace {

double seconds_of(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t n = 4'000'000;
    if (argc > 1) n = std::stoull(argv[1]);

    const double golden = 0.61803398874989484820;
    auto system = SystemSpec::rotation(golden);
    auto partition = BoxPartition::circle(256);
    std::printf("orbit samples: %llu, cells: %zu, threads: %d\n", static_cast<unsigned long long>(n),
                partition.cell_count(), core::max_threads());
    auto orbit = sample_orbit(system, DenseState{0.0}, 1.0, n);

    CheckpointPolicy policy;
    auto times = policy.times(static_cast<double>(orbit.size()));
    std::vector<std::uint64_t> snaps;
    for (double t : times) snaps.push_back(static_cast<std::uint64_t>(t));

    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    std::vector<std::vector<std::uint64_t>> counts_s, counts_p;
    double t_s = seconds_of([&] { counts_s = core::cell_counts_serial(orbit, partition, snaps); });
    double t_p = seconds_of([&] { counts_p = core::cell_counts_parallel(orbit, partition, snaps); });
    row("cell_counts", t_s, t_p);
    if (counts_s != counts_p) {
        std::fprintf(stderr, "mismatch: cell_counts parallel != serial\n");
        return 1;
    }

    auto flags = core::membership_flags(orbit, partition, partition.flags(std::vector<std::uint32_t>{0, 1, 2, 3}));
    std::vector<std::uint64_t> fc_s, fc_p;
    t_s = seconds_of([&] { fc_s = core::flag_counts_serial(flags, snaps); });
    t_p = seconds_of([&] { fc_p = core::flag_counts_parallel(flags, snaps); });
    row("flag_counts", t_s, t_p);
    if (fc_s != fc_p) {
        std::fprintf(stderr, "mismatch: flag_counts parallel != serial\n");
        return 1;
    }

    std::vector<double> signal(orbit.size());
    for (std::uint64_t k = 0; k < orbit.size(); ++k) signal[k] = orbit.coords(k)[0];
    std::vector<std::uint64_t> seg_ends;
    for (int j = 1; j <= 64; ++j) seg_ends.push_back(orbit.size() * j / 64);
    core::SegmentExtrema ex_s, ex_p;
    t_s = seconds_of([&] { ex_s = core::segment_extrema_serial(signal, seg_ends); });
    t_p = seconds_of([&] { ex_p = core::segment_extrema_parallel(signal, seg_ends); });
    row("segment_extrema", t_s, t_p);
    if (ex_s.mins != ex_p.mins || ex_s.maxs != ex_p.maxs) {
        std::fprintf(stderr, "mismatch: segment_extrema parallel != serial\n");
        return 1;
    }

    // ensemble: one estimate per start, distributed by parallel_for
    const int ensemble = 32;
    const std::uint64_t short_horizon = n / 16;
    auto run_ensemble = [&](int max_threads) {
        core::set_max_threads(max_threads);
        std::vector<std::size_t> flagged(ensemble, 0);
        core::parallel_for(ensemble, [&](std::size_t i) {
            auto o = sample_orbit(system, DenseState{static_cast<double>(i) / ensemble}, 1.0, short_horizon);
            flagged[i] = estimate_mca(o, partition).cells.size();
        });
        return flagged;
    };
    t_s = seconds_of([&] { run_ensemble(1); });
    t_p = seconds_of([&] { run_ensemble(0); });
    core::set_max_threads(0);
    row("ensemble estimates", t_s, t_p);

    return 0;
}
