#ifndef SOJOURN_CORE_HPP
#define SOJOURN_CORE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sojourn/partition.hpp"
#include "sojourn/systems.hpp"

namespace sojourn::core {

/// Worker cap for the parallel kernels. 0 means the OpenMP default. The
/// parallel kernels produce results identical to the serial references at
/// any thread count: per-chunk integer counts merge in fixed order and
/// min/max reductions are order-independent.
void set_max_threads(int n);
int max_threads();

/// Cumulative per-cell visit counts of orbit samples 0..k-1 snapshotted at
/// each index in snap_indices (increasing, last <= orbit.size()). Result is
/// one row of cell_count() counts per snapshot. Throws
/// NotLagrangeStableError naming the first escaping sample.
std::vector<std::vector<std::uint64_t>> cell_counts_serial(const OrbitSample& orbit, const BoxPartition& partition,
                                                           std::span<const std::uint64_t> snap_indices);
std::vector<std::vector<std::uint64_t>> cell_counts_parallel(const OrbitSample& orbit, const BoxPartition& partition,
                                                             std::span<const std::uint64_t> snap_indices);
std::vector<std::vector<std::uint64_t>> cell_counts(const OrbitSample& orbit, const BoxPartition& partition,
                                                    std::span<const std::uint64_t> snap_indices);

/// Cumulative counts of samples satisfying a per-sample flag, snapshotted
/// like cell_counts.
std::vector<std::uint64_t> flag_counts_serial(std::span<const std::uint8_t> flags,
                                              std::span<const std::uint64_t> snap_indices);
std::vector<std::uint64_t> flag_counts_parallel(std::span<const std::uint8_t> flags,
                                                std::span<const std::uint64_t> snap_indices);
std::vector<std::uint64_t> flag_counts(std::span<const std::uint8_t> flags,
                                       std::span<const std::uint64_t> snap_indices);

/// Min and max of a signal over each index segment [seg_begin[i],
/// seg_begin[i+1]) with seg_begin implicitly starting at 0 and ending at
/// signal size: seg_ends holds the (increasing) segment end indices.
struct SegmentExtrema {
    std::vector<double> mins;
    std::vector<double> maxs;
};
SegmentExtrema segment_extrema_serial(std::span<const double> signal, std::span<const std::uint64_t> seg_ends);
SegmentExtrema segment_extrema_parallel(std::span<const double> signal, std::span<const std::uint64_t> seg_ends);
SegmentExtrema segment_extrema(std::span<const double> signal, std::span<const std::uint64_t> seg_ends);

/// Per-sample cell membership flags for a sorted cell set.
std::vector<std::uint8_t> membership_flags(const OrbitSample& orbit, const BoxPartition& partition,
                                           std::span<const std::uint8_t> cell_flags);

/// Run fn(i) for i in [0, n), distributing across threads. Exceptions from
/// workers are rethrown (first by index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sojourn::core

#endif
