#include "sojourn/core.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sojourn/errors.hpp"

namespace sojourn::core {

namespace {

std::atomic<int> g_max_threads{0};

int effective_threads() {
    int n = g_max_threads.load();
#ifdef _OPENMP
    if (n <= 0) n = omp_get_max_threads();
#else
    n = 1;
#endif
    return std::max(1, n);
}

// Chunk boundaries: the snapshot indices plus even subdivisions of large
// gaps, so chunks can be counted independently and merged in index order.
std::vector<std::uint64_t> chunk_bounds(std::uint64_t n, std::span<const std::uint64_t> snap_indices,
                                        std::uint64_t grain) {
    std::vector<std::uint64_t> bounds{0};
    auto push = [&](std::uint64_t b) {
        if (b > bounds.back()) bounds.push_back(b);
    };
    std::uint64_t prev = 0;
    auto subdivide = [&](std::uint64_t from, std::uint64_t to) {
        for (std::uint64_t b = from + grain; b < to; b += grain) push(b);
        push(to);
    };
    for (std::uint64_t s : snap_indices) {
        subdivide(prev, std::min(s, n));
        prev = std::min(s, n);
    }
    subdivide(prev, n);
    return bounds;
}

void check_snaps(std::uint64_t n, std::span<const std::uint64_t> snap_indices) {
    if (snap_indices.empty()) throw InvalidArgumentError("at least one snapshot index required");
    std::uint64_t prev = 0;
    for (std::uint64_t s : snap_indices) {
        if (s == 0 || s < prev) throw InvalidArgumentError("snapshot indices must be positive and increasing");
        prev = s;
    }
    if (prev > n) throw InvalidArgumentError("snapshot index past the orbit end");
}

void count_range(const OrbitSample& orbit, const BoxPartition& partition, std::uint64_t from, std::uint64_t to,
                 std::span<std::uint64_t> counts, std::uint64_t& first_escape) {
    for (std::uint64_t k = from; k < to; ++k) {
        auto cell = partition.locate(orbit, k);
        if (!cell) {
            first_escape = std::min(first_escape, k);
            return;
        }
        ++counts[*cell];
    }
}

constexpr std::uint64_t kNoEscape = ~std::uint64_t{0};

std::vector<std::vector<std::uint64_t>> snapshots_from_chunks(std::span<const std::uint64_t> snap_indices,
                                                              std::span<const std::uint64_t> bounds,
                                                              std::vector<std::vector<std::uint64_t>>& chunk_counts,
                                                              std::size_t cells) {
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(snap_indices.size());
    std::vector<std::uint64_t> acc(cells, 0);
    std::size_t next_snap = 0;
    for (std::size_t c = 0; c + 1 < bounds.size() && next_snap < snap_indices.size(); ++c) {
        const auto& part = chunk_counts[c];
        for (std::size_t i = 0; i < cells; ++i) acc[i] += part[i];
        while (next_snap < snap_indices.size() && snap_indices[next_snap] == bounds[c + 1]) {
            out.push_back(acc);
            ++next_snap;
        }
    }
    return out;
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() { return effective_threads(); }

std::vector<std::vector<std::uint64_t>> cell_counts_serial(const OrbitSample& orbit, const BoxPartition& partition,
                                                           std::span<const std::uint64_t> snap_indices) {
    check_snaps(orbit.size(), snap_indices);
    const std::size_t cells = partition.cell_count();
    std::vector<std::uint64_t> acc(cells, 0);
    std::vector<std::vector<std::uint64_t>> out;
    out.reserve(snap_indices.size());
    std::size_t next_snap = 0;
    for (std::uint64_t k = 0; k < orbit.size() && next_snap < snap_indices.size(); ++k) {
        auto cell = partition.locate(orbit, k);
        if (!cell)
            throw NotLagrangeStableError("orbit escapes the partition bounds at sample " + std::to_string(k), k);
        ++acc[*cell];
        while (next_snap < snap_indices.size() && snap_indices[next_snap] == k + 1) {
            out.push_back(acc);
            ++next_snap;
        }
    }
    return out;
}

std::vector<std::vector<std::uint64_t>> cell_counts_parallel(const OrbitSample& orbit, const BoxPartition& partition,
                                                             std::span<const std::uint64_t> snap_indices) {
    check_snaps(orbit.size(), snap_indices);
    const std::size_t cells = partition.cell_count();
    const std::uint64_t n = snap_indices.back();
    const auto bounds = chunk_bounds(n, snap_indices, 1u << 16);
    const std::size_t n_chunks = bounds.size() - 1;

    std::vector<std::vector<std::uint64_t>> chunk_counts(n_chunks, std::vector<std::uint64_t>(cells, 0));
    std::atomic<std::uint64_t> escape{kNoEscape};

#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
    for (std::size_t c = 0; c < n_chunks; ++c) {
        if (escape.load(std::memory_order_relaxed) != kNoEscape) continue;
        std::uint64_t esc = kNoEscape;
        count_range(orbit, partition, bounds[c], bounds[c + 1], chunk_counts[c], esc);
        if (esc != kNoEscape) {
            std::uint64_t cur = escape.load();
            while (esc < cur && !escape.compare_exchange_weak(cur, esc)) {
            }
        }
    }

    if (std::uint64_t esc = escape.load(); esc != kNoEscape)
        throw NotLagrangeStableError("orbit escapes the partition bounds at sample " + std::to_string(esc), esc);
    return snapshots_from_chunks(snap_indices, bounds, chunk_counts, cells);
}

std::vector<std::vector<std::uint64_t>> cell_counts(const OrbitSample& orbit, const BoxPartition& partition,
                                                    std::span<const std::uint64_t> snap_indices) {
    if (effective_threads() == 1) return cell_counts_serial(orbit, partition, snap_indices);
    return cell_counts_parallel(orbit, partition, snap_indices);
}

std::vector<std::uint64_t> flag_counts_serial(std::span<const std::uint8_t> flags,
                                              std::span<const std::uint64_t> snap_indices) {
    check_snaps(flags.size(), snap_indices);
    std::vector<std::uint64_t> out;
    out.reserve(snap_indices.size());
    std::uint64_t acc = 0;
    std::size_t next_snap = 0;
    for (std::uint64_t k = 0; k < flags.size() && next_snap < snap_indices.size(); ++k) {
        acc += flags[k];
        while (next_snap < snap_indices.size() && snap_indices[next_snap] == k + 1) {
            out.push_back(acc);
            ++next_snap;
        }
    }
    return out;
}

std::vector<std::uint64_t> flag_counts_parallel(std::span<const std::uint8_t> flags,
                                                std::span<const std::uint64_t> snap_indices) {
    check_snaps(flags.size(), snap_indices);
    const std::uint64_t n = snap_indices.back();
    const auto bounds = chunk_bounds(n, snap_indices, 1u << 18);
    const std::size_t n_chunks = bounds.size() - 1;
    std::vector<std::uint64_t> chunk_sums(n_chunks, 0);

#pragma omp parallel for schedule(static) num_threads(effective_threads())
    for (std::size_t c = 0; c < n_chunks; ++c) {
        std::uint64_t s = 0;
        for (std::uint64_t k = bounds[c]; k < bounds[c + 1]; ++k) s += flags[k];
        chunk_sums[c] = s;
    }

    std::vector<std::uint64_t> out;
    out.reserve(snap_indices.size());
    std::uint64_t acc = 0;
    std::size_t next_snap = 0;
    for (std::size_t c = 0; c < n_chunks && next_snap < snap_indices.size(); ++c) {
        acc += chunk_sums[c];
        while (next_snap < snap_indices.size() && snap_indices[next_snap] == bounds[c + 1]) {
            out.push_back(acc);
            ++next_snap;
        }
    }
    return out;
}

std::vector<std::uint64_t> flag_counts(std::span<const std::uint8_t> flags,
                                       std::span<const std::uint64_t> snap_indices) {
    if (effective_threads() == 1) return flag_counts_serial(flags, snap_indices);
    return flag_counts_parallel(flags, snap_indices);
}

SegmentExtrema segment_extrema_serial(std::span<const double> signal, std::span<const std::uint64_t> seg_ends) {
    check_snaps(signal.size(), seg_ends);
    SegmentExtrema out;
    out.mins.reserve(seg_ends.size());
    out.maxs.reserve(seg_ends.size());
    std::uint64_t from = 0;
    for (std::uint64_t end : seg_ends) {
        double lo = signal[from], hi = signal[from];
        for (std::uint64_t k = from + 1; k < end; ++k) {
            lo = std::min(lo, signal[k]);
            hi = std::max(hi, signal[k]);
        }
        out.mins.push_back(lo);
        out.maxs.push_back(hi);
        from = end;
    }
    return out;
}

SegmentExtrema segment_extrema_parallel(std::span<const double> signal, std::span<const std::uint64_t> seg_ends) {
    check_snaps(signal.size(), seg_ends);
    SegmentExtrema out;
    out.mins.assign(seg_ends.size(), 0.0);
    out.maxs.assign(seg_ends.size(), 0.0);

#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
    for (std::size_t s = 0; s < seg_ends.size(); ++s) {
        std::uint64_t from = s == 0 ? 0 : seg_ends[s - 1];
        double lo = signal[from], hi = signal[from];
        for (std::uint64_t k = from + 1; k < seg_ends[s]; ++k) {
            lo = std::min(lo, signal[k]);
            hi = std::max(hi, signal[k]);
        }
        out.mins[s] = lo;
        out.maxs[s] = hi;
    }
    return out;
}

SegmentExtrema segment_extrema(std::span<const double> signal, std::span<const std::uint64_t> seg_ends) {
    if (effective_threads() == 1) return segment_extrema_serial(signal, seg_ends);
    return segment_extrema_parallel(signal, seg_ends);
}

std::vector<std::uint8_t> membership_flags(const OrbitSample& orbit, const BoxPartition& partition,
                                           std::span<const std::uint8_t> cell_flags) {
    if (cell_flags.size() != partition.cell_count())
        throw InvalidArgumentError("membership_flags: flag vector does not match the partition");
    std::vector<std::uint8_t> out(orbit.size(), 0);

#pragma omp parallel for schedule(static) num_threads(effective_threads())
    for (std::uint64_t k = 0; k < orbit.size(); ++k) {
        auto cell = partition.locate(orbit, k);
        out[k] = cell && cell_flags[*cell] ? 1 : 0;
    }
    return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::exception_ptr first_error;
    std::size_t first_error_index = n;
    std::mutex error_mutex;

#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
    for (std::size_t i = 0; i < n; ++i) {
        try {
            fn(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < first_error_index) {
                first_error_index = i;
                first_error = std::current_exception();
            }
        }
    }

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sojourn::core
