#ifndef SOJOURN_PARTITION_HPP
#define SOJOURN_PARTITION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sojourn/systems.hpp"

namespace sojourn {

/// Finite partition of the state space into cells: axis-aligned boxes over a
/// bounded region, equal arcs of the unit circle, or cylinder sets of fixed
/// depth in the binary sequence space.
///
/// Every in-bounds state maps to exactly one cell; boundary states use the
/// closed convention (a coordinate exactly on the upper bound belongs to the
/// last cell).
class BoxPartition {
public:
    enum class Kind { boxes, circle, cylinders };

    /// Default-constructed partitions are empty placeholders; build real
    /// ones with the named factories.
    BoxPartition() = default;

    static BoxPartition boxes(std::vector<double> lo, std::vector<double> hi, std::vector<int> resolution);
    static BoxPartition circle(int resolution);
    static BoxPartition cylinders(int depth);

    Kind kind() const { return kind_; }
    std::size_t cell_count() const;
    int dimension() const;
    int cylinder_depth() const { return depth_; }

    /// Cell containing a state, or nullopt when the state escapes the
    /// partition bounds (boxes only; circle wraps, cylinders cover all).
    std::optional<std::uint32_t> locate(const State& s) const;
    std::optional<std::uint32_t> locate(const OrbitSample& orbit, std::uint64_t k) const;

    /// Representative point: box/arc midpoint, or the periodic extension of
    /// the cylinder word.
    State center(std::uint32_t cell) const;

    /// Max distance between two points of one cell.
    double cell_diameter() const;

    /// Diameter of the whole partitioned region (0.5 for the circle, 1 for
    /// cylinders, box diagonal for boxes); caps set diameters.
    double space_diameter() const;

    /// Exact min distance between two cells as point sets (0 if adjacent or
    /// equal).
    double cell_set_distance(std::uint32_t a, std::uint32_t b) const;

    /// Min distance from a state to the union of the given cells.
    double point_set_distance(const State& s, std::span<const std::uint32_t> cells) const;

    /// All cells within set distance eps of the given cells (includes the
    /// input). Result is sorted.
    std::vector<std::uint32_t> fatten(std::span<const std::uint32_t> cells, double eps) const;

    /// Membership flags (size cell_count) from a sorted cell list.
    std::vector<std::uint8_t> flags(std::span<const std::uint32_t> cells) const;

    /// Distance between cell centers in the partition geometry.
    double center_distance(std::uint32_t a, std::uint32_t b) const;

    // box/circle geometry (empty for cylinders)
    const std::vector<double>& lower_bounds() const { return lo_; }
    const std::vector<double>& upper_bounds() const { return hi_; }
    const std::vector<int>& resolution() const { return res_; }

private:
    double axis_width(int axis) const;
    void cell_coords(std::uint32_t cell, std::span<std::uint32_t> out) const;

    Kind kind_ = Kind::boxes;
    std::vector<double> lo_, hi_;
    std::vector<int> res_;
    int depth_ = 0;  // cylinders
};

}  // namespace sojourn

#endif
