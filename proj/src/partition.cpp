#include "sojourn/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;
    return y;
}

// Min distance between two arcs [a0,a1], [b0,b1] on the unit circle.
double arc_gap(double a0, double a1, double b0, double b1) {
    if (b0 <= a1 && a0 <= b1) return 0.0;
    double g1 = b0 - a1;               // going up from a to b
    double g2 = a0 - b1;               // going up from b to a
    if (g1 < 0) g1 += 1.0;
    if (g2 < 0) g2 += 1.0;
    return std::min(g1, g2);
}

}  // namespace

BoxPartition BoxPartition::boxes(std::vector<double> lo, std::vector<double> hi, std::vector<int> resolution) {
    if (lo.empty() || lo.size() != hi.size() || lo.size() != resolution.size())
        throw InvalidArgumentError("box partition: bounds and resolution must have equal nonzero dimension");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i])) throw InvalidArgumentError("box partition: empty axis interval");
        if (resolution[i] < 1) throw InvalidArgumentError("box partition: resolution must be positive");
        cells *= static_cast<std::size_t>(resolution[i]);
        if (cells > (1u << 28)) throw InvalidArgumentError("box partition: too many cells");
    }
    BoxPartition p;
    p.kind_ = Kind::boxes;
    p.lo_ = std::move(lo);
    p.hi_ = std::move(hi);
    p.res_ = std::move(resolution);
    return p;
}

BoxPartition BoxPartition::circle(int resolution) {
    if (resolution < 1) throw InvalidArgumentError("circle partition: resolution must be positive");
    BoxPartition p;
    p.kind_ = Kind::circle;
    p.lo_ = {0.0};
    p.hi_ = {1.0};
    p.res_ = {resolution};
    return p;
}

BoxPartition BoxPartition::cylinders(int depth) {
    if (depth < 1 || depth > 24) throw InvalidArgumentError("cylinder partition: depth must be in [1,24]");
    BoxPartition p;
    p.kind_ = Kind::cylinders;
    p.depth_ = depth;
    return p;
}

std::size_t BoxPartition::cell_count() const {
    if (kind_ == Kind::cylinders) return std::size_t{1} << depth_;
    std::size_t cells = 1;
    for (int r : res_) cells *= static_cast<std::size_t>(r);
    return cells;
}

int BoxPartition::dimension() const { return kind_ == Kind::cylinders ? 1 : static_cast<int>(res_.size()); }

double BoxPartition::axis_width(int axis) const { return (hi_[axis] - lo_[axis]) / res_[axis]; }

std::optional<std::uint32_t> BoxPartition::locate(const State& s) const {
    if (kind_ == Kind::cylinders) {
        const auto* sym = std::get_if<SymbolicState>(&s);
        if (!sym) throw DimensionMismatchError("cylinder partition needs a symbolic state");
        std::uint32_t idx = 0;
        for (int i = 0; i < depth_; ++i) idx = (idx << 1) | static_cast<std::uint32_t>(sym->symbol(i));
        return idx;
    }
    const auto* dense = std::get_if<DenseState>(&s);
    if (!dense) throw DimensionMismatchError("box partition needs a coordinate state");
    if (dense->size() != lo_.size())
        throw DimensionMismatchError("state dimension " + std::to_string(dense->size()) +
                                     " does not match partition dimension " + std::to_string(lo_.size()));
    std::uint32_t idx = 0;
    for (std::size_t a = 0; a < lo_.size(); ++a) {
        double x = (*dense)[a];
        if (kind_ == Kind::circle) x = wrap01(x);
        if (x < lo_[a] || x > hi_[a]) return std::nullopt;
        int c = static_cast<int>((x - lo_[a]) / axis_width(a));
        if (c >= res_[a]) c = res_[a] - 1;  // closed upper boundary
        idx = idx * static_cast<std::uint32_t>(res_[a]) + static_cast<std::uint32_t>(c);
    }
    return idx;
}

std::optional<std::uint32_t> BoxPartition::locate(const OrbitSample& orbit, std::uint64_t k) const {
    if (kind_ == Kind::cylinders) {
        if (!orbit.is_symbolic()) throw DimensionMismatchError("cylinder partition needs a symbolic orbit");
        std::uint32_t idx = 0;
        for (int i = 0; i < depth_; ++i) idx = (idx << 1) | static_cast<std::uint32_t>(orbit.symbol(k, i));
        return idx;
    }
    if (orbit.is_symbolic()) throw DimensionMismatchError("box partition needs a coordinate orbit");
    auto row = orbit.coords(k);
    if (row.size() != lo_.size())
        throw DimensionMismatchError("orbit dimension does not match partition dimension");
    std::uint32_t idx = 0;
    for (std::size_t a = 0; a < lo_.size(); ++a) {
        double x = row[a];
        if (kind_ == Kind::circle) x = wrap01(x);
        if (x < lo_[a] || x > hi_[a]) return std::nullopt;
        int c = static_cast<int>((x - lo_[a]) / axis_width(a));
        if (c >= res_[a]) c = res_[a] - 1;
        idx = idx * static_cast<std::uint32_t>(res_[a]) + static_cast<std::uint32_t>(c);
    }
    return idx;
}

void BoxPartition::cell_coords(std::uint32_t cell, std::span<std::uint32_t> out) const {
    for (std::size_t a = lo_.size(); a-- > 0;) {
        out[a] = cell % static_cast<std::uint32_t>(res_[a]);
        cell /= static_cast<std::uint32_t>(res_[a]);
    }
}

State BoxPartition::center(std::uint32_t cell) const {
    if (cell >= cell_count()) throw InvalidArgumentError("cell index out of range");
    if (kind_ == Kind::cylinders) {
        std::string word(depth_, '0');
        for (int i = 0; i < depth_; ++i)
            if (cell & (std::uint32_t{1} << (depth_ - 1 - i))) word[i] = '1';
        return SymbolicState{std::make_shared<PeriodicSource>("", word), 0};
    }
    std::vector<std::uint32_t> c(lo_.size());
    cell_coords(cell, c);
    DenseState x(lo_.size());
    for (std::size_t a = 0; a < lo_.size(); ++a) x[a] = lo_[a] + (c[a] + 0.5) * axis_width(a);
    return x;
}

double BoxPartition::cell_diameter() const {
    if (kind_ == Kind::cylinders) return std::ldexp(1.0, -depth_);
    double acc = 0.0;
    for (std::size_t a = 0; a < lo_.size(); ++a) {
        double w = axis_width(a);
        acc += w * w;
    }
    double diam = std::sqrt(acc);
    if (kind_ == Kind::circle) diam = std::min(diam, 0.5);
    return diam;
}

double BoxPartition::space_diameter() const {
    if (kind_ == Kind::cylinders) return 1.0;
    if (kind_ == Kind::circle) return 0.5;
    double acc = 0.0;
    for (std::size_t a = 0; a < lo_.size(); ++a) {
        double w = hi_[a] - lo_[a];
        acc += w * w;
    }
    return std::sqrt(acc);
}

double BoxPartition::cell_set_distance(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 0.0;
    if (kind_ == Kind::cylinders) {
        // words differing first at bit i are exactly 2^-i apart pointwise
        std::uint32_t x = a ^ b;
        int lead = depth_ - (32 - std::countl_zero(x));
        return std::ldexp(1.0, -lead);
    }
    std::vector<std::uint32_t> ca(lo_.size()), cb(lo_.size());
    cell_coords(a, ca);
    cell_coords(b, cb);
    double acc = 0.0;
    for (std::size_t ax = 0; ax < lo_.size(); ++ax) {
        double w = axis_width(ax);
        double a0 = lo_[ax] + ca[ax] * w, a1 = a0 + w;
        double b0 = lo_[ax] + cb[ax] * w, b1 = b0 + w;
        double gap;
        if (kind_ == Kind::circle)
            gap = arc_gap(a0, a1, b0, b1);
        else
            gap = std::max({0.0, b0 - a1, a0 - b1});
        acc += gap * gap;
    }
    return std::sqrt(acc);
}

double BoxPartition::point_set_distance(const State& s, std::span<const std::uint32_t> cells) const {
    if (cells.empty()) throw InvalidArgumentError("point_set_distance: empty cell set");
    if (kind_ == Kind::cylinders) {
        const auto* sym = std::get_if<SymbolicState>(&s);
        if (!sym) throw DimensionMismatchError("cylinder partition needs a symbolic state");
        std::uint32_t widx = 0;
        for (int i = 0; i < depth_; ++i) widx = (widx << 1) | static_cast<std::uint32_t>(sym->symbol(i));
        double best = 2.0;
        for (std::uint32_t c : cells) best = std::min(best, widx == c ? 0.0 : cell_set_distance(widx, c));
        return best;
    }
    const auto* dense = std::get_if<DenseState>(&s);
    if (!dense) throw DimensionMismatchError("box partition needs a coordinate state");
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> cc(lo_.size());
    for (std::uint32_t c : cells) {
        cell_coords(c, cc);
        double acc = 0.0;
        for (std::size_t ax = 0; ax < lo_.size(); ++ax) {
            double w = axis_width(ax);
            double c0 = lo_[ax] + cc[ax] * w, c1 = c0 + w;
            double x = (*dense)[ax];
            double gap;
            if (kind_ == Kind::circle) {
                x = wrap01(x);
                gap = arc_gap(x, x, c0, c1);
            } else {
                gap = std::max({0.0, c0 - x, x - c1});
            }
            acc += gap * gap;
        }
        best = std::min(best, std::sqrt(acc));
        if (best == 0.0) break;
    }
    return best;
}

std::vector<std::uint32_t> BoxPartition::fatten(std::span<const std::uint32_t> cells, double eps) const {
    if (eps < 0.0) throw InvalidArgumentError("fatten: eps must be nonnegative");
    std::set<std::uint32_t> out(cells.begin(), cells.end());
    if (kind_ == Kind::cylinders) {
        // cells within eps share a prefix of length ceil(-log2 eps)
        int keep = eps >= 1.0 ? 0 : std::min(depth_, static_cast<int>(std::ceil(-std::log2(eps))));
        if (eps == 0.0) keep = depth_;
        const std::uint32_t low_bits = depth_ - keep;
        for (std::uint32_t c : cells) {
            std::uint32_t base = (c >> low_bits) << low_bits;
            for (std::uint32_t i = 0; i < (std::uint32_t{1} << low_bits); ++i) out.insert(base + i);
        }
        return {out.begin(), out.end()};
    }
    // expand a bounded neighborhood per axis, keeping exact-distance checks
    std::vector<int> radius(lo_.size());
    for (std::size_t ax = 0; ax < lo_.size(); ++ax)
        radius[ax] = static_cast<int>(std::ceil(eps / axis_width(ax))) + 1;
    std::vector<std::uint32_t> cc(lo_.size());
    for (std::uint32_t c : cells) {
        cell_coords(c, cc);
        std::vector<int> offs(lo_.size(), 0);
        for (std::size_t ax = 0; ax < lo_.size(); ++ax) offs[ax] = -radius[ax];
        while (true) {
            bool valid = true;
            std::uint32_t idx = 0;
            for (std::size_t ax = 0; ax < lo_.size() && valid; ++ax) {
                long v = static_cast<long>(cc[ax]) + offs[ax];
                if (kind_ == Kind::circle) {
                    v %= res_[ax];
                    if (v < 0) v += res_[ax];
                } else if (v < 0 || v >= res_[ax]) {
                    valid = false;
                }
                if (valid) idx = idx * static_cast<std::uint32_t>(res_[ax]) + static_cast<std::uint32_t>(v);
            }
            if (valid && cell_set_distance(c, idx) <= eps) out.insert(idx);
            // advance odometer
            std::size_t ax = 0;
            for (; ax < lo_.size(); ++ax) {
                if (++offs[ax] <= radius[ax]) break;
                offs[ax] = -radius[ax];
            }
            if (ax == lo_.size()) break;
        }
    }
    return {out.begin(), out.end()};
}

std::vector<std::uint8_t> BoxPartition::flags(std::span<const std::uint32_t> cells) const {
    std::vector<std::uint8_t> f(cell_count(), 0);
    for (std::uint32_t c : cells) {
        if (c >= f.size()) throw InvalidArgumentError("cell index out of range");
        f[c] = 1;
    }
    return f;
}

double BoxPartition::center_distance(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 0.0;
    if (kind_ == Kind::cylinders) return cell_set_distance(a, b);  // words fix the distance exactly
    std::vector<std::uint32_t> ca(lo_.size()), cb(lo_.size());
    cell_coords(a, ca);
    cell_coords(b, cb);
    double acc = 0.0;
    for (std::size_t ax = 0; ax < lo_.size(); ++ax) {
        double w = axis_width(ax);
        double xa = lo_[ax] + (ca[ax] + 0.5) * w;
        double xb = lo_[ax] + (cb[ax] + 0.5) * w;
        double d = kind_ == Kind::circle ? std::min(std::fabs(xa - xb), 1.0 - std::fabs(xa - xb)) : xa - xb;
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace sojourn
