#ifndef SOJOURN_SYSTEMS_HPP
#define SOJOURN_SYSTEMS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sojourn/symbols.hpp"

namespace sojourn {

enum class SystemKind { map, flow, shift };
enum class MetricKind { euclidean, circle, symbolic };
enum class Family { rotation, logistic, tent, contraction, stable_focus, full_shift };

/// A state is either a dense coordinate vector or a point of a one-sided
/// binary sequence space (a source plus a shift offset).
struct SymbolicState {
    SymbolSourcePtr seq;
    std::uint64_t shift = 0;

    int symbol(std::uint64_t i) const { return seq->at(shift + i); }
};

using DenseState = std::vector<double>;
using State = std::variant<DenseState, SymbolicState>;

/// Truncation depth of the symbolic metric: points agreeing on this many
/// symbols are indistinguishable (distance 0).
inline constexpr int kSymbolDepth = 64;

const char* family_name(Family f);
const char* kind_name(SystemKind k);
const char* metric_name(MetricKind m);

/// A simulatable semiflow: a map iterated once per sample step, an ODE
/// advanced by one fixed-step RK4 step of size delta per sample, or the
/// shift on binary sequences. Immutable after construction and safe to share
/// across threads.
class SystemSpec {
public:
    static SystemSpec rotation(double alpha);       // circle map x -> x+alpha mod 1
    static SystemSpec rotation_flow(double alpha);  // circle flow dx/dt = alpha
    static SystemSpec logistic(double r);
    static SystemSpec tent(double mu);
    static SystemSpec contraction(double factor);   // x -> factor*x on R
    static SystemSpec stable_focus(double lambda, double omega);  // planar spiral sink
    static SystemSpec full_shift();

    SystemKind kind() const { return kind_; }
    Family family() const { return family_; }
    MetricKind metric() const { return metric_; }
    int dimension() const { return dimension_; }
    double param(const std::string& name) const;
    const std::map<std::string, double>& params() const { return params_; }

    /// Advance one sample step. delta is the step size for flows and is
    /// ignored by maps and shifts (whose natural step is 1).
    State step(const State& s, double delta = 1.0) const;

    /// Advance k sample steps.
    State advance(State s, std::uint64_t k, double delta = 1.0) const;

    double distance(const State& a, const State& b) const;

    std::string describe() const;

private:
    SystemSpec(SystemKind k, Family f, MetricKind m, int dim) : kind_(k), family_(f), metric_(m), dimension_(dim) {}

    void rhs(std::span<const double> x, std::span<double> out) const;  // flow vector field
    DenseState step_dense(const DenseState& s, double delta, std::size_t index) const;

    SystemKind kind_;
    Family family_;
    MetricKind metric_;
    int dimension_;
    std::map<std::string, double> params_;
    bool wrap_unit_ = false;  // reduce coordinates mod 1 after each step

    friend class OrbitSample;
    friend OrbitSample sample_orbit(const SystemSpec&, const State&, double, std::uint64_t);
};

/// A sampled trajectory f(k*delta, x0), k = 0..horizon. Dense orbits store
/// coordinates contiguously; symbolic orbits are represented by the source
/// and a base offset, so state(k) costs nothing to materialize.
class OrbitSample {
public:
    const SystemSpec& system() const { return *system_; }
    double delta() const { return delta_; }
    std::uint64_t horizon() const { return horizon_; }
    std::uint64_t size() const { return horizon_ + 1; }
    double time_at(std::uint64_t k) const { return delta_ * static_cast<double>(k); }
    double duration() const { return delta_ * static_cast<double>(horizon_); }

    bool is_symbolic() const { return !coords_.has_value(); }

    State state(std::uint64_t k) const;
    std::span<const double> coords(std::uint64_t k) const;
    int symbol(std::uint64_t k, std::uint64_t i) const;  // i-th symbol of state k

private:
    OrbitSample() = default;

    std::shared_ptr<const SystemSpec> system_;
    double delta_ = 1.0;
    std::uint64_t horizon_ = 0;
    std::uint64_t stride_ = 1;  // map/shift applications per sample
    std::optional<std::vector<double>> coords_;  // (horizon+1) * dimension, row-major
    SymbolSourcePtr seq_;
    std::uint64_t base_shift_ = 0;
    std::vector<std::uint8_t> sym_window_;  // symbols from base_shift_, read lock-free

    friend OrbitSample sample_orbit(const SystemSpec&, const State&, double, std::uint64_t);
};

/// Sample an orbit. Throws InvalidArgumentError for delta <= 0 or horizon
/// < 1, NumericOverflowError / OrbitExhaustedError (with the failing index)
/// when a step fails.
OrbitSample sample_orbit(const SystemSpec& system, const State& x0, double delta, std::uint64_t horizon);

/// Streaming traversal: visit f(k*delta,x0) for k = 0..horizon without
/// materializing the orbit.
void for_each_state(const SystemSpec& system, const State& x0, double delta, std::uint64_t horizon,
                    const std::function<void(std::uint64_t, const State&)>& visit);

/// Write an orbit as CSV: header t,x_1..x_d for dense systems, or t,symbols
/// (first 64 symbols) for shifts.
void write_orbit_csv(std::ostream& out, const OrbitSample& orbit);

}  // namespace sojourn

#endif
