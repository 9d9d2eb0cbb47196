#include "sojourn/systems.hpp"

#include <cmath>
#include <ostream>

#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

double wrap01(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // floor rounding at the seam
    return y;
}

double circle_dist(double a, double b) {
    double d = std::fabs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Maps and shifts advance a whole number of applications per sample step.
std::uint64_t sample_stride(const SystemSpec& system, double delta) {
    if (system.kind() == SystemKind::flow) return 1;
    double r = std::round(delta);
    if (!(r >= 1.0) || std::fabs(delta - r) > 1e-9)
        throw InvalidArgumentError("maps and shifts need a positive integer sampling step, got " +
                                   std::to_string(delta));
    return static_cast<std::uint64_t>(r);
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::rotation: return "rotation";
        case Family::logistic: return "logistic";
        case Family::tent: return "tent";
        case Family::contraction: return "linear-contraction";
        case Family::stable_focus: return "stable-focus-ode";
        case Family::full_shift: return "full-shift-sequence";
    }
    return "?";
}

const char* kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::map: return "discrete-map";
        case SystemKind::flow: return "ode-semiflow";
        case SystemKind::shift: return "symbolic-shift";
    }
    return "?";
}

const char* metric_name(MetricKind m) {
    switch (m) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::circle: return "circle";
        case MetricKind::symbolic: return "symbolic";
    }
    return "?";
}

SystemSpec SystemSpec::rotation(double alpha) {
    SystemSpec s(SystemKind::map, Family::rotation, MetricKind::circle, 1);
    s.params_["alpha"] = alpha;
    s.wrap_unit_ = true;
    return s;
}

SystemSpec SystemSpec::rotation_flow(double alpha) {
    SystemSpec s(SystemKind::flow, Family::rotation, MetricKind::circle, 1);
    s.params_["alpha"] = alpha;
    s.wrap_unit_ = true;
    return s;
}

SystemSpec SystemSpec::logistic(double r) {
    SystemSpec s(SystemKind::map, Family::logistic, MetricKind::euclidean, 1);
    s.params_["r"] = r;
    return s;
}

SystemSpec SystemSpec::tent(double mu) {
    SystemSpec s(SystemKind::map, Family::tent, MetricKind::euclidean, 1);
    s.params_["mu"] = mu;
    return s;
}

SystemSpec SystemSpec::contraction(double factor) {
    if (!(std::fabs(factor) < 1.0)) throw InvalidArgumentError("contraction factor must satisfy |factor| < 1");
    SystemSpec s(SystemKind::map, Family::contraction, MetricKind::euclidean, 1);
    s.params_["factor"] = factor;
    return s;
}

SystemSpec SystemSpec::stable_focus(double lambda, double omega) {
    if (!(lambda < 0.0)) throw InvalidArgumentError("stable focus needs lambda < 0");
    SystemSpec s(SystemKind::flow, Family::stable_focus, MetricKind::euclidean, 2);
    s.params_["lambda"] = lambda;
    s.params_["omega"] = omega;
    return s;
}

SystemSpec SystemSpec::full_shift() {
    return SystemSpec(SystemKind::shift, Family::full_shift, MetricKind::symbolic, 1);
}

double SystemSpec::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw InvalidArgumentError("system has no parameter '" + name + "'");
    return it->second;
}

void SystemSpec::rhs(std::span<const double> x, std::span<double> out) const {
    switch (family_) {
        case Family::rotation:
            out[0] = params_.at("alpha");
            return;
        case Family::stable_focus: {
            double l = params_.at("lambda"), w = params_.at("omega");
            out[0] = l * x[0] - w * x[1];
            out[1] = w * x[0] + l * x[1];
            return;
        }
        default:
            throw InvalidArgumentError(std::string("family ") + family_name(family_) + " is not a flow");
    }
}

DenseState SystemSpec::step_dense(const DenseState& s, double delta, std::size_t index) const {
    if (static_cast<int>(s.size()) != dimension_)
        throw DimensionMismatchError("state has dimension " + std::to_string(s.size()) + ", system expects " +
                                     std::to_string(dimension_));
    DenseState out(s.size());
    if (kind_ == SystemKind::map) {
        double x = s[0];
        switch (family_) {
            case Family::rotation: out[0] = x + params_.at("alpha"); break;
            case Family::logistic: out[0] = params_.at("r") * x * (1.0 - x); break;
            case Family::tent: out[0] = params_.at("mu") * std::min(x, 1.0 - x); break;
            case Family::contraction: out[0] = params_.at("factor") * x; break;
            default: throw InvalidArgumentError(std::string("family ") + family_name(family_) + " is not a map");
        }
    } else {
        // one classical RK4 step of size delta
        const std::size_t d = s.size();
        std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
        rhs(s, k1);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = s[i] + 0.5 * delta * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = s[i] + 0.5 * delta * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < d; ++i) tmp[i] = s[i] + delta * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < d; ++i) out[i] = s[i] + (delta / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (wrap_unit_)
        for (double& x : out) x = wrap01(x);
    if (!all_finite(out)) throw NumericOverflowError("state became non-finite", index);
    return out;
}

State SystemSpec::step(const State& s, double delta) const {
    if (kind_ == SystemKind::shift) {
        const auto* sym = std::get_if<SymbolicState>(&s);
        if (!sym) throw InvalidArgumentError("shift system needs a symbolic state");
        if (auto len = sym->seq->length(); len && sym->shift + 1 >= *len)
            throw OrbitExhaustedError("finite sequence consumed by the shift", sym->shift + 1);
        return SymbolicState{sym->seq, sym->shift + 1};
    }
    const auto* dense = std::get_if<DenseState>(&s);
    if (!dense) throw InvalidArgumentError("map/flow system needs a coordinate state");
    return step_dense(*dense, delta, 0);
}

State SystemSpec::advance(State s, std::uint64_t k, double delta) const {
    if (kind_ == SystemKind::shift) {
        auto& sym = std::get<SymbolicState>(s);
        if (auto len = sym.seq->length(); len && sym.shift + k >= *len)
            throw OrbitExhaustedError("finite sequence consumed by the shift", sym.shift + k);
        sym.shift += k;
        return s;
    }
    for (std::uint64_t i = 0; i < k; ++i) s = step(s, delta);
    return s;
}

double SystemSpec::distance(const State& a, const State& b) const {
    if (metric_ == MetricKind::symbolic) {
        const auto* sa = std::get_if<SymbolicState>(&a);
        const auto* sb = std::get_if<SymbolicState>(&b);
        if (!sa || !sb) throw DimensionMismatchError("symbolic metric needs two symbolic states");
        for (int i = 0; i < kSymbolDepth; ++i)
            if (sa->symbol(i) != sb->symbol(i)) return std::ldexp(1.0, -i);
        return 0.0;
    }
    const auto* da = std::get_if<DenseState>(&a);
    const auto* db = std::get_if<DenseState>(&b);
    if (!da || !db) throw DimensionMismatchError("coordinate metric needs two coordinate states");
    if (da->size() != db->size())
        throw DimensionMismatchError("states have dimensions " + std::to_string(da->size()) + " and " +
                                     std::to_string(db->size()));
    if (metric_ == MetricKind::circle) {
        double acc = 0.0;
        for (std::size_t i = 0; i < da->size(); ++i) {
            double d = circle_dist((*da)[i], (*db)[i]);
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < da->size(); ++i) {
        double d = (*da)[i] - (*db)[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

std::string SystemSpec::describe() const {
    std::string s = std::string(kind_name(kind_)) + " " + family_name(family_) + " (metric " + metric_name(metric_) +
                    ", dimension " + std::to_string(dimension_) + ")";
    for (const auto& [k, v] : params_) s += " " + k + "=" + std::to_string(v);
    return s;
}

State OrbitSample::state(std::uint64_t k) const {
    if (k > horizon_) throw InvalidArgumentError("orbit index " + std::to_string(k) + " past horizon");
    if (is_symbolic()) return SymbolicState{seq_, base_shift_ + stride_ * k};
    auto row = coords(k);
    return DenseState(row.begin(), row.end());
}

std::span<const double> OrbitSample::coords(std::uint64_t k) const {
    const std::size_t d = static_cast<std::size_t>(system_->dimension());
    return std::span<const double>(coords_->data() + k * d, d);
}

int OrbitSample::symbol(std::uint64_t k, std::uint64_t i) const {
    std::uint64_t idx = stride_ * k + i;
    if (idx < sym_window_.size()) return sym_window_[idx];
    return seq_->at(base_shift_ + idx);
}

OrbitSample sample_orbit(const SystemSpec& system, const State& x0, double delta, std::uint64_t horizon) {
    if (!(delta > 0.0)) throw InvalidArgumentError("orbit delta must be positive");
    if (horizon < 1) throw InvalidArgumentError("orbit horizon must be at least 1");

    OrbitSample orbit;
    orbit.system_ = std::make_shared<const SystemSpec>(system);
    orbit.horizon_ = horizon;
    orbit.stride_ = sample_stride(system, delta);
    orbit.delta_ = system.kind() == SystemKind::flow ? delta : static_cast<double>(orbit.stride_);

    if (system.kind() == SystemKind::shift) {
        const auto* sym = std::get_if<SymbolicState>(&x0);
        if (!sym) throw InvalidArgumentError("shift system needs a symbolic initial state");
        const std::uint64_t last_shift = sym->shift + orbit.stride_ * horizon;
        if (auto len = sym->seq->length(); len && *len <= last_shift) {
            std::uint64_t fail = (*len > sym->shift) ? (*len - sym->shift - 1) / orbit.stride_ + 1 : 0;
            throw OrbitExhaustedError("finite sequence of length " + std::to_string(*len) +
                                          " cannot supply horizon " + std::to_string(horizon),
                                      fail);
        }
        std::uint64_t want = orbit.stride_ * horizon + kSymbolDepth;
        std::uint64_t avail = want + 1;
        if (auto len = sym->seq->length()) avail = std::min<std::uint64_t>(avail, *len - sym->shift);
        sym->seq->ensure_prefix(sym->shift + avail - 1);
        orbit.seq_ = sym->seq;
        orbit.base_shift_ = sym->shift;
        orbit.sym_window_.resize(avail);
        for (std::uint64_t i = 0; i < avail; ++i)
            orbit.sym_window_[i] = static_cast<std::uint8_t>(sym->seq->at(sym->shift + i));
        return orbit;
    }

    const auto* dense = std::get_if<DenseState>(&x0);
    if (!dense) throw InvalidArgumentError("map/flow system needs a coordinate initial state");
    if (static_cast<int>(dense->size()) != system.dimension())
        throw DimensionMismatchError("initial state has dimension " + std::to_string(dense->size()) +
                                     ", system expects " + std::to_string(system.dimension()));
    if (!all_finite(*dense)) throw NumericOverflowError("initial state is non-finite", 0);

    const std::size_t d = dense->size();
    const double step_delta = system.kind() == SystemKind::flow ? delta : 1.0;
    std::vector<double> coords;
    coords.reserve((horizon + 1) * d);
    DenseState cur = *dense;
    coords.insert(coords.end(), cur.begin(), cur.end());
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        for (std::uint64_t a = 0; a < orbit.stride_; ++a) cur = system.step_dense(cur, step_delta, k);
        coords.insert(coords.end(), cur.begin(), cur.end());
    }
    orbit.coords_ = std::move(coords);
    return orbit;
}

void for_each_state(const SystemSpec& system, const State& x0, double delta, std::uint64_t horizon,
                    const std::function<void(std::uint64_t, const State&)>& visit) {
    if (!(delta > 0.0)) throw InvalidArgumentError("orbit delta must be positive");
    const std::uint64_t stride = sample_stride(system, delta);
    const double step_delta = system.kind() == SystemKind::flow ? delta : 1.0;
    State cur = x0;
    visit(0, cur);
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        for (std::uint64_t a = 0; a < stride; ++a) {
            try {
                cur = system.step(cur, step_delta);
            } catch (NumericOverflowError& e) {
                throw NumericOverflowError(e.what(), k);
            } catch (OrbitExhaustedError& e) {
                throw OrbitExhaustedError(e.what(), k);
            }
        }
        visit(k, cur);
    }
}

void write_orbit_csv(std::ostream& out, const OrbitSample& orbit) {
    if (orbit.is_symbolic()) {
        out << "t,symbols\n";
        for (std::uint64_t k = 0; k <= orbit.horizon(); ++k) {
            out << orbit.time_at(k) << ",";
            for (int i = 0; i < kSymbolDepth; ++i) out << orbit.symbol(k, i);
            out << "\n";
        }
        return;
    }
    out << "t";
    for (int i = 1; i <= orbit.system().dimension(); ++i) out << ",x_" << i;
    out << "\n";
    char buf[32];
    for (std::uint64_t k = 0; k <= orbit.horizon(); ++k) {
        out << orbit.time_at(k);
        for (double x : orbit.coords(k)) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << "," << buf;
        }
        out << "\n";
    }
}

}  // namespace sojourn
