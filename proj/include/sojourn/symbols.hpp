#ifndef SOJOURN_SYMBOLS_HPP
#define SOJOURN_SYMBOLS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace sojourn {

/// An immutable one-sided sequence over the binary alphabet {0,1}.
///
/// Sources are shared between orbit states; after ensure_prefix() has been
/// called up to some index, at() below that index is safe to call from any
/// number of threads concurrently.
class SymbolSource {
public:
    virtual ~SymbolSource() = default;

    /// Symbol at position i. Throws OrbitExhaustedError past the end of a
    /// finite source.
    virtual int at(std::uint64_t i) const = 0;

    /// Total length, or nullopt for infinite sources.
    virtual std::optional<std::uint64_t> length() const { return std::nullopt; }

    /// Pre-materialize symbols up to index n (inclusive). No-op for sources
    /// that compute symbols directly.
    virtual void ensure_prefix(std::uint64_t /*n*/) const {}

    virtual std::string describe() const = 0;
};

using SymbolSourcePtr = std::shared_ptr<const SymbolSource>;

/// Eventually periodic sequence: an optional transient prefix followed by a
/// repeating word. With an empty prefix this is a purely periodic point.
class PeriodicSource final : public SymbolSource {
public:
    PeriodicSource(std::string prefix, std::string period);
    int at(std::uint64_t i) const override;
    std::string describe() const override;

private:
    std::vector<int> prefix_;
    std::vector<int> period_;
};

/// Finite word with no continuation; the shift exhausts it.
class FiniteSource final : public SymbolSource {
public:
    explicit FiniteSource(std::string word);
    int at(std::uint64_t i) const override;
    std::optional<std::uint64_t> length() const override { return word_.size(); }
    std::string describe() const override;

private:
    std::vector<int> word_;
};

/// Sturmian sequence from the rotation coding
/// s_i = floor((i+1)*alpha + beta) - floor(i*alpha + beta).
class SturmianSource final : public SymbolSource {
public:
    SturmianSource(double alpha, double beta);
    int at(std::uint64_t i) const override;
    std::string describe() const override;

private:
    double alpha_;
    double beta_;
};

/// Concatenation of programmatically generated blocks. Blocks are consumed
/// lazily and cached; reads and growth are synchronized, so at() is safe
/// from any thread at any index.
class ConcatSource final : public SymbolSource {
public:
    /// blocks(k) returns the k-th block as a 0/1 string; must be nonempty.
    ConcatSource(std::function<std::string(std::size_t)> blocks, std::string name);
    int at(std::uint64_t i) const override;
    void ensure_prefix(std::uint64_t n) const override;
    std::string describe() const override;

private:
    std::function<std::string(std::size_t)> blocks_;
    std::string name_;
    mutable std::shared_mutex mutex_;
    mutable std::vector<std::uint8_t> cache_;
    mutable std::size_t next_block_ = 0;
};

/// Point whose orbit shadows the period-2 word "01" on geometrically growing
/// blocks and departs at short "11" seams: (01)^(m0) 11 (01)^(2*m0) 11 ...
SymbolSourcePtr shadowing_point(std::size_t m0 = 4);

/// 1 0^(2^0) 1 0^(2^1) 1 0^(2^2) ... : return gaps to any ball around the
/// initial symbol grow without bound.
SymbolSourcePtr growing_gap_point();

/// Deterministic pseudorandom bit sequence for the given seed (counter-based,
/// so equal seeds give equal sequences).
SymbolSourcePtr random_point(std::uint64_t seed);

/// Parse a sequence spec string: "periodic:01", "preperiodic:111|01",
/// "finite:0110", "sturmian:<alpha>[,<beta>]", "shadowing[:m0]",
/// "growing-gaps".
SymbolSourcePtr parse_sequence_spec(const std::string& spec);

}  // namespace sojourn

#endif
