#include "sojourn/symbols.hpp"

#include <cmath>
#include <mutex>

#include "sojourn/errors.hpp"

namespace sojourn {

namespace {

std::vector<int> parse_word(const std::string& word, const char* what) {
    std::vector<int> out;
    out.reserve(word.size());
    for (char c : word) {
        if (c != '0' && c != '1') throw InvalidArgumentError(std::string(what) + ": symbols must be 0 or 1, got '" + c + "'");
        out.push_back(c - '0');
    }
    return out;
}

}  // namespace

PeriodicSource::PeriodicSource(std::string prefix, std::string period)
    : prefix_(parse_word(prefix, "periodic source prefix")), period_(parse_word(period, "periodic source period")) {
    if (period_.empty()) throw InvalidArgumentError("periodic source: period word must be nonempty");
}

int PeriodicSource::at(std::uint64_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return period_[(i - prefix_.size()) % period_.size()];
}

std::string PeriodicSource::describe() const {
    std::string s;
    for (int v : prefix_) s += char('0' + v);
    if (!s.empty()) s += '|';
    for (int v : period_) s += char('0' + v);
    return "periodic:" + s;
}

FiniteSource::FiniteSource(std::string word) : word_(parse_word(word, "finite source")) {
    if (word_.empty()) throw InvalidArgumentError("finite source: word must be nonempty");
}

int FiniteSource::at(std::uint64_t i) const {
    if (i >= word_.size())
        throw OrbitExhaustedError("finite sequence of length " + std::to_string(word_.size()) + " consumed", i);
    return word_[i];
}

std::string FiniteSource::describe() const {
    std::string s;
    for (int v : word_) s += char('0' + v);
    return "finite:" + s;
}

SturmianSource::SturmianSource(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgumentError("sturmian source: alpha must lie in (0,1)");
}

int SturmianSource::at(std::uint64_t i) const {
    double a = static_cast<double>(i) * alpha_ + beta_;
    double b = a + alpha_;
    return static_cast<int>(std::floor(b) - std::floor(a));
}

std::string SturmianSource::describe() const {
    return "sturmian:" + std::to_string(alpha_) + "," + std::to_string(beta_);
}

ConcatSource::ConcatSource(std::function<std::string(std::size_t)> blocks, std::string name)
    : blocks_(std::move(blocks)), name_(std::move(name)) {}

void ConcatSource::ensure_prefix(std::uint64_t n) const {
    std::unique_lock lock(mutex_);
    while (cache_.size() <= n) {
        std::string block = blocks_(next_block_++);
        if (block.empty()) throw InvalidArgumentError("block source '" + name_ + "': generator produced an empty block");
        for (char c : block) {
            if (c != '0' && c != '1')
                throw InvalidArgumentError("block source '" + name_ + "': symbols must be 0 or 1");
            cache_.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }
}

int ConcatSource::at(std::uint64_t i) const {
    {
        std::shared_lock lock(mutex_);
        if (i < cache_.size()) return cache_[i];
    }
    ensure_prefix(i);
    std::shared_lock lock(mutex_);
    return cache_[i];
}

std::string ConcatSource::describe() const { return "blocks:" + name_; }

SymbolSourcePtr shadowing_point(std::size_t m0) {
    if (m0 == 0) throw InvalidArgumentError("shadowing point: m0 must be positive");
    auto blocks = [m0](std::size_t k) {
        std::string b;
        std::size_t reps = m0 << k;
        b.reserve(2 * reps + 2);
        for (std::size_t i = 0; i < reps; ++i) b += "01";
        b += "11";
        return b;
    };
    return std::make_shared<ConcatSource>(blocks, "shadowing," + std::to_string(m0));
}

SymbolSourcePtr growing_gap_point() {
    auto blocks = [](std::size_t k) {
        std::string b = "1";
        b.append(std::size_t{1} << k, '0');
        return b;
    };
    return std::make_shared<ConcatSource>(blocks, "growing-gaps");
}

SymbolSourcePtr random_point(std::uint64_t seed) {
    auto blocks = [seed](std::size_t k) {
        // splitmix64 of (seed, block index) yields 64 bits per block
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        std::string b(64, '0');
        for (int i = 0; i < 64; ++i)
            if (z & (1ULL << i)) b[i] = '1';
        return b;
    };
    return std::make_shared<ConcatSource>(blocks, "random," + std::to_string(seed));
}

SymbolSourcePtr parse_sequence_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "periodic") {
        return std::make_shared<PeriodicSource>("", rest);
    }
    if (head == "preperiodic") {
        auto bar = rest.find('|');
        if (bar == std::string::npos)
            throw InvalidArgumentError("sequence spec 'preperiodic' needs the form prefix|period: " + spec);
        return std::make_shared<PeriodicSource>(rest.substr(0, bar), rest.substr(bar + 1));
    }
    if (head == "finite") {
        return std::make_shared<FiniteSource>(rest);
    }
    if (head == "sturmian") {
        auto comma = rest.find(',');
        double alpha = std::stod(rest.substr(0, comma));
        double beta = comma == std::string::npos ? 0.0 : std::stod(rest.substr(comma + 1));
        return std::make_shared<SturmianSource>(alpha, beta);
    }
    if (head == "shadowing") {
        std::size_t m0 = rest.empty() ? 4 : static_cast<std::size_t>(std::stoul(rest));
        return shadowing_point(m0);
    }
    if (head == "growing-gaps") {
        return growing_gap_point();
    }
    throw InvalidArgumentError("unknown sequence spec: " + spec);
}

}  // namespace sojourn
