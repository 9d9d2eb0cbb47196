#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "sojourn/density.hpp"
#include "sojourn/errors.hpp"
#include "sojourn/mca.hpp"

using namespace sojourn;

namespace {

constexpr double kGolden = 0.61803398874989484820;
const CheckpointPolicy kLinear{20, 0.5, CheckpointPolicy::Spacing::linear};

TimeSet evens_discrete(std::uint64_t horizon) {
    std::vector<std::uint64_t> members;
    for (std::uint64_t k = 0; k <= horizon; k += 2) members.push_back(k);
    return TimeSet(TimeSet::Mode::discrete, std::move(members), 1.0, static_cast<double>(horizon));
}

}  // namespace

TEST_CASE("the even integers have density one half") {
    auto d = density(evens_discrete(10'000), kLinear);
    CHECK(std::fabs(d.lower - 0.5) <= 1e-3);
    CHECK(std::fabs(d.upper - 0.5) <= 1e-3);

    // power-of-two horizon makes every geometric checkpoint exact
    auto d2 = density(evens_discrete(1u << 20), CheckpointPolicy{});
    CHECK(d2.lower == 0.5);
    CHECK(d2.upper == 0.5);
    CHECK(upper_density(evens_discrete(1u << 20)) == 0.5);
}

TEST_CASE("the full time set has density exactly 1") {
    std::vector<std::uint64_t> all;
    for (std::uint64_t k = 0; k < 1000; ++k) all.push_back(k);
    TimeSet ts(TimeSet::Mode::continuous, std::move(all), 1.0, 1000.0);
    auto d = density(ts, kLinear);
    CHECK(d.lower == 1.0);
    CHECK(d.upper == 1.0);
}

TEST_CASE("union of [n, n+0.3) on a 0.01 grid has density 0.3") {
    const double analytic = 0.3;  // oracle: each unit interval carries measure 0.3
    std::vector<std::uint64_t> members;
    const double delta = 0.01;
    for (std::uint64_t k = 0; k * delta < 1000.0; ++k) {
        double phase = std::fmod(static_cast<double>(k) * delta, 1.0);
        if (phase < 0.3) members.push_back(k);
    }
    TimeSet ts(TimeSet::Mode::continuous, std::move(members), delta, 1000.0);
    auto d = density(ts, kLinear);
    CHECK(std::fabs(d.upper - analytic) <= 0.02);
    CHECK(std::fabs(d.lower - analytic) <= 0.02);
}

TEST_CASE("dyadic on/off blocks separate upper and lower density") {
    // oracle: full blocks [2^k, 2^(k+1)) for even k; at T = 2^(2j+1) the
    // running average is (2 + 2/4 + 2/16 + ...)/3 -> 2/3, at T = 2^(2j) it
    // is 1/3
    std::vector<std::uint64_t> members;
    const std::uint64_t horizon = 1u << 20;
    for (std::uint64_t k = 1; k < horizon; ++k) {
        int level = static_cast<int>(std::floor(std::log2(static_cast<double>(k))));
        if (level % 2 == 0) members.push_back(k);
    }
    TimeSet ts(TimeSet::Mode::continuous, std::move(members), 1.0, static_cast<double>(horizon));
    auto d = density(ts, CheckpointPolicy{});  // geometric checkpoints see both phases
    CHECK(std::fabs(d.upper - 2.0 / 3.0) <= 0.05);
    CHECK(std::fabs(d.lower - 1.0 / 3.0) <= 0.05);
}

TEST_CASE("empty set has upper density 0") {
    TimeSet ts(TimeSet::Mode::discrete, {}, 1.0, 1000.0);
    CHECK(upper_density(ts) == 0.0);
}

TEST_CASE("time scaling preserves continuous density") {
    std::vector<std::uint64_t> members;
    for (std::uint64_t k = 0; k < 10'000; k += 2) members.push_back(k);
    TimeSet ts(TimeSet::Mode::continuous, std::move(members), 1.0, 10'000.0);
    auto base = density(ts, kLinear);

    SUBCASE("tau = 3 keeps density 1/2") {
        auto scaled = density(ts.scaled(3.0), kLinear);
        CHECK(std::fabs(scaled.upper - base.upper) <= 0.02);
    }
    SUBCASE("tau = 1 is the identity") { CHECK(ts.scaled(1.0) == ts); }
    SUBCASE("sampling-grid scaling is exact for several tau") {
        for (double tau : {0.5, 2.0, std::numbers::pi}) {
            auto scaled = density(ts.scaled(tau), kLinear);
            CHECK(std::fabs(scaled.upper - base.upper) <= 0.02);
            CHECK(std::fabs(scaled.lower - base.lower) <= 0.02);
        }
    }
}

TEST_CASE("discrete scaling is rejected with the density counterexample") {
    auto evens = evens_discrete(100);
    CHECK_THROWS_AS(evens.scaled(0.5), UnsupportedOperationError);
    try {
        evens.scaled(0.5);
    } catch (const UnsupportedOperationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("discrete") != std::string::npos);
        CHECK(msg.find("density") != std::string::npos);
    }
}

TEST_CASE("hitting times of a contraction orbit") {
    auto sys = SystemSpec::contraction(0.5);
    auto orbit = sample_orbit(sys, DenseState{1.0}, 1.0, 20);
    auto ts = hitting_times(orbit, ball_region(sys, DenseState{0.0}, 0.3));
    REQUIRE(ts.mode() == TimeSet::Mode::discrete);
    REQUIRE_FALSE(ts.members().empty());
    CHECK(ts.members().front() == 2);  // 0.25 is the first state inside
    CHECK(ts.members().size() == 19);
}

TEST_CASE("hitting times of the golden rotation in an arc") {
    // oracle: direct count of the same arc
    const std::uint64_t n = 100'000;
    std::uint64_t oracle = 0;
    double x = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        if (x < 0.25) ++oracle;
        x += kGolden;
        x -= std::floor(x);
    }

    auto sys = SystemSpec::rotation(kGolden);
    auto orbit = sample_orbit(sys, DenseState{0.0}, 1.0, n - 1);
    auto ts = hitting_times(orbit, [](const State& s) { return std::get<DenseState>(s)[0] < 0.25; });
    CHECK(ts.members().size() == oracle);
    auto d = density(ts, kLinear);
    CHECK(std::fabs(d.upper - 0.25) <= 0.01);
    CHECK(std::fabs(d.lower - 0.25) <= 0.01);
}

TEST_CASE("period-2 alternation hits every other sample") {
    auto sys = SystemSpec::rotation(0.5);
    auto orbit = sample_orbit(sys, DenseState{0.1}, 1.0, 10);
    auto ts = hitting_times(orbit, ball_region(sys, DenseState{0.1}, 0.01));
    CHECK(ts.members() == std::vector<std::uint64_t>{0, 2, 4, 6, 8, 10});
}

TEST_CASE("density estimates stay within [0,1] and ordered") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint64_t> members;
        for (std::uint64_t k = 0; k < 3000; ++k)
            if (u(rng) < 0.3) members.push_back(k);
        TimeSet ts(TimeSet::Mode::continuous, std::move(members), 0.5, 1500.0);
        auto d = density(ts, CheckpointPolicy{});
        CHECK(d.lower >= 0.0);
        CHECK(d.lower <= d.upper);
        CHECK(d.upper <= 1.0);
    }
}

TEST_CASE("upper density is monotone under inclusion and subadditive under union") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint64_t> big, small, other;
        for (std::uint64_t k = 0; k < 4096; ++k) {
            if (u(rng) < 0.4) {
                big.push_back(k);
                if (u(rng) < 0.5) small.push_back(k);
            }
            if (u(rng) < 0.2) other.push_back(k);
        }
        TimeSet ts_big(TimeSet::Mode::continuous, big, 1.0, 4096.0);
        TimeSet ts_small(TimeSet::Mode::continuous, small, 1.0, 4096.0);
        TimeSet ts_other(TimeSet::Mode::continuous, other, 1.0, 4096.0);

        auto d_big = density(ts_big, CheckpointPolicy{});
        auto d_small = density(ts_small, CheckpointPolicy{});
        CHECK(d_small.upper <= d_big.upper + 1e-12);
        CHECK(d_small.lower <= d_big.lower + 1e-12);

        auto joint = density(ts_big.united(ts_other), CheckpointPolicy{});
        auto d_other = density(ts_other, CheckpointPolicy{});
        CHECK(joint.upper <= d_big.upper + d_other.upper + 1e-12);
    }
}

TEST_CASE("checkpoint and argument validation") {
    auto evens = evens_discrete(100);
    CHECK_THROWS_AS(density(evens, std::vector<double>{}, 0.5), InvalidArgumentError);
    CHECK_THROWS_AS(density(evens, std::vector<double>{10.0, 5.0}, 0.5), InvalidArgumentError);
    CHECK_THROWS_AS(density(evens, std::vector<double>{10.0, 50.0}, 0.0), InvalidArgumentError);
    CHECK_THROWS_AS(density(evens, std::vector<double>{1e6}, 0.5), InvalidArgumentError);
    CHECK_THROWS_AS(TimeSet(TimeSet::Mode::discrete, {3, 3}, 1.0, 10.0), InvalidArgumentError);
    CHECK_THROWS_AS(TimeSet(TimeSet::Mode::discrete, {3, 2}, 1.0, 10.0), InvalidArgumentError);
    CHECK_THROWS_AS(TimeSet(TimeSet::Mode::continuous, {3}, 0.0, 10.0), InvalidArgumentError);
}

TEST_CASE("run-length-encoded CSV merges consecutive samples") {
    TimeSet ts(TimeSet::Mode::discrete, {0, 1, 2, 5, 6, 9}, 1.0, 10.0);
    std::ostringstream ss;
    write_timeset_rle_csv(ss, ts);
    CHECK(ss.str() == "start,end\n0,2\n5,6\n9,9\n");

    TimeSet cont(TimeSet::Mode::continuous, {0, 1, 4}, 0.5, 10.0);
    std::ostringstream ss2;
    write_timeset_rle_csv(ss2, cont);
    CHECK(ss2.str() == "start,end\n0,1\n2,2.5\n");
}

TEST_CASE("density estimate JSON export") {
    auto d = density(evens_discrete(1u << 10), CheckpointPolicy{});
    std::ostringstream ss;
    write_density_json(ss, d);
    std::string text = ss.str();
    CHECK(text.find("\"lower\": 0.5") != std::string::npos);
    CHECK(text.find("\"checkpoints\"") != std::string::npos);
}
