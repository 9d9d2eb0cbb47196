#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "sojourn/errors.hpp"
#include "sojourn/systems.hpp"

using namespace sojourn;

namespace {

constexpr double kGolden = 0.61803398874989484820;

double x_of(const State& s) { return std::get<DenseState>(s)[0]; }

}  // namespace

TEST_CASE("rotation step adds alpha mod 1") {
    auto sys = SystemSpec::rotation(0.3);
    CHECK(x_of(sys.step(DenseState{0.0})) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(x_of(sys.step(DenseState{0.9})) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("logistic step at the critical point") {
    auto sys = SystemSpec::logistic(4.0);
    State one = sys.step(DenseState{0.5});
    CHECK(x_of(one) == 1.0);
    CHECK(x_of(sys.step(one)) == 0.0);
}

TEST_CASE("one RK4 step of the exponential decay flow") {
    // dx/dt = -x via the planar sink with omega = 0; closed form e^(-t)
    auto sys = SystemSpec::stable_focus(-1.0, 0.0);
    auto next = sys.step(DenseState{1.0, 0.0}, 0.1);
    CHECK(std::get<DenseState>(next)[0] == doctest::Approx(std::exp(-0.1)).epsilon(1e-6));
    CHECK(std::get<DenseState>(next)[1] == 0.0);
}

TEST_CASE("contraction orbit lists the halved states") {
    auto sys = SystemSpec::contraction(0.5);
    auto orbit = sample_orbit(sys, DenseState{1.0}, 1.0, 3);
    REQUIRE(orbit.size() == 4);
    CHECK(orbit.coords(0)[0] == 1.0);
    CHECK(orbit.coords(1)[0] == 0.5);
    CHECK(orbit.coords(2)[0] == 0.25);
    CHECK(orbit.coords(3)[0] == 0.125);
}

TEST_CASE("golden rotation equidistributes on [0,0.1)") {
    // oracle: direct accumulation, independent of the orbit machinery
    std::uint64_t oracle_count = 0;
    double x = 0.0;
    const std::uint64_t n = 100'000;
    for (std::uint64_t k = 0; k < n; ++k) {
        if (x < 0.1) ++oracle_count;
        x += kGolden;
        x -= std::floor(x);
    }
    double oracle_fraction = static_cast<double>(oracle_count) / static_cast<double>(n);
    CHECK(oracle_fraction == doctest::Approx(0.1).epsilon(0.1));

    auto sys = SystemSpec::rotation(kGolden);
    auto orbit = sample_orbit(sys, DenseState{0.0}, 1.0, n - 1);
    std::uint64_t count = 0;
    for (std::uint64_t k = 0; k < n; ++k)
        if (orbit.coords(k)[0] < 0.1) ++count;
    CHECK(count == oracle_count);
    CHECK(std::fabs(static_cast<double>(count) / static_cast<double>(n) - 0.1) <= 0.01);
}

TEST_CASE("shift of the alternating sequence") {
    auto sys = SystemSpec::full_shift();
    SymbolicState x0{std::make_shared<PeriodicSource>("", "01"), 0};
    auto orbit = sample_orbit(sys, x0, 1.0, 2);
    CHECK(orbit.symbol(0, 0) == 0);
    CHECK(orbit.symbol(0, 1) == 1);
    CHECK(orbit.symbol(1, 0) == 1);
    CHECK(orbit.symbol(1, 1) == 0);
    CHECK(orbit.symbol(2, 0) == 0);
}

TEST_CASE("metric values") {
    auto circle = SystemSpec::rotation(0.0);
    CHECK(circle.distance(DenseState{0.9}, DenseState{0.1}) == doctest::Approx(0.2).epsilon(1e-12));

    auto plane = SystemSpec::stable_focus(-1.0, 1.0);
    CHECK(plane.distance(DenseState{0.0, 0.0}, DenseState{3.0, 4.0}) == doctest::Approx(5.0));

    auto shift = SystemSpec::full_shift();
    SymbolicState a{std::make_shared<PeriodicSource>("", "0111"), 0};
    SymbolicState b{std::make_shared<PeriodicSource>("0100", "0"), 0};
    CHECK(shift.distance(a, b) == 0.25);  // first disagreement at index 2
}

TEST_CASE("metric axioms hold on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    auto check_axioms = [](const SystemSpec& sys, auto gen) {
        for (int i = 0; i < 1000; ++i) {
            State a = gen(), b = gen(), c = gen();
            double dab = sys.distance(a, b);
            double dba = sys.distance(b, a);
            double dac = sys.distance(a, c);
            double dcb = sys.distance(c, b);
            CHECK(dab == dba);
            CHECK(dab >= 0.0);
            CHECK(sys.distance(a, a) == 0.0);
            CHECK(dab <= dac + dcb + 1e-12);
        }
    };

    auto circle = SystemSpec::rotation(kGolden);
    check_axioms(circle, [&]() -> State { return DenseState{u(rng)}; });

    auto plane = SystemSpec::stable_focus(-1.0, 2.0);
    check_axioms(plane, [&]() -> State { return DenseState{u(rng) * 4 - 2, u(rng) * 4 - 2}; });

    auto shift = SystemSpec::full_shift();
    check_axioms(shift, [&]() -> State { return SymbolicState{random_point(rng()), 0}; });
}

TEST_CASE("semigroup law: k then m steps equals k+m steps") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> steps(0, 50);

    SUBCASE("maps are exact") {
        auto sys = SystemSpec::logistic(4.0);
        for (int i = 0; i < 100; ++i) {
            State x = DenseState{u(rng)};
            auto k = steps(rng), m = steps(rng);
            State two = sys.advance(sys.advance(x, k), m);
            State one = sys.advance(x, k + m);
            CHECK(x_of(two) == x_of(one));
        }
    }
    SUBCASE("shifts are exact") {
        auto sys = SystemSpec::full_shift();
        for (int i = 0; i < 100; ++i) {
            State x = SymbolicState{random_point(rng()), 0};
            auto k = steps(rng), m = steps(rng);
            State two = sys.advance(sys.advance(x, k), m);
            State one = sys.advance(x, k + m);
            CHECK(std::get<SymbolicState>(two).shift == std::get<SymbolicState>(one).shift);
        }
    }
    SUBCASE("flows drift below 1e-9 per step") {
        auto sys = SystemSpec::stable_focus(-0.5, 2.0);
        for (int i = 0; i < 100; ++i) {
            State x = DenseState{u(rng) * 2 - 1, u(rng) * 2 - 1};
            auto k = steps(rng), m = steps(rng);
            State two = sys.advance(sys.advance(x, k, 0.05), m, 0.05);
            State one = sys.advance(x, k + m, 0.05);
            double err = sys.distance(two, one);
            CHECK(err <= 1e-9 * static_cast<double>(k + m + 1));
        }
    }
}

TEST_CASE("advancing by zero is the identity") {
    auto sys = SystemSpec::rotation(kGolden);
    State x = DenseState{0.25};
    CHECK(x_of(sys.advance(x, 0)) == 0.25);
}

TEST_CASE("RK4 shows fourth-order error decay against the closed form") {
    auto sys = SystemSpec::stable_focus(-1.0, 0.0);
    auto err_at = [&](double delta) {
        auto steps = static_cast<std::uint64_t>(std::llround(1.0 / delta));
        State x = sys.advance(DenseState{1.0, 0.0}, steps, delta);
        return std::fabs(std::get<DenseState>(x)[0] - std::exp(-1.0));
    };
    double e1 = err_at(0.1);
    double e2 = err_at(0.05);
    CHECK(e1 / e2 >= 14.0);
}

TEST_CASE("step errors carry the failing index") {
    SUBCASE("divergent map orbit overflows") {
        auto sys = SystemSpec::logistic(4.0);
        CHECK_THROWS_AS(sample_orbit(sys, DenseState{3.0}, 1.0, 1000), NumericOverflowError);
        try {
            sample_orbit(sys, DenseState{3.0}, 1.0, 1000);
        } catch (const NumericOverflowError& e) {
            REQUIRE(e.index().has_value());
            CHECK(*e.index() > 0);
        }
    }
    SUBCASE("finite sequence exhausts") {
        auto sys = SystemSpec::full_shift();
        SymbolicState x0{std::make_shared<FiniteSource>("0101"), 0};
        CHECK_THROWS_AS(sample_orbit(sys, x0, 1.0, 10), OrbitExhaustedError);
        CHECK_THROWS_AS(sys.advance(x0, 10), OrbitExhaustedError);
        // a short enough orbit is fine
        auto orbit = sample_orbit(sys, x0, 1.0, 3);
        CHECK(orbit.symbol(3, 0) == 1);
    }
    SUBCASE("dimension mismatch") {
        auto sys = SystemSpec::stable_focus(-1.0, 1.0);
        CHECK_THROWS_AS(sample_orbit(sys, DenseState{1.0}, 1.0, 10), DimensionMismatchError);
        CHECK_THROWS_AS(sys.distance(DenseState{1.0, 2.0}, DenseState{1.0}), DimensionMismatchError);
    }
    SUBCASE("degenerate sampling steps are rejected up front") {
        auto sys = SystemSpec::rotation(0.1);
        CHECK_THROWS_AS(sample_orbit(sys, DenseState{0.0}, 0.0, 10), InvalidArgumentError);
        CHECK_THROWS_AS(sample_orbit(sys, DenseState{0.0}, -1.0, 10), InvalidArgumentError);
        CHECK_THROWS_AS(sample_orbit(sys, DenseState{0.0}, 1.5, 10), InvalidArgumentError);
    }
}

TEST_CASE("sequence specs parse") {
    CHECK(parse_sequence_spec("periodic:01")->at(3) == 1);
    CHECK(parse_sequence_spec("preperiodic:111|01")->at(2) == 1);
    CHECK(parse_sequence_spec("preperiodic:111|01")->at(3) == 0);
    CHECK(parse_sequence_spec("finite:0110")->length().value() == 4);
    CHECK_THROWS_AS(parse_sequence_spec("periodic:0x1"), InvalidArgumentError);
    CHECK_THROWS_AS(parse_sequence_spec("nonsense:1"), InvalidArgumentError);

    // sturmian coding of the golden rotation: symbol i is 1 iff the rotation
    // crosses an integer between i*alpha and (i+1)*alpha
    auto sturmian = parse_sequence_spec("sturmian:0.61803398874989484820");
    int ones = 0;
    for (int i = 0; i < 1000; ++i) ones += sturmian->at(i);
    CHECK(std::fabs(ones / 1000.0 - kGolden) < 0.01);
}

TEST_CASE("streaming traversal matches the stored orbit") {
    auto sys = SystemSpec::logistic(4.0);
    auto orbit = sample_orbit(sys, DenseState{0.3}, 1.0, 100);
    std::uint64_t seen = 0;
    for_each_state(sys, DenseState{0.3}, 1.0, 100, [&](std::uint64_t k, const State& s) {
        CHECK(x_of(s) == orbit.coords(k)[0]);
        ++seen;
    });
    CHECK(seen == 101);
}

TEST_CASE("orbit CSV export") {
    SUBCASE("dense") {
        auto sys = SystemSpec::contraction(0.5);
        auto orbit = sample_orbit(sys, DenseState{1.0}, 1.0, 2);
        std::ostringstream ss;
        write_orbit_csv(ss, orbit);
        CHECK(ss.str() == "t,x_1\n0,1\n1,0.5\n2,0.25\n");
    }
    SUBCASE("symbolic carries 64 symbols") {
        auto sys = SystemSpec::full_shift();
        auto orbit = sample_orbit(sys, SymbolicState{std::make_shared<PeriodicSource>("", "01"), 0}, 1.0, 1);
        std::ostringstream ss;
        write_orbit_csv(ss, orbit);
        std::string text = ss.str();
        CHECK(text.find("t,symbols\n") == 0);
        CHECK(text.find("0,0101") != std::string::npos);
        auto line_len = text.find('\n', text.find("0,0101"));
        (void)line_len;
    }
}
