#include <cmath>

#include <doctest.h>

#include "sojourn/errors.hpp"
#include "sojourn/partition.hpp"

using namespace sojourn;

TEST_CASE("box cells follow the closed upper boundary convention") {
    auto p = BoxPartition::boxes({0.0}, {1.0}, {64});
    CHECK(p.cell_count() == 64);
    CHECK(p.locate(State{DenseState{0.0}}).value() == 0);
    CHECK(p.locate(State{DenseState{1.0}}).value() == 63);  // boundary counts as inside
    CHECK(p.locate(State{DenseState{0.5}}).value() == 32);
    CHECK_FALSE(p.locate(State{DenseState{1.5}}).has_value());
    CHECK_FALSE(p.locate(State{DenseState{-0.1}}).has_value());
}

TEST_CASE("circle cells wrap") {
    auto p = BoxPartition::circle(64);
    CHECK(p.locate(State{DenseState{1.25}}).value() == 16);
    CHECK(p.locate(State{DenseState{-0.25}}).value() == 48);
    CHECK(p.cell_diameter() == doctest::Approx(1.0 / 64));
    CHECK(p.space_diameter() == 0.5);
}

TEST_CASE("cylinder cells index by the leading word") {
    auto p = BoxPartition::cylinders(3);
    CHECK(p.cell_count() == 8);
    SymbolicState s{std::make_shared<PeriodicSource>("", "101"), 0};
    CHECK(p.locate(State{s}).value() == 0b101);
    CHECK(p.cell_diameter() == 0.125);
    CHECK(p.space_diameter() == 1.0);

    State center = p.center(0b011);
    const auto& sym = std::get<SymbolicState>(center);
    CHECK(sym.symbol(0) == 0);
    CHECK(sym.symbol(1) == 1);
    CHECK(sym.symbol(2) == 1);
    CHECK(sym.symbol(3) == 0);  // periodic extension of the word
}

TEST_CASE("two-dimensional boxes locate row-major") {
    auto p = BoxPartition::boxes({0.0, 0.0}, {1.0, 1.0}, {4, 4});
    CHECK(p.cell_count() == 16);
    CHECK(p.locate(State{DenseState{0.1, 0.1}}).value() == 0);
    CHECK(p.locate(State{DenseState{0.9, 0.1}}).value() == 12);
    auto center = std::get<DenseState>(p.center(12));
    CHECK(center[0] == doctest::Approx(0.875));
    CHECK(center[1] == doctest::Approx(0.125));
}

TEST_CASE("cell set distances are exact") {
    SUBCASE("arcs wrap") {
        auto p = BoxPartition::circle(64);
        CHECK(p.cell_set_distance(0, 1) == 0.0);   // touching
        CHECK(p.cell_set_distance(0, 63) == 0.0);  // touching across the seam
        CHECK(p.cell_set_distance(0, 2) == doctest::Approx(1.0 / 64));
        CHECK(p.cell_set_distance(0, 62) == doctest::Approx(1.0 / 64));
    }
    SUBCASE("boxes") {
        auto p = BoxPartition::boxes({0.0}, {1.0}, {64});
        CHECK(p.cell_set_distance(0, 63) == doctest::Approx(62.0 / 64));
        CHECK(p.cell_set_distance(5, 6) == 0.0);
    }
    SUBCASE("cylinders are ultrametric") {
        auto p = BoxPartition::cylinders(3);
        CHECK(p.cell_set_distance(0b000, 0b001) == 0.25);
        CHECK(p.cell_set_distance(0b000, 0b100) == 1.0);
        CHECK(p.cell_set_distance(0b010, 0b011) == 0.25);
    }
}

TEST_CASE("point to cell-set distance") {
    auto p = BoxPartition::circle(64);
    std::vector<std::uint32_t> cells{0};
    CHECK(p.point_set_distance(State{DenseState{1.0 / 128}}, cells) == 0.0);
    CHECK(p.point_set_distance(State{DenseState{0.5}}, cells) ==
          doctest::Approx(0.5 - 1.0 / 64));  // nearest arc edge
    CHECK(p.point_set_distance(State{DenseState{63.5 / 64}}, cells) == doctest::Approx(0.5 / 64));
}

TEST_CASE("fattening adds exactly the cells within range") {
    SUBCASE("circle") {
        auto p = BoxPartition::circle(64);
        // closed arcs: cell 3 sits exactly 2/64 away and is included
        auto fat = p.fatten(std::vector<std::uint32_t>{0}, 1.0 / 32);
        CHECK(fat == std::vector<std::uint32_t>{0, 1, 2, 3, 61, 62, 63});
    }
    SUBCASE("zero epsilon keeps touching neighbors") {
        auto p = BoxPartition::boxes({0.0}, {1.0}, {8});
        auto fat = p.fatten(std::vector<std::uint32_t>{3}, 0.0);
        CHECK(fat == std::vector<std::uint32_t>{2, 3, 4});
    }
    SUBCASE("cylinders share a prefix") {
        auto p = BoxPartition::cylinders(3);
        auto fat = p.fatten(std::vector<std::uint32_t>{0b010}, 0.25);
        CHECK(fat == std::vector<std::uint32_t>{0b010, 0b011});
        auto wider = p.fatten(std::vector<std::uint32_t>{0b010}, 0.5);
        CHECK(wider == std::vector<std::uint32_t>{0b000, 0b001, 0b010, 0b011});
        auto same = p.fatten(std::vector<std::uint32_t>{0b010}, 0.0);
        CHECK(same == std::vector<std::uint32_t>{0b010});
    }
}

TEST_CASE("partition construction is validated") {
    CHECK_THROWS_AS(BoxPartition::boxes({0.0}, {1.0}, {0}), InvalidArgumentError);
    CHECK_THROWS_AS(BoxPartition::boxes({1.0}, {0.0}, {4}), InvalidArgumentError);
    CHECK_THROWS_AS(BoxPartition::boxes({0.0, 0.0}, {1.0}, {4, 4}), InvalidArgumentError);
    CHECK_THROWS_AS(BoxPartition::circle(0), InvalidArgumentError);
    CHECK_THROWS_AS(BoxPartition::cylinders(0), InvalidArgumentError);
    CHECK_THROWS_AS(BoxPartition::cylinders(30), InvalidArgumentError);
}
