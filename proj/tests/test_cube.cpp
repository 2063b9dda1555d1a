#include "doctest.h"

#include "dyadic/cube.hpp"
#include "dyadic/errors.hpp"

#include <cstdint>
#include <random>

using namespace dyadic;

TEST_CASE("parent floor-halves the index") {
    CHECK(parent(CubeId(2, {3})) == CubeId(1, {1}));
    CHECK(parent(CubeId(1, {0, 1})) == CubeId(0, {0, 0}));
    CHECK(parent(CubeId(5, {7, 8, 31})) == CubeId(4, {3, 4, 15}));
    CHECK_THROWS_AS(parent(unit_cube(2)), std::invalid_argument);
}

TEST_CASE("children tile the cube in lexicographic order") {
    const auto kids1 = children(CubeId(0, {0}));
    REQUIRE(kids1.size() == 2);
    CHECK(kids1[0] == CubeId(1, {0}));
    CHECK(kids1[1] == CubeId(1, {1}));

    const auto kids2 = children(unit_cube(2));
    REQUIRE(kids2.size() == 4);
    CHECK(kids2[0] == CubeId(1, {0, 0}));
    CHECK(kids2[1] == CubeId(1, {0, 1}));
    CHECK(kids2[2] == CubeId(1, {1, 0}));
    CHECK(kids2[3] == CubeId(1, {1, 1}));

    // child volumes sum to the parent volume
    const CubeId c(3, {5, 2, 7});
    double total = 0.0;
    for (const auto& k : children(c)) total += k.volume();
    CHECK(total == doctest::Approx(c.volume()).epsilon(1e-15));

    CHECK_THROWS_AS(children(CubeId(kMaxLevel, {0})), std::invalid_argument);
}

TEST_CASE("parent/children round trip on random cubes") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 4);
        const int level = static_cast<int>(rng() % 8);
        std::vector<std::uint32_t> idx(static_cast<std::size_t>(d));
        for (auto& k : idx) k = static_cast<std::uint32_t>(rng() % (std::uint64_t{1} << level));
        const CubeId c(level, idx);
        for (const auto& k : children(c)) CHECK(parent(k) == c);
        CHECK(cube_from_linear(d, level, linear_index(c)) == c);
    }
}

TEST_CASE("containment and essential disjointness") {
    const CubeId q(1, {0, 0});
    CHECK(contains(q, CubeId(2, {1, 1})));
    CHECK(!contains(q, CubeId(2, {2, 0})));
    CHECK(contains(q, q));
    CHECK(essentially_disjoint(CubeId(2, {0, 0}), CubeId(2, {0, 1})));
    CHECK(!essentially_disjoint(q, CubeId(2, {1, 1})));
    CHECK(ancestor_at(CubeId(5, {7, 8, 31}), 4) == CubeId(4, {3, 4, 15}));
}

TEST_CASE("volume is exact") {
    CHECK(CubeId(2, {3}).volume() == 0.25);
    CHECK(CubeId(1, {0, 1}).volume() == 0.25);
    CHECK(unit_cube(3).volume() == 1.0);
}

TEST_CASE("cube parsing") {
    CHECK(parse_cube("2:3", 1) == CubeId(2, {3}));
    CHECK(parse_cube("1:0,1", 2) == CubeId(1, {0, 1}));
    CHECK_THROWS_AS(parse_cube("nonsense", 1), parse_error);
    CHECK_THROWS_AS(parse_cube("2:4", 1), parse_error);   // index out of range
    CHECK_THROWS_AS(parse_cube("1:0,1", 3), parse_error); // wrong dimension
}
