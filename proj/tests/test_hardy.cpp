#include "doctest.h"

#include "dyadic/hardy.hpp"
#include "dyadic/reference.hpp"

#include <cmath>
#include <random>

using namespace dyadic;

namespace {

GridFunction random_meanzero(int d, int L, std::mt19937_64& rng) {
    GridFunction f = GridFunction::make(d, L);
    double sum = 0.0;
    for (std::uint64_t i = 0; i < f.cell_count(); ++i) {
        const double v = static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0;
        f.set(i, v);
        sum += v;
    }
    const double mean = sum / static_cast<double>(f.cell_count());
    for (std::uint64_t i = 0; i < f.cell_count(); ++i) f.set(i, f.value(i) - mean);
    return f;
}

} // namespace

TEST_CASE("maximal function on pinned examples") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    const auto m1 = maximal_function(haar);
    CHECK(m1.value(std::uint64_t{0}) == doctest::Approx(1.0));
    CHECK(m1.value(std::uint64_t{1}) == doctest::Approx(1.0));

    const auto g = GridFunction::from_values(1, 2, {4, -2, -1, -1});
    const auto m2 = maximal_function(g);
    CHECK(m2.value(std::uint64_t{0}) == doctest::Approx(4.0));
    CHECK(m2.value(std::uint64_t{1}) == doctest::Approx(2.0));
    CHECK(m2.value(std::uint64_t{2}) == doctest::Approx(1.0));
    CHECK(m2.value(std::uint64_t{3}) == doctest::Approx(1.0));

    auto c = GridFunction::make(2, 2);
    for (std::uint64_t i = 0; i < c.cell_count(); ++i) c.set(i, -0.75);
    CHECK(maximal_function(c).max_abs_difference(c.scaled(-1.0)) < 1e-15);
}

TEST_CASE("square function on pinned examples") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    const auto s1 = square_function(haar);
    CHECK(s1.value(std::uint64_t{0}) == doctest::Approx(1.0));

    // level differences (1,1,-1,-1) then (3,-3,0,0)
    const auto g = GridFunction::from_values(1, 2, {4, -2, -1, -1});
    const auto s2 = square_function(g);
    CHECK(s2.value(std::uint64_t{0}) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    CHECK(s2.value(std::uint64_t{1}) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    CHECK(s2.value(std::uint64_t{2}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s2.value(std::uint64_t{3}) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(square_function(GridFunction::make(1, 2)).linf_norm() == 0.0);
}

TEST_CASE("h1 norms on pinned examples") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    const auto r1 = h1_norms(haar);
    CHECK(r1.h1_maximal == doctest::Approx(1.0));
    CHECK(r1.h1_square == doctest::Approx(1.0));
    CHECK(r1.ratio == doctest::Approx(1.0));

    const auto g = GridFunction::from_values(1, 2, {4, -2, -1, -1});
    CHECK(h1_norms(g).h1_maximal == doctest::Approx(2.0));

    const auto q = GridFunction::from_values(2, 1, {1, -1, -1, 1});
    CHECK(h1_norms(q).h1_maximal == doctest::Approx(1.0));

    const auto z = h1_norms(GridFunction::make(2, 1));
    CHECK(z.h1_maximal == 0.0);
    CHECK(z.h1_square == 0.0);
    CHECK(!z.ratio_defined);
}

TEST_CASE("L1 norm is dominated by the maximal norm; scaling is exact") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int L = 1 + static_cast<int>(rng() % (d == 3 ? 3 : 5));
        const auto f = random_meanzero(d, L, rng);
        const auto r = h1_norms(f);
        CHECK(f.lp_norm(1) <= r.h1_maximal + 1e-12);

        const auto r3 = h1_norms(f.scaled(-3.0));
        CHECK(r3.h1_maximal == doctest::Approx(3.0 * r.h1_maximal).epsilon(1e-12));
        CHECK(r3.h1_square == doctest::Approx(3.0 * r.h1_square).epsilon(1e-12));
    }
}

TEST_CASE("square/maximal ratio stays in a sane envelope") {
    std::mt19937_64 rng(99);
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int L = 1 + static_cast<int>(rng() % (d == 3 ? 3 : 5));
        const auto r = h1_norms(random_meanzero(d, L, rng));
        REQUIRE(r.ratio_defined);
        lo = std::min(lo, r.ratio);
        hi = std::max(hi, r.ratio);
    }
    CHECK(lo > 1.0 / 16.0);
    CHECK(hi < 16.0);
    MESSAGE("square/maximal ratio envelope over 60 random functions: [", lo, ", ", hi, "]");
}

TEST_CASE("fast maximal function matches the ancestor-enumeration oracle") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 2);
        const int L = 1 + static_cast<int>(rng() % 3);
        const auto f = random_meanzero(d, L, rng);
        CHECK(maximal_function(f).max_abs_difference(ref::maximal_function(f)) < 1e-12);
        CHECK(square_function(f).max_abs_difference(ref::square_function(f)) < 1e-12);
    }
}

TEST_CASE("maximal and square functions agree across storages") {
    std::mt19937_64 rng(31);
    const auto f = random_meanzero(2, 3, rng);
    const auto fs = f.to_storage(Storage::sparse);
    CHECK(maximal_function(f).max_abs_difference(maximal_function(fs)) < 1e-13);
    CHECK(square_function(f).max_abs_difference(square_function(fs)) < 1e-13);
}
