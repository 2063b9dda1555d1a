#include "doctest.h"

#include "dyadic/shell.hpp"

#include <cmath>
#include <stdexcept>

using namespace dyadic;

TEST_CASE("scaled reals survive exponents far beyond double range") {
    const auto tiny = ScaledReal::pow2(-768);
    const auto huge = ScaledReal::pow2(800);
    CHECK((tiny * huge).to_double() == doctest::Approx(std::exp2(32.0)));
    CHECK(tiny.log2_abs() == doctest::Approx(-768.0));
    CHECK((tiny + tiny).log2_abs() == doctest::Approx(-767.0));
    CHECK((tiny - tiny).is_zero());
    CHECK(ScaledReal::abs_less(tiny, huge));
    CHECK(!ScaledReal::abs_less(huge, tiny));
    CHECK((ScaledReal(3.0) + ScaledReal(4.0)).to_double() == 7.0);
    CHECK((ScaledReal(3.0) * ScaledReal(-4.0)).to_double() == -12.0);
    CHECK((huge + tiny).to_double() == huge.to_double()); // below one ulp
}

TEST_CASE("lower bound example at d = 4") {
    const auto ex = lower_bound_h(4);
    CHECK(ex.big_a_log2 == 4); // A = 16
    REQUIRE(ex.h.terms.size() == 2);
    CHECK(ex.h.terms[0].scale == 0);
    CHECK(ex.h.terms[0].coeff.to_double() == doctest::Approx(std::exp2(-4)));
    CHECK(ex.h.terms[1].scale == 4);
    CHECK(ex.h.terms[1].coeff.to_double() == doctest::Approx(-std::pow(32.0, -4.0)));
    CHECK(ex.shells.size() == 4);
    CHECK(ex.h.integral().is_zero());
}

TEST_CASE("shells telescope exactly to h") {
    for (int d : {2, 4, 8, 16, 64}) {
        const auto ex = lower_bound_h(d);
        // sum coefficients per scale; interior scales must cancel exactly
        std::vector<ScaledReal> acc(ex.shells.size() + 1);
        for (const auto& hs : ex.shells) {
            REQUIRE(hs.terms.size() == 2);
            acc[static_cast<std::size_t>(hs.terms[0].scale)] += hs.terms[0].coeff;
            acc[static_cast<std::size_t>(hs.terms[1].scale)] += hs.terms[1].coeff;
            CHECK(hs.integral().is_zero());
        }
        CHECK((acc.front() - ex.h.terms[0].coeff).is_zero());
        CHECK((acc.back() - ex.h.terms[1].coeff).is_zero());
        for (std::size_t s = 1; s + 1 < acc.size(); ++s) CHECK(acc[s].is_zero());
    }
}

TEST_CASE("single-shell norm matches the exact closed form") {
    for (int d : {4, 8, 16, 32, 64}) {
        const auto ex = lower_bound_h(d);
        for (const auto& hs : ex.shells) {
            const double got = h1_of_shell_function(hs);
            CHECK(std::fabs(got - shell_pair_h1_closed_form(d)) <= 1e-12);
        }
    }
}

TEST_CASE("norm of h grows like log2(d) inside a tight window") {
    double lo = 1e300, hi = 0.0;
    for (int d : {4, 8, 16, 32, 64}) {
        const auto ex = lower_bound_h(d);
        const double h1 = h1_of_shell_function(ex.h);
        CHECK(std::fabs(h1 - lower_bound_h1_closed_form(d)) <= 1e-12);
        const double normalized = h1 / std::log2(static_cast<double>(d));
        lo = std::min(lo, normalized);
        hi = std::max(hi, normalized);
    }
    CHECK(hi / lo <= 4.0);
    MESSAGE("h1(h)/log2(d) window: [", lo, ", ", hi, "]");
}

TEST_CASE("degenerate and invalid shell inputs") {
    ShellFunction empty;
    empty.dim = 4;
    CHECK(h1_of_shell_function(empty) == 0.0);

    ShellFunction zero;
    zero.dim = 4;
    zero.terms = {{0, ScaledReal()}, {1, ScaledReal()}};
    CHECK(h1_of_shell_function(zero) == 0.0);

    ShellFunction lopsided;
    lopsided.dim = 3;
    lopsided.terms = {{0, ScaledReal(1.0)}};
    CHECK_THROWS_AS(h1_of_shell_function(lopsided), std::domain_error);

    ShellFunction unsorted;
    unsorted.dim = 2;
    unsorted.terms = {{1, ScaledReal(1.0)}, {0, ScaledReal(-1.0)}};
    CHECK_THROWS_AS(h1_of_shell_function(unsorted), std::invalid_argument);

    CHECK_THROWS_AS(lower_bound_h(1), std::invalid_argument);
}

TEST_CASE("shell evaluator agrees with a grid oracle in one dimension") {
    // h for d = 2 lives on [-16,16]; restricted scales keep the grid small.
    // Direct check of the d=1 analogue: g = (1/2)1_[-1,1] - (1/4)1_[-2,2].
    ShellFunction g;
    g.dim = 1;
    g.terms = {{0, ScaledReal(0.5)}, {1, ScaledReal(-0.25)}};
    // Hand enumeration: |g| = 1/4 on [-1,1], 1/4 on the annulus; corner
    // averages vanish beyond scale 2. M* = |g| everywhere inside.
    // ||M*g||_1 = 1/4 * 2 + 1/4 * 2 = 1 = 2(1 - 2^-1).
    CHECK(h1_of_shell_function(g) == doctest::Approx(1.0).epsilon(1e-14));
}
