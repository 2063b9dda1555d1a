#include "doctest.h"

#include "dyadic/errors.hpp"
#include "dyadic/grid_function.hpp"
#include "dyadic/reference.hpp"

#include <random>
#include <sstream>

using namespace dyadic;

namespace {

GridFunction random_function(int d, int L, std::mt19937_64& rng, Storage storage) {
    GridFunction f(d, L, storage);
    for (std::uint64_t i = 0; i < f.cell_count(); ++i) {
        const double v = static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0;
        f.set(i, v);
    }
    return f;
}

} // namespace

TEST_CASE("averages are exact means") {
    const auto f = GridFunction::from_values(1, 1, {2, 4});
    CHECK(f.average(unit_cube(1)) == doctest::Approx(3.0).epsilon(1e-15));

    const auto g = GridFunction::from_values(1, 2, {4, -2, -1, -1});
    CHECK(g.average(CubeId(1, {0})) == doctest::Approx(1.0).epsilon(1e-15));

    const auto z = GridFunction::make(2, 2);
    CHECK(z.average(CubeId(1, {1, 0})) == 0.0);
    CHECK(z.average(unit_cube(2)) == 0.0);
}

TEST_CASE("conditional expectation") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    const auto e0 = haar.conditional_expectation(0);
    CHECK(e0.linf_norm() == 0.0);

    const auto g = GridFunction::from_values(1, 2, {4, -2, -1, -1});
    const auto e1 = g.conditional_expectation(1);
    CHECK(e1.value(std::uint64_t{0}) == doctest::Approx(1.0));
    CHECK(e1.value(std::uint64_t{1}) == doctest::Approx(1.0));
    CHECK(e1.value(std::uint64_t{2}) == doctest::Approx(-1.0));
    CHECK(e1.value(std::uint64_t{3}) == doctest::Approx(-1.0));

    // n = depth is the identity
    CHECK(g.conditional_expectation(2).max_abs_difference(g) == 0.0);

    CHECK_THROWS_AS(g.conditional_expectation(3), std::invalid_argument);
    CHECK_THROWS_AS(g.conditional_expectation(-1), std::invalid_argument);
}

TEST_CASE("tower property and contractivity on random functions") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int L = 1 + static_cast<int>(rng() % (d == 3 ? 3 : 5));
        const auto f = random_function(d, L, rng, Storage::dense);
        const int n = static_cast<int>(rng() % (static_cast<unsigned>(L) + 1));
        const int m = static_cast<int>(rng() % (static_cast<unsigned>(n) + 1));

        const auto en = f.conditional_expectation(n);
        // idempotent
        CHECK(en.conditional_expectation(n).max_abs_difference(en) < 1e-12 * (1 + f.linf_norm()));
        // E_m E_n = E_m for m <= n
        const auto em = f.conditional_expectation(m);
        CHECK(en.conditional_expectation(m).max_abs_difference(em) < 1e-12 * (1 + f.linf_norm()));
        // contractive in both norms
        CHECK(en.linf_norm() <= f.linf_norm() + 1e-15);
        CHECK(en.lp_norm(1) <= f.lp_norm(1) + 1e-12);
    }
}

TEST_CASE("norms and integral") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    CHECK(haar.lp_norm(1) == doctest::Approx(1.0));
    CHECK(haar.linf_norm() == 1.0);
    CHECK(haar.integral() == 0.0);

    auto c = GridFunction::make(2, 1);
    for (std::uint64_t i = 0; i < 4; ++i) c.set(i, -2.5);
    CHECK(c.lp_norm(1) == doctest::Approx(2.5));
    CHECK(c.integral() == doctest::Approx(-2.5));

    const auto q = GridFunction::from_values(2, 1, {1, 1, 1, -3});
    CHECK(q.integral() == doctest::Approx(0.0));
    CHECK(q.lp_norm(1) == doctest::Approx(1.5));
    CHECK_THROWS_AS(q.lp_norm(3), std::invalid_argument);
}

TEST_CASE("dense and sparse storage agree") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int L = 1 + static_cast<int>(rng() % (d == 3 ? 3 : 5));
        const auto dense = random_function(d, L, rng, Storage::dense);
        const auto sparse = dense.to_storage(Storage::sparse);
        CHECK(sparse.storage() == Storage::sparse);

        CHECK(dense.integral() == doctest::Approx(sparse.integral()).epsilon(1e-14));
        CHECK(dense.lp_norm(1) == doctest::Approx(sparse.lp_norm(1)).epsilon(1e-14));
        CHECK(dense.linf_norm() == sparse.linf_norm());

        const int n = static_cast<int>(rng() % (static_cast<unsigned>(L) + 1));
        CHECK(dense.conditional_expectation(n).max_abs_difference(
                  sparse.conditional_expectation(n)) < 1e-13);

        const CubeId probe = cube_from_linear(d, n, rng() % (std::uint64_t{1} << (d * n)));
        CHECK(dense.average(probe) == doctest::Approx(sparse.average(probe)).epsilon(1e-13));
    }
}

TEST_CASE("level sums match direct averages") {
    std::mt19937_64 rng(11);
    const auto f = random_function(2, 3, rng, Storage::dense);
    const LevelSums sums(f);
    for (int n = 0; n <= 3; ++n)
        for (std::uint64_t lin = 0; lin < (std::uint64_t{1} << (2 * n)); ++lin) {
            const CubeId c = cube_from_linear(2, n, lin);
            CHECK(sums.average(n, lin) == doctest::Approx(ref::average(f, c)).epsilon(1e-12));
        }
}

TEST_CASE("file round trip, both storages") {
    std::mt19937_64 rng(3);
    for (Storage s : {Storage::dense, Storage::sparse}) {
        const auto f = random_function(2, 2, rng, s);
        std::stringstream buf;
        write_grid_function(buf, f);
        const auto g = read_grid_function(buf, "buf");
        CHECK(g.storage() == s);
        CHECK(f.max_abs_difference(g) == 0.0);
    }
}

TEST_CASE("reader rejects malformed input with line numbers") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        std::stringstream buf(text);
        try {
            read_grid_function(buf, "t.txt");
            FAIL_CHECK("expected parse_error for: " << text);
        } catch (const parse_error& e) {
            CHECK(std::string(e.what()).find("t.txt:") != std::string::npos);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("d=1 storage=dense\n0 0\n", "L=");
    expect_error("d=0 L=1 storage=dense\n\n", "d=");
    expect_error("d=1 L=1 storage=banana\n", "storage=");
    expect_error("d=1 L=1 storage=dense\n1 2 3\n", "more than");
    expect_error("d=1 L=1 storage=dense\n1\n", "expected 2 values");
    expect_error("d=1 L=1 storage=dense\n1 oops\n", "bad value");
    expect_error("d=2 L=1 storage=sparse\n0 2 1.0\n", "out of range");
    expect_error("d=2 L=1 storage=sparse\n0 1 1.0\n0 1 2.0\n", "duplicate");
    expect_error("d=1 L=1 storage=sparse\n0\n", "missing cell value");
}
