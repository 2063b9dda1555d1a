#include "doctest.h"

#include "dyadic/atoms.hpp"
#include "dyadic/errors.hpp"

#include <random>

using namespace dyadic;

TEST_CASE("haar atom with no black cubes passes everything") {
    const auto f = GridFunction::from_values(1, 1, {1, -1});
    const Atom a = Atom::from_grid(f, unit_cube(1), {});
    const AtomReport r = validate_atom(a);
    CHECK(r.valid());
    CHECK(r.worst_parent_avg == 0.0);
    CHECK(r.h1_norm == doctest::Approx(1.0));
}

TEST_CASE("structured atom with two black cubes") {
    const auto f = GridFunction::from_values(1, 2, {2, -2, 0, 0});
    const Atom a = Atom::from_grid(f, unit_cube(1), {CubeId(2, {0}), CubeId(2, {1})});
    const AtomReport r = validate_atom(a);
    // L1 = 1, Linf = 2 <= 4, exceptional set [0,1/2) covered, parent average 0
    CHECK(r.valid());
    CHECK(r.l1_ok);
    CHECK(r.linf_ok);
    CHECK(r.worst_parent_avg == doctest::Approx(0.0));
}

TEST_CASE("oversized atom fails the L1 condition") {
    const auto f = GridFunction::from_values(1, 1, {3, -3});
    const Atom a = Atom::from_grid(f, unit_cube(1), {});
    const AtomReport r = validate_atom(a);
    CHECK(!r.l1_ok);
    CHECK(!r.valid());
    CHECK_THROWS_AS(atom_h1_check(a), validation_error);
}

TEST_CASE("uncovered exceptional set and broken constancy are caught") {
    // |a| = 1.5 > 1/|Q| on cells 2,3, which no black cube covers
    const auto f = GridFunction::from_values(1, 2, {1, -1, 3, -3});
    const Atom bad = Atom::from_grid(f.scaled(0.5), unit_cube(1), {CubeId(1, {0})});
    const AtomReport r = validate_atom(bad);
    CHECK(!r.exceptional_cover_ok);

    // constant-on-black violated: values differ inside [0,1/2)
    CHECK(!r.constancy_ok);
}

TEST_CASE("support violation is reported, structural errors throw") {
    const auto f = GridFunction::from_values(1, 1, {1, -1});
    const Atom a = Atom::from_grid(f, CubeId(1, {0}), {});
    CHECK(a.support_violation);
    CHECK(!validate_atom(a).valid());

    // black cube outside the atom cube
    CHECK_THROWS_AS(Atom::from_grid(f, CubeId(1, {0}), {CubeId(1, {1})}), std::invalid_argument);
    // overlapping black cubes
    const auto g = GridFunction::from_values(1, 2, {1, -1, 0, 0});
    CHECK_THROWS_AS(Atom::from_grid(g, unit_cube(1), {CubeId(1, {0}), CubeId(2, {0})}),
                    std::invalid_argument);
}

TEST_CASE("classical mode skips the black-cube structure") {
    const auto f = GridFunction::from_values(1, 2, {1, -1, 3, -3});
    const Atom a = Atom::from_grid(f.scaled(0.5), unit_cube(1), {});
    CHECK(!validate_atom(a).valid());         // exceptional set uncovered
    CHECK(validate_atom(a, true).valid());    // no (d) in classical mode
}

TEST_CASE("atom h1 check on pinned examples") {
    const auto haar = GridFunction::from_values(1, 1, {1, -1});
    const auto c1 = atom_h1_check(Atom::from_grid(haar, unit_cube(1), {}));
    CHECK(c1.h1_norm == doctest::Approx(1.0));
    CHECK(c1.pointwise_constant <= 1.0 + 1e-12); // M*a = |a| here
    CHECK(c1.pointwise_ok);

    const auto f = GridFunction::from_values(1, 2, {2, -2, 0, 0});
    const auto c2 = atom_h1_check(Atom::from_grid(f, unit_cube(1), {CubeId(2, {0}), CubeId(2, {1})}));
    CHECK(c2.h1_norm <= 2.0 + 1e-12);
    CHECK(c2.pointwise_ok);

    // homogeneity: halving the atom halves its h1 norm
    const auto half = atom_h1_check(Atom::from_grid(f.scaled(0.5), unit_cube(1),
                                                    {CubeId(2, {0}), CubeId(2, {1})}));
    CHECK(half.h1_norm == doctest::Approx(0.5 * c2.h1_norm).epsilon(1e-12));
}

TEST_CASE("remark operator T on pinned examples") {
    // single pair, unit mass
    auto f = GridFunction::make(1, 1);
    f.set(std::uint64_t{0}, 2.0);
    const auto t1 = remark_T(f, {{unit_cube(1), {CubeId(1, {0})}}});
    CHECK(t1.value(std::uint64_t{0}) == doctest::Approx(1.0));
    CHECK(t1.value(std::uint64_t{1}) == doctest::Approx(1.0));

    // empty pair list
    CHECK(remark_T(f, {}).linf_norm() == 0.0);

    // two disjoint parents, one black child each holding mass m
    auto g = GridFunction::make(1, 2);
    g.set(std::uint64_t{0}, 4.0 * 0.3); // integral over [0,1/4) = 0.3
    g.set(std::uint64_t{2}, 4.0 * 0.3);
    const auto t2 = remark_T(g, {{CubeId(1, {0}), {CubeId(2, {0})}},
                                 {CubeId(1, {1}), {CubeId(2, {2})}}});
    for (std::uint64_t i = 0; i < 4; ++i)
        CHECK(t2.value(i) == doctest::Approx(2.0 * 0.3));

    CHECK_THROWS_AS(remark_T(f, {{unit_cube(1), {CubeId(2, {0})}}}), std::invalid_argument);
    CHECK_THROWS_AS(
        remark_T(GridFunction::make(1, 2),
                 {{CubeId(1, {0}), {CubeId(2, {0})}}, {CubeId(1, {0}), {CubeId(2, {1})}}}),
        std::invalid_argument);
}

TEST_CASE("remark T is linear") {
    std::mt19937_64 rng(12);
    auto rnd = [&](int d, int L) {
        auto f = GridFunction::make(d, L);
        for (std::uint64_t i = 0; i < f.cell_count(); ++i)
            f.set(i, static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0);
        return f;
    };
    const auto f = rnd(2, 3);
    const auto g = rnd(2, 3);
    const ParentBlackPairs pairs = {
        {CubeId(1, {0, 0}), {CubeId(2, {0, 0}), CubeId(2, {1, 1})}},
        {CubeId(2, {2, 2}), {CubeId(3, {4, 4})}},
    };
    const auto lhs = remark_T(f.scaled(0.7).plus(g, -1.3), pairs);
    const auto rhs = remark_T(f, pairs).scaled(0.7).plus(remark_T(g, pairs), -1.3);
    CHECK(lhs.max_abs_difference(rhs) < 1e-12);
}

TEST_CASE("remark l2 check on pinned examples") {
    auto f = GridFunction::make(1, 1);
    f.set(std::uint64_t{0}, 2.0);
    const auto r = remark_l2_check(f, {{unit_cube(1), {CubeId(1, {0})}}});
    CHECK(r.lhs == doctest::Approx(1.0));
    CHECK(r.rhs == doctest::Approx(1.0));
    CHECK(r.ratio == doctest::Approx(1.0));
    CHECK(r.max_parent_avg == doctest::Approx(1.0));

    const auto z = remark_l2_check(GridFunction::make(1, 1), {{unit_cube(1), {CubeId(1, {0})}}});
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK(!z.ratio_defined);
}

TEST_CASE("remark l2 ratio stays controlled on random nested instances") {
    std::mt19937_64 rng(77);
    double worst = 0.0;
    int measured = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 3);
        const int L = 2 + static_cast<int>(rng() % (d == 3 ? 2 : 3));
        auto f = GridFunction::make(d, L);
        for (std::uint64_t i = 0; i < f.cell_count(); ++i)
            f.set(i, static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0); // |f| <= 1
        // random laminar parent family: one parent per level, nested chains allowed
        ParentBlackPairs pairs;
        for (int lvl = 0; lvl + 1 <= L; ++lvl) {
            if (rng() % 2) continue;
            const std::uint64_t n_cubes = std::uint64_t{1} << (d * lvl);
            const CubeId par = cube_from_linear(d, lvl, rng() % n_cubes);
            auto kids = children(par);
            std::vector<CubeId> blacks;
            for (const auto& k : kids)
                if (rng() % 2) blacks.push_back(k);
            if (blacks.empty()) blacks.push_back(kids[0]);
            pairs.emplace_back(par, std::move(blacks));
        }
        if (pairs.empty()) continue;
        const auto r = remark_l2_check(f, pairs, 1.0);
        CHECK(r.hypotheses_ok); // |f| <= 1 makes both hypotheses automatic
        if (r.ratio_defined) {
            worst = std::max(worst, r.ratio);
            ++measured;
        }
    }
    CHECK(measured > 50);
    CHECK(worst <= 64.0);
    MESSAGE("remark l2 ratio envelope over ", measured, " instances: ", worst);
}
