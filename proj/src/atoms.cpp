#include "dyadic/atoms.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dyadic {

namespace {

constexpr double kTol = 1e-10;

void check_black_family(const CubeId& cube, const std::vector<CubeId>& blacks, int depth) {
    for (const auto& b : blacks) {
        if (b.dim() != cube.dim())
            throw std::invalid_argument("black cube dimension mismatch");
        if (b.level <= cube.level || !contains(cube, b))
            throw std::invalid_argument("black cube " + b.to_string() +
                                        " is not strictly inside the atom cube " + cube.to_string());
        if (b.level > depth)
            throw std::invalid_argument("black cube " + b.to_string() + " finer than the grid depth");
    }
    for (std::size_t i = 0; i < blacks.size(); ++i)
        for (std::size_t j = i + 1; j < blacks.size(); ++j)
            if (!essentially_disjoint(blacks[i], blacks[j]))
                throw std::invalid_argument("black cubes " + blacks[i].to_string() + " and " +
                                            blacks[j].to_string() + " are not essentially disjoint");
}

// Local per-level average tables over the patch, levels cube.level .. depth.
struct PatchAverages {
    int base;                              // cube.level
    std::vector<std::vector<double>> avg;  // avg[n - base][local cube index at level n]

    explicit PatchAverages(const CubePatch& p) : base(p.cube().level) {
        const int d = p.dim();
        const int levels = p.depth() - base + 1;
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(levels));
        sums.back().assign(p.cell_count(), 0.0);
        for (std::uint64_t i = 0; i < p.cell_count(); ++i) sums.back()[i] = p[i];
        for (int k = levels - 2; k >= 0; --k) {
            const auto& lower = sums[static_cast<std::size_t>(k) + 1];
            auto& cur = sums[static_cast<std::size_t>(k)];
            cur.assign(std::size_t{1} << (d * k), 0.0);
            const int low_bits = k + 1;
            const std::uint64_t mask = (std::uint64_t{1} << low_bits) - 1;
            for (std::uint64_t i = 0; i < lower.size(); ++i) {
                std::uint64_t up = 0;
                for (int c = 0; c < d; ++c) {
                    const std::uint64_t comp = (i >> ((d - 1 - c) * low_bits)) & mask;
                    up |= (comp >> 1) << ((d - 1 - c) * k);
                }
                cur[up] += lower[i];
            }
        }
        avg.resize(static_cast<std::size_t>(levels));
        for (int k = 0; k < levels; ++k) {
            const double inv = std::ldexp(1.0, -d * (levels - 1 - k));
            avg[static_cast<std::size_t>(k)].resize(sums[static_cast<std::size_t>(k)].size());
            for (std::size_t i = 0; i < sums[static_cast<std::size_t>(k)].size(); ++i)
                avg[static_cast<std::size_t>(k)][i] = sums[static_cast<std::size_t>(k)][i] * inv;
        }
    }

    // local index at relative level k of the cell with local index `cell`
    static std::uint64_t up_index(std::uint64_t cell, int d, int cell_bits, int k) {
        const std::uint64_t mask = (cell_bits == 0) ? 0 : ((std::uint64_t{1} << cell_bits) - 1);
        std::uint64_t out = 0;
        for (int c = 0; c < d; ++c) {
            const std::uint64_t comp = (cell >> ((d - 1 - c) * cell_bits)) & mask;
            out |= (comp >> (cell_bits - k)) << ((d - 1 - c) * k);
        }
        return out;
    }
};

double integral_abs_over(const GridFunction& f, const CubeId& c) {
    double s = 0.0;
    const int shift = f.depth() - c.level;
    const std::uint64_t mask = (f.depth() == 0) ? 0 : ((std::uint64_t{1} << f.depth()) - 1);
    f.for_each_nonzero([&](std::uint64_t cell, double v) {
        for (int i = 0; i < f.dim(); ++i) {
            const std::uint64_t comp = (cell >> ((f.dim() - 1 - i) * f.depth())) & mask;
            if ((comp >> shift) != c.index[static_cast<std::size_t>(i)]) return;
        }
        s += std::fabs(v);
    });
    return s * f.cell_volume();
}

} // namespace

Atom Atom::from_grid(const GridFunction& f, CubeId cube, std::vector<CubeId> blacks,
                     double c_bound) {
    if (cube.dim() != f.dim()) throw std::invalid_argument("atom cube dimension mismatch");
    if (cube.level > f.depth()) throw std::invalid_argument("atom cube finer than the grid");
    check_black_family(cube, blacks, f.depth());
    Atom a;
    a.cube = cube;
    a.values = CubePatch::restrict_to(f, cube);
    a.black_cubes = std::move(blacks);
    a.c_bound = c_bound;

    double outside = 0.0;
    const double inside_abs = a.values.l1_norm() / f.cell_volume();
    f.for_each_nonzero([&](std::uint64_t, double v) { outside += std::fabs(v); });
    outside -= inside_abs;
    a.support_violation = outside > kTol * std::max(1.0, inside_abs);
    return a;
}

CubePatch atom_maximal_function(const Atom& a) {
    const CubePatch& p = a.values;
    const PatchAverages pa(p);
    const int d = p.dim();
    const int cell_bits = p.depth() - a.cube.level;
    CubePatch out(a.cube, p.depth());
    const std::int64_t n = static_cast<std::int64_t>(p.cell_count());
#pragma omp parallel for schedule(static)
    for (std::int64_t cell = 0; cell < n; ++cell) {
        double m = 0.0;
        for (int k = 0; k <= cell_bits; ++k) {
            const double v = std::fabs(
                pa.avg[static_cast<std::size_t>(k)]
                      [PatchAverages::up_index(static_cast<std::uint64_t>(cell), d, cell_bits, k)]);
            if (v > m) m = v;
        }
        out[static_cast<std::uint64_t>(cell)] = m;
    }
    return out;
}

AtomReport validate_atom(const Atom& a, bool classical_mode) {
    check_black_family(a.cube, a.black_cubes, a.values.depth());
    const CubePatch& p = a.values;
    const double q_vol = a.cube.volume();
    const double l1 = p.l1_norm();

    AtomReport r;
    r.support_ok = !a.support_violation;
    r.mean_ok = l1 == 0.0 || std::fabs(p.integral()) <= kTol * l1;
    r.l1_ok = l1 <= 1.0 + kTol;
    r.linf_ok = p.linf_norm() <=
                std::ldexp(1.0, a.cube.dim() + 1) / q_vol * (1.0 + kTol);

    if (classical_mode) {
        r.exceptional_cover_ok = true;
        r.parent_avg_ok = true;
        r.constancy_ok = true;
    } else {
        // (d) cover: mark cells belonging to some black cube
        std::vector<bool> covered(p.cell_count(), false);
        r.constancy_ok = true;
        for (const auto& b : a.black_cubes) {
            bool first = true;
            double ref_value = 0.0;
            const CubePatch probe(b, p.depth()); // indexing helper for the black cube's cells
            for (std::uint64_t k = 0; k < probe.cell_count(); ++k) {
                const std::uint64_t local = p.local_index(probe.global_cell(k));
                covered[local] = true;
                if (first) {
                    ref_value = p[local];
                    first = false;
                } else if (p[local] != ref_value) {
                    r.constancy_ok = false;
                }
            }
        }
        const double cutoff = (1.0 + kTol) / q_vol;
        r.exceptional_cover_ok = true;
        for (std::uint64_t i = 0; i < p.cell_count(); ++i)
            if (std::fabs(p[i]) > cutoff && !covered[i]) {
                r.exceptional_cover_ok = false;
                break;
            }

        r.parent_avg_ok = true;
        for (const auto& b : a.black_cubes) {
            const CubeId par = parent(b);
            const double scaled = q_vol * std::fabs(p.average_over(par));
            r.worst_parent_avg = std::max(r.worst_parent_avg, scaled);
            if (scaled > a.c_bound * (1.0 + kTol)) r.parent_avg_ok = false;
        }
    }

    r.h1_norm = atom_maximal_function(a).l1_norm();
    return r;
}

AtomH1Check atom_h1_check(const Atom& a, double threshold) {
    const AtomReport rep = validate_atom(a);
    if (!rep.valid())
        throw validation_error("atom_h1_check requires a valid atom (cube " + a.cube.to_string() + ")");
    const CubePatch m = atom_maximal_function(a);
    AtomH1Check out;
    out.h1_norm = rep.h1_norm;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < m.cell_count(); ++i)
        worst = std::max(worst, m[i] - std::fabs(a.values[i]));
    out.pointwise_constant = std::max(0.0, worst * a.cube.volume());
    out.pointwise_ok = out.pointwise_constant <= threshold;
    return out;
}

GridFunction remark_T(const GridFunction& f, const ParentBlackPairs& pairs) {
    std::set<CubeId> seen;
    for (const auto& [par, blacks] : pairs) {
        if (par.dim() != f.dim()) throw std::invalid_argument("parent dimension mismatch");
        if (!seen.insert(par).second)
            throw std::invalid_argument("duplicate parent cube " + par.to_string());
        if (par.level + 1 > f.depth())
            throw std::invalid_argument("parent " + par.to_string() + " has no children at this depth");
        for (const auto& b : blacks)
            if (b.level != par.level + 1 || !contains(par, b))
                throw std::invalid_argument("cube " + b.to_string() +
                                            " is not an immediate child of " + par.to_string());
    }

    GridFunction out(f.dim(), f.depth(), f.storage());
    for (const auto& [par, blacks] : pairs) {
        double mass = 0.0;
        for (const auto& b : blacks) mass += f.average(b) * b.volume();
        const double level_value = mass / par.volume();
        if (level_value == 0.0) continue;
        CubePatch marker(par, f.depth());
        for (std::uint64_t i = 0; i < marker.cell_count(); ++i) marker[i] = level_value;
        marker.accumulate_into(out, 1.0);
    }
    return out;
}

RemarkL2Report remark_l2_check(const GridFunction& f, const ParentBlackPairs& pairs,
                               double hypothesis_bound) {
    const GridFunction tf = remark_T(f, pairs);
    RemarkL2Report r;
    const double l2 = tf.lp_norm(2);
    r.lhs = l2 * l2;
    for (const auto& [par, blacks] : pairs)
        for (const auto& b : blacks) r.rhs += integral_abs_over(f, b);
    if (r.rhs > 0.0) {
        r.ratio = r.lhs / r.rhs;
        r.ratio_defined = true;
    }

    for (const auto& [par, blacks] : pairs) {
        r.max_parent_avg = std::max(r.max_parent_avg, std::fabs(f.average(par)));
        // remainder: parent integral minus every black cube inside it
        double black_mass = 0.0;
        for (const auto& [par2, blacks2] : pairs)
            for (const auto& b : blacks2)
                if (contains(par, b)) black_mass += f.average(b) * b.volume();
        const double remainder = std::fabs(f.average(par) * par.volume() - black_mass) / par.volume();
        r.max_remainder_avg = std::max(r.max_remainder_avg, remainder);
    }
    r.hypotheses_ok =
        r.max_parent_avg <= hypothesis_bound && r.max_remainder_avg <= hypothesis_bound;
    return r;
}

} // namespace dyadic
