#include "dyadic/hardy.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace dyadic {

namespace {

// Per-cell chain of ancestor averages, coarse to fine: averages[n] is the
// level-n average of the cube containing the cell. Shared by both kernels.
// Works off a dense internal table; desk-scale functions always fit.
struct LevelAverages {
    int dim, depth;
    std::vector<std::vector<double>> avg; // avg[n][cube_lin]

    explicit LevelAverages(const GridFunction& f) : dim(f.dim()), depth(f.depth()) {
        const GridFunction* src = &f;
        GridFunction densified = f; // cheap copy only if we must densify
        if (f.storage() == Storage::sparse) {
            densified = f.to_storage(Storage::dense);
            src = &densified;
        }
        LevelSums sums(*src);
        avg.resize(static_cast<std::size_t>(depth) + 1);
        for (int n = 0; n <= depth; ++n) {
            const auto& table = sums.level_table(n);
            auto& a = avg[static_cast<std::size_t>(n)];
            a.resize(table.size());
            const double inv = std::ldexp(1.0, -dim * (depth - n));
            for (std::size_t i = 0; i < table.size(); ++i) a[i] = table[i] * inv;
        }
    }

    // level-n cube linear index containing the level-L cell `cell`
    std::uint64_t up(std::uint64_t cell, int n) const {
        const int shift = depth - n;
        const std::uint64_t mask = (depth == 0) ? 0 : ((std::uint64_t{1} << depth) - 1);
        std::uint64_t out = 0;
        for (int i = 0; i < dim; ++i) {
            const std::uint64_t comp = (cell >> ((dim - 1 - i) * depth)) & mask;
            out |= (comp >> shift) << ((dim - 1 - i) * n);
        }
        return out;
    }
};

GridFunction with_same_storage(const GridFunction& like, const std::vector<double>& cells) {
    GridFunction out(like.dim(), like.depth(),
                     like.storage() == Storage::dense ? Storage::dense : Storage::sparse);
    for (std::uint64_t i = 0; i < like.cell_count(); ++i)
        if (cells[i] != 0.0) out.set(i, cells[i]);
    return out;
}

} // namespace

GridFunction maximal_function(const GridFunction& f) {
    const LevelAverages la(f);
    const std::int64_t n_cells = static_cast<std::int64_t>(f.cell_count());
    std::vector<double> out(static_cast<std::size_t>(n_cells), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t cell = 0; cell < n_cells; ++cell) {
        double m = 0.0;
        for (int n = 0; n <= la.depth; ++n) {
            const double a = std::fabs(la.avg[static_cast<std::size_t>(n)][la.up(static_cast<std::uint64_t>(cell), n)]);
            if (a > m) m = a;
        }
        out[static_cast<std::size_t>(cell)] = m;
    }
    return with_same_storage(f, out);
}

GridFunction square_function(const GridFunction& f) {
    const LevelAverages la(f);
    const std::int64_t n_cells = static_cast<std::int64_t>(f.cell_count());
    std::vector<double> out(static_cast<std::size_t>(n_cells), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t cell = 0; cell < n_cells; ++cell) {
        // compensated sum, accumulated coarse to fine
        double s = 0.0, comp = 0.0;
        auto add = [&](double x) {
            const double y = x - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        };
        double prev = la.avg[0][la.up(static_cast<std::uint64_t>(cell), 0)];
        add(prev * prev); // E_0 term; zero for mean-zero f
        for (int n = 1; n <= la.depth; ++n) {
            const double cur = la.avg[static_cast<std::size_t>(n)][la.up(static_cast<std::uint64_t>(cell), n)];
            const double diff = cur - prev;
            add(diff * diff);
            prev = cur;
        }
        out[static_cast<std::size_t>(cell)] = std::sqrt(s);
    }
    return with_same_storage(f, out);
}

NormReport h1_norms(const GridFunction& f) {
    NormReport r;
    r.h1_maximal = maximal_function(f).lp_norm(1);
    r.h1_square = square_function(f).lp_norm(1);
    if (r.h1_maximal > 0.0) {
        r.ratio = r.h1_square / r.h1_maximal;
        r.ratio_defined = true;
    }
    return r;
}

} // namespace dyadic
