#include "dyadic/reference.hpp"

#include <cmath>

namespace dyadic::ref {

double average(const GridFunction& f, const CubeId& c) {
    // direct sum over every finest cell, membership tested per cell
    double s = 0.0;
    std::uint64_t n = 0;
    for (std::uint64_t lin = 0; lin < f.cell_count(); ++lin) {
        const CubeId cell = cube_from_linear(f.dim(), f.depth(), lin);
        if (contains(c, cell)) {
            s += f.value(lin);
            ++n;
        }
    }
    return s / static_cast<double>(n);
}

GridFunction maximal_function(const GridFunction& f) {
    GridFunction out(f.dim(), f.depth(), Storage::dense);
    for (std::uint64_t lin = 0; lin < f.cell_count(); ++lin) {
        const CubeId cell = cube_from_linear(f.dim(), f.depth(), lin);
        double m = 0.0;
        for (int n = 0; n <= f.depth(); ++n)
            m = std::max(m, std::fabs(average(f, ancestor_at(cell, n))));
        out.set(lin, m);
    }
    return out;
}

GridFunction square_function(const GridFunction& f) {
    GridFunction out(f.dim(), f.depth(), Storage::dense);
    for (std::uint64_t lin = 0; lin < f.cell_count(); ++lin) {
        const CubeId cell = cube_from_linear(f.dim(), f.depth(), lin);
        double prev = average(f, ancestor_at(cell, 0));
        double s = prev * prev;
        for (int n = 1; n <= f.depth(); ++n) {
            const double cur = average(f, ancestor_at(cell, n));
            s += (cur - prev) * (cur - prev);
            prev = cur;
        }
        out.set(lin, std::sqrt(s));
    }
    return out;
}

} // namespace dyadic::ref
