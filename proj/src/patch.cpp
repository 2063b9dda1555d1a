#include "dyadic/patch.hpp"

#include "dyadic/errors.hpp"

#include <cmath>

namespace dyadic {

CubePatch::CubePatch(CubeId cube, int depth) : cube_(std::move(cube)), depth_(depth) {
    if (depth_ < cube_.level) throw std::invalid_argument("patch depth above the cube level");
    const long bits = static_cast<long>(cube_.dim()) * (depth_ - cube_.level);
    if (bits > 32) throw std::invalid_argument("patch too fine (d*(L-level) > 32)");
    side_ = std::uint64_t{1} << (depth_ - cube_.level);
    cell_volume_ = std::ldexp(1.0, -cube_.dim() * depth_);
    cells_.assign(std::uint64_t{1} << bits, 0.0);
}

CubePatch CubePatch::restrict_to(const GridFunction& f, const CubeId& cube) {
    CubePatch p(cube, f.depth());
    for (std::uint64_t local = 0; local < p.cell_count(); ++local)
        p.cells_[local] = f.value(linear_index(p.global_cell(local)));
    return p;
}

std::uint64_t CubePatch::local_index(const CubeId& cell) const {
    if (cell.level != depth_ || !contains(cube_, cell))
        throw std::invalid_argument("cell not a finest-level cell of this patch");
    const int shift = depth_ - cube_.level;
    std::uint64_t local = 0;
    for (int i = 0; i < dim(); ++i) {
        const std::uint64_t off =
            cell.index[static_cast<std::size_t>(i)] -
            (std::uint64_t{cube_.index[static_cast<std::size_t>(i)]} << shift);
        local = (local << shift) | off;
    }
    return local;
}

CubeId CubeId_from_local(const CubeId& cube, int depth, std::uint64_t local) {
    const int shift = depth - cube.level;
    const std::uint64_t mask = (shift == 0) ? 0 : ((std::uint64_t{1} << shift) - 1);
    CubeId cell;
    cell.level = depth;
    cell.index.resize(static_cast<std::size_t>(cube.dim()));
    for (int i = cube.dim() - 1; i >= 0; --i) {
        const std::uint64_t off = local & mask;
        cell.index[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(
            (std::uint64_t{cube.index[static_cast<std::size_t>(i)]} << shift) + off);
        local >>= shift;
    }
    return cell;
}

CubeId CubePatch::global_cell(std::uint64_t local) const {
    return CubeId_from_local(cube_, depth_, local);
}

double CubePatch::sum_over(const CubeId& sub) const {
    if (!contains(cube_, sub)) throw std::invalid_argument("subcube outside the patch cube");
    if (sub.level > depth_) throw std::invalid_argument("subcube finer than the patch depth");
    // local odometer over the subcube's cells
    const int shift = depth_ - sub.level;
    const std::uint64_t run = std::uint64_t{1} << shift;
    const int cube_shift = depth_ - cube_.level;
    const int d = dim();
    std::vector<std::uint64_t> base(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        base[static_cast<std::size_t>(i)] =
            (std::uint64_t{sub.index[static_cast<std::size_t>(i)]} << shift) -
            (std::uint64_t{cube_.index[static_cast<std::size_t>(i)]} << cube_shift);

    double s = 0.0, comp = 0.0;
    std::vector<std::uint64_t> off(static_cast<std::size_t>(d), 0);
    while (true) {
        std::uint64_t local = 0;
        for (int i = 0; i < d; ++i)
            local = (local << cube_shift) | (base[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)]);
        for (std::uint64_t k = 0; k < run; ++k) {
            const double y = cells_[local + k] - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        int i = d - 2;
        while (i >= 0) {
            if (++off[static_cast<std::size_t>(i)] < run) break;
            off[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return s;
}

double CubePatch::average_over(const CubeId& sub) const {
    return sum_over(sub) / std::ldexp(1.0, dim() * (depth_ - sub.level));
}

double CubePatch::integral() const {
    double s = 0.0, comp = 0.0;
    for (double v : cells_) {
        const double y = v - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s * cell_volume_;
}

double CubePatch::l1_norm() const {
    double s = 0.0, comp = 0.0;
    for (double v : cells_) {
        const double y = std::fabs(v) - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s * cell_volume_;
}

double CubePatch::linf_norm() const {
    double m = 0.0;
    for (double v : cells_) m = std::max(m, std::fabs(v));
    return m;
}

CubePatch CubePatch::scaled(double s) const {
    CubePatch out = *this;
    for (auto& v : out.cells_) v *= s;
    return out;
}

void CubePatch::accumulate_into(GridFunction& acc, double c) const {
    if (acc.dim() != dim() || acc.depth() != depth_)
        throw std::invalid_argument("accumulator shape mismatch");
    for (std::uint64_t local = 0; local < cell_count(); ++local) {
        if (cells_[local] == 0.0) continue;
        const std::uint64_t g = linear_index(global_cell(local));
        acc.set(g, acc.value(g) + c * cells_[local]);
    }
}

GridFunction CubePatch::to_grid_function(Storage s) const {
    GridFunction out(dim(), depth_, s);
    accumulate_into(out, 1.0);
    return out;
}

} // namespace dyadic
