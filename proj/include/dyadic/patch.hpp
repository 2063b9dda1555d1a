#ifndef DYADIC_PATCH_HPP
#define DYADIC_PATCH_HPP

#include "dyadic/cube.hpp"
#include "dyadic/grid_function.hpp"

#include <vector>

namespace dyadic {

/// Dense values over the finest-level cells of one cube. Atoms and pre-atoms
/// live on subcubes; storing them cube-locally keeps a decomposition's memory
/// proportional to the supports instead of #atoms times the full grid.
class CubePatch {
public:
    CubePatch() = default;
    CubePatch(CubeId cube, int depth); // zero-filled

    /// Copies f's cells inside `cube`.
    static CubePatch restrict_to(const GridFunction& f, const CubeId& cube);

    const CubeId& cube() const { return cube_; }
    int dim() const { return cube_.dim(); }
    int depth() const { return depth_; }
    /// Cells per axis inside the cube: 2^(depth - cube.level).
    std::uint64_t side() const { return side_; }
    std::uint64_t cell_count() const { return cells_.size(); }
    double cell_volume() const { return cell_volume_; }

    double& operator[](std::uint64_t local) { return cells_[local]; }
    double operator[](std::uint64_t local) const { return cells_[local]; }

    /// Local linear index of a global finest-level cell (must lie inside).
    std::uint64_t local_index(const CubeId& cell) const;
    /// Global finest-level cell for a local index.
    CubeId global_cell(std::uint64_t local) const;

    /// Sum / mean of cells inside a subcube of this patch's cube.
    double sum_over(const CubeId& sub) const;
    double average_over(const CubeId& sub) const;

    double integral() const;
    double l1_norm() const;
    double linf_norm() const;

    CubePatch scaled(double s) const;

    /// Writes this patch into `acc` (same dim/depth) with coefficient c.
    void accumulate_into(GridFunction& acc, double c) const;

    GridFunction to_grid_function(Storage s) const;

private:
    CubeId cube_;
    int depth_ = 0;
    std::uint64_t side_ = 1;
    double cell_volume_ = 1.0;
    std::vector<double> cells_; // odometer order, last coordinate fastest
};

} // namespace dyadic

#endif
