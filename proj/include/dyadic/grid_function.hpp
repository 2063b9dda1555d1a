#ifndef DYADIC_GRID_FUNCTION_HPP
#define DYADIC_GRID_FUNCTION_HPP

#include "dyadic/cube.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace dyadic {

enum class Storage { dense, sparse };

/// Cell count above which the factory picks sparse storage.
inline constexpr std::uint64_t kDenseCellLimit = std::uint64_t{1} << 22;

/// A piecewise-constant real function on [0,1)^d resolved at the finest
/// dyadic level `depth`. Values live on level-`depth` cells; absent sparse
/// cells are 0. Treat instances as immutable once built: every operation
/// here is pure and returns a fresh object, so concurrent reads are safe.
class GridFunction {
public:
    GridFunction(int dim, int depth, Storage storage);

    /// Picks dense storage while 2^(d*depth) <= kDenseCellLimit, else sparse.
    static GridFunction make(int dim, int depth);
    static GridFunction from_values(int dim, int depth, const std::vector<double>& cells);

    int dim() const { return dim_; }
    int depth() const { return depth_; }
    Storage storage() const { return storage_; }
    std::uint64_t cell_count() const { return cell_count_; }
    /// Volume of one finest cell, 2^(-d*depth).
    double cell_volume() const { return cell_volume_; }

    double value(std::uint64_t cell) const;
    double value(const CubeId& cell) const;
    void set(std::uint64_t cell, double v);
    void set(const CubeId& cell, double v);

    /// Visits every nonzero cell (dense: every stored nonzero; sparse: map
    /// entries). Order is deterministic for dense, unspecified for sparse.
    void for_each_nonzero(const std::function<void(std::uint64_t, double)>& fn) const;

    /// Same function in the other storage; values identical.
    GridFunction to_storage(Storage s) const;

    std::uint64_t nonzero_count() const;

    // -- exact calculus over cells ------------------------------------------

    double integral() const;
    double lp_norm(int p) const; // p in {1,2}
    double linf_norm() const;

    /// Exact mean of the function over c (c.level <= depth).
    double average(const CubeId& c) const;

    /// E_n f: constant on each level-n cube, value = average; represented at
    /// the same depth and storage kind.
    GridFunction conditional_expectation(int n) const;

    // -- algebra --------------------------------------------------------------

    GridFunction scaled(double s) const;
    GridFunction plus(const GridFunction& other, double coeff = 1.0) const;
    double max_abs_difference(const GridFunction& other) const;

private:
    int dim_;
    int depth_;
    Storage storage_;
    std::uint64_t cell_count_;
    double cell_volume_;
    std::vector<double> dense_;
    std::unordered_map<std::uint64_t, double> sparse_;
};

/// Per-level tables of cell-value sums: sums(n)[cube linear index] is the sum
/// of all finest-cell values inside that level-n cube. Averages divide by the
/// cell count. Built once, queried many times by the stopping-time and
/// maximal-function code.
class LevelSums {
public:
    explicit LevelSums(const GridFunction& f);

    int dim() const { return dim_; }
    int depth() const { return depth_; }

    double sum(int level, std::uint64_t cube_lin) const;
    double sum(const CubeId& c) const { return sum(c.level, linear_index(c)); }
    double average(int level, std::uint64_t cube_lin) const;
    double average(const CubeId& c) const { return average(c.level, linear_index(c)); }

    bool dense() const { return dense_mode_; }
    /// Dense-mode only: the full sum table of one level.
    const std::vector<double>& level_table(int level) const;

private:
    int dim_;
    int depth_;
    bool dense_mode_;
    std::vector<std::vector<double>> dense_levels_;
    std::vector<std::unordered_map<std::uint64_t, double>> sparse_levels_;
};

// -- text file format ---------------------------------------------------------
//
//   line 1: d=<int> L=<int> storage=dense|sparse
//   dense : one line of 2^(dL) whitespace-separated values, lexicographic
//           cell order (last coordinate fastest)
//   sparse: one line per nonzero cell: <i_1> ... <i_d> <value>
//
// Lines starting with '#' are comments and are skipped.

GridFunction read_grid_function(std::istream& in, const std::string& path_for_errors);
GridFunction load_grid_function(const std::string& path);
void write_grid_function(std::ostream& out, const GridFunction& f);
void save_grid_function(const std::string& path, const GridFunction& f);

/// 17-significant-digit decimal rendering used by every emitter (round-trips
/// IEEE doubles, keeps output byte-stable).
std::string format_double(double v);

} // namespace dyadic

#endif
