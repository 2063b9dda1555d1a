#ifndef DYADIC_CUBE_HPP
#define DYADIC_CUBE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dyadic {

/// Deepest refinement level the index arithmetic supports (index components
/// fit 32 bits with headroom for children()).
inline constexpr int kMaxLevel = 30;

/// A dyadic cube in [0,1)^d: sidelength 2^(-level), lower corner at
/// index * 2^(-level) componentwise. Cubes at a fixed level tile the domain.
struct CubeId {
    int level = 0;
    std::vector<std::uint32_t> index; // size d, each component < 2^level

    CubeId() = default;
    CubeId(int lvl, std::vector<std::uint32_t> idx);

    int dim() const { return static_cast<int>(index.size()); }

    /// |Q| = 2^(-d*level), exact.
    double volume() const;
    /// log2 of the volume, exact integer arithmetic.
    int log2_volume() const { return -dim() * level; }

    bool operator==(const CubeId& o) const = default;

    /// Strict lexicographic order: level first, then index components.
    bool operator<(const CubeId& o) const;

    std::string to_string() const; // "level:i1,i2,..."
};

/// Immediate dyadic ancestor (one scale above). Throws for the root.
CubeId parent(const CubeId& c);

/// The 2^d cubes at level+1 tiling c, lexicographic with the last
/// coordinate fastest.
std::vector<CubeId> children(const CubeId& c);

/// True iff inner is contained in outer (as sets; equality counts).
bool contains(const CubeId& outer, const CubeId& inner);

/// Dyadic cubes overlap iff one contains the other; "essentially disjoint"
/// means neither does (distinct, non-nested).
bool essentially_disjoint(const CubeId& a, const CubeId& b);

/// The level-`lvl` ancestor of c (lvl <= c.level).
CubeId ancestor_at(const CubeId& c, int lvl);

/// Mixed-radix linear index of a cube among all cubes of its level, with the
/// last coordinate fastest. Inverse of cube_from_linear.
std::uint64_t linear_index(const CubeId& c);
CubeId cube_from_linear(int dim, int level, std::uint64_t lin);

/// Root cube [0,1)^d.
CubeId unit_cube(int dim);

/// Parses "level:i1,i2,..." (the CLI/file syntax). Throws parse_error.
CubeId parse_cube(const std::string& text, int expected_dim);

} // namespace dyadic

#endif
