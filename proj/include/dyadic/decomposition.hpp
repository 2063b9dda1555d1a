#ifndef DYADIC_DECOMPOSITION_HPP
#define DYADIC_DECOMPOSITION_HPP

#include "dyadic/atoms.hpp"
#include "dyadic/grid_function.hpp"
#include "dyadic/patch.hpp"

#include <optional>
#include <vector>

namespace dyadic {

/// One stopping cube: the band exponent b brackets the average,
/// 2^b <= |<f>_cube| < 2^(b+1). Children are the maximal subcubes whose
/// average breaks through 2^(b+2). The root node is the unit cube and has no
/// band (its average is zero).
struct StoppingNode {
    CubeId cube;
    std::optional<int> band;
    std::vector<StoppingNode> children;

    /// |cube| = 2^(-size_exponent()); recorded for completeness, unused.
    int size_exponent() const { return cube.dim() * cube.level; }
};

/// Unnormalized decomposition block of one stopping node.
struct PreAtom {
    CubeId cube;
    CubePatch block;              // mean zero, supported on cube
    double weight = 0.0;          // always > 0
    std::vector<CubeId> child_cubes;
    std::optional<int> band;      // copied from the node (nullopt for the root)
};

struct WeightedAtom {
    double weight = 0.0;
    Atom atom;
};

struct DecompositionResult {
    std::vector<WeightedAtom> terms;            // adjusted atoms, node order
    std::vector<WeightedAtom> correction_atoms; // per parent, node then size order
    StoppingNode tree;
    double weight_sum = 0.0;   // sum of |weight| over everything emitted
    double mean_offset = 0.0;  // subtracted before decomposing, re-added by reconstruct
    int dim = 0;
    int depth = 0;
};

/// Stopping-time tree: first generation = maximal dyadic subcubes with
/// nonzero average (threshold 1e-12 * ||f||_inf); deeper generations break
/// through 2^(band+2). Requires mean zero.
StoppingNode build_stopping_tree(const GridFunction& f);

/// The telescoping blocks: summing every block reproduces f exactly.
std::vector<PreAtom> pre_atoms(const GridFunction& f, const StoppingNode& tree);

/// block/weight with internal-consistency checks (outside-children bound,
/// L1 bound, child-value route equality). Violations throw internal_error.
struct Candidate {
    CubeId cube;
    CubePatch values;
    std::vector<CubeId> child_cubes;
};
Candidate normalize_and_check(const PreAtom& p);

/// Sibling-averaging pass: within each black parent the candidate's values
/// are replaced by their mean, the difference leaves as mean-zero correction
/// atoms (weight = node weight * L1 mass). Parents processed in decreasing
/// size, ties lexicographic.
struct CorrectionOutput {
    Atom adjusted;
    std::vector<WeightedAtom> corrections; // weights already scaled by `weight`
};
CorrectionOutput correction_pass(const Candidate& candidate, double weight, double c_bound = 8.0);

/// Full pipeline. General f is centered first (mean recorded in the result).
DecompositionResult decompose(const GridFunction& f, double c_bound = 8.0);

/// Sum of weight * atom over all terms plus the recorded mean. Storage
/// follows the original function's choice via `storage`.
GridFunction reconstruct(const DecompositionResult& r, Storage storage = Storage::dense);

} // namespace dyadic

#endif
