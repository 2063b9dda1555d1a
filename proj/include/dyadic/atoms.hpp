#ifndef DYADIC_ATOMS_HPP
#define DYADIC_ATOMS_HPP

#include "dyadic/grid_function.hpp"
#include "dyadic/patch.hpp"

#include <utility>
#include <vector>

namespace dyadic {

/// A candidate atom: values supported on `cube`, a declared family of black
/// cubes on which the function is constant, and the parent-average constant
/// the validator enforces.
struct Atom {
    CubeId cube;
    CubePatch values;                // zero outside cube by construction
    std::vector<CubeId> black_cubes; // strictly inside cube, essentially disjoint
    double c_bound = 8.0;
    bool support_violation = false;  // set when built from a function with mass outside cube

    /// Restricts f to `cube`; flags any mass outside. Structural problems in
    /// the black-cube family throw std::invalid_argument.
    static Atom from_grid(const GridFunction& f, CubeId cube, std::vector<CubeId> blacks,
                          double c_bound = 8.0);
};

/// One boolean per condition; valid() is their conjunction.
struct AtomReport {
    bool mean_ok = false;
    bool support_ok = false;
    bool l1_ok = false;
    bool linf_ok = false;
    bool exceptional_cover_ok = false;
    bool parent_avg_ok = false;
    bool constancy_ok = false;
    double worst_parent_avg = 0.0; // max over blacks of |Q| * |avg over the black's parent|
    double h1_norm = 0.0;          // ||M* a||_L1

    bool valid() const {
        return mean_ok && support_ok && l1_ok && linf_ok && exceptional_cover_ok &&
               parent_avg_ok && constancy_ok;
    }
};

/// Checks, with tolerance 1e-10 where a tolerance applies:
///   (a) mean zero (relative to the L1 mass) and support inside the cube,
///   (b) L1 norm <= 1,
///   (c) Linf norm <= 2^(d+1)/|Q|,
///   (d) {|a| > 1/|Q|} covered by the black cubes, every black parent
///       satisfies |Q|*|average| <= c_bound, and a is exactly constant on
///       each black cube.
/// classical_mode drops (d) and keeps only (a)-(c) (the comparison variant
/// whose constant grows with d).
AtomReport validate_atom(const Atom& a, bool classical_mode = false);

struct AtomH1Check {
    double h1_norm = 0.0;
    double pointwise_constant = 0.0; // smallest C' with M*a <= C'/|Q| + |a|
    bool pointwise_ok = false;
};

/// Requires a valid atom (throws validation_error otherwise). `threshold`
/// bounds the reported pointwise constant.
AtomH1Check atom_h1_check(const Atom& a, double threshold = 8.0);

/// M* of the atom as a patch over its cube (coarser levels never dominate
/// the own-cube average, so the patch tells the whole story).
CubePatch atom_maximal_function(const Atom& a);

/// (parent, immediate black children) groups for the averaging operator.
using ParentBlackPairs = std::vector<std::pair<CubeId, std::vector<CubeId>>>;

/// T(f) = sum over parents of indicator(Q#)/|Q#| * sum over its black
/// children of the integral of f. Parents must be pairwise distinct and each
/// child an immediate descendant of its parent.
GridFunction remark_T(const GridFunction& f, const ParentBlackPairs& pairs);

struct RemarkL2Report {
    double lhs = 0.0;   // integral of |T f|^2
    double rhs = 0.0;   // integral of |f| over the black cubes
    double ratio = 0.0; // lhs/rhs, 0 when rhs == 0
    bool ratio_defined = false;
    double max_parent_avg = 0.0;     // max over parents of |<f>_{Q#}|
    double max_remainder_avg = 0.0;  // max over parents of |int_{Q# \ blacks} f| / |Q#|
    bool hypotheses_ok = false;      // both maxima <= hypothesis_bound
};

RemarkL2Report remark_l2_check(const GridFunction& f, const ParentBlackPairs& pairs,
                               double hypothesis_bound = 8.0);

} // namespace dyadic

#endif
