#ifndef DYADIC_HARDY_HPP
#define DYADIC_HARDY_HPP

#include "dyadic/grid_function.hpp"

namespace dyadic {

/// L¹ sizes of the two maximal objects and their quotient.
struct NormReport {
    double h1_maximal = 0.0; // ||sup_n |E_n f|||_L1
    double h1_square = 0.0;  // ||(sum_n |E_{n+1}f - E_n f|^2)^(1/2)||_L1
    double ratio = 0.0;      // h1_square / h1_maximal, 0 when undefined
    bool ratio_defined = false;
};

/// Pointwise sup over levels n = 0..L of |E_n f|. Always >= |f| (level L).
/// OpenMP-parallel over cells; see ref::maximal_function for the
/// ancestor-enumeration oracle.
GridFunction maximal_function(const GridFunction& f);

/// Pointwise sqrt of |E_0 f|^2 + sum over n = 0..L-1 of |E_{n+1}f - E_n f|^2.
/// For mean-zero f the leading term vanishes and this is the plain
/// martingale square function.
GridFunction square_function(const GridFunction& f);

NormReport h1_norms(const GridFunction& f);

} // namespace dyadic

#endif
