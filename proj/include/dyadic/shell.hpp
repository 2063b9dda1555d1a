#ifndef DYADIC_SHELL_HPP
#define DYADIC_SHELL_HPP

#include "dyadic/scaled_real.hpp"

#include <vector>

namespace dyadic {

/// A finite combination of centered cube indicators on R^d:
///   g = sum_i coeff_i * indicator([-2^(s_i), 2^(s_i)]^d),
/// scales strictly increasing. Coefficients carry their own power-of-two
/// exponents, so d = 64 and beyond stays exact.
struct ShellFunction {
    struct Term {
        std::int64_t scale = 0; // the cube is [-2^scale, 2^scale]^d
        ScaledReal coeff;
    };
    int dim = 1;
    std::vector<Term> terms; // sorted by scale, strictly increasing

    ScaledReal integral() const; // sum of coeff * (2^(scale+1))^d
};

/// The two-scale difference h = 2^{-d} 1_{[-1,1]^d} - (2A)^{-d} 1_{[-A,A]^d}
/// with A = 2^(2 floor(log2 d)), plus the nested shells h^s whose telescoping
/// sum reproduces h exactly.
struct LowerBoundExample {
    ShellFunction h;
    std::vector<ShellFunction> shells; // 2*floor(log2 d) of them
    std::int64_t big_a_log2 = 0;       // log2(A)
};

LowerBoundExample lower_bound_h(int d);

/// Exact ||M* g||_{L1(R^d)} over the standard dyadic lattice. Works by
/// enumerating the dyadic brackets of the sup-norm radius: on each bracket
/// every dyadic average of g is a closed-form combination of shell
/// coefficients, so no grid discretization is involved. The function must
/// have zero mean (otherwise the norm is infinite) -- throws otherwise.
double h1_of_shell_function(const ShellFunction& g);

/// Closed forms the generic evaluator is tested against.
double shell_pair_h1_closed_form(int d);  // 2 (1 - 2^-d), any single h^s
double lower_bound_h1_closed_form(int d); // (2 floor(log2 d) + 1)(1 - 2^-d)

} // namespace dyadic

#endif
