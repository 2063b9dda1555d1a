#ifndef DYADIC_REFERENCE_HPP
#define DYADIC_REFERENCE_HPP

#include "dyadic/grid_function.hpp"

namespace dyadic::ref {

// Serial reference implementations. Each one recomputes ancestor averages
// per cell by summing raw cells, sharing nothing with the table-driven fast
// paths. Quadratic-ish cost: intended for tests and the benchmark only.

double average(const GridFunction& f, const CubeId& c);
GridFunction maximal_function(const GridFunction& f);
GridFunction square_function(const GridFunction& f);

} // namespace dyadic::ref

#endif
