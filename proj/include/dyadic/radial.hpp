#ifndef DYADIC_RADIAL_HPP
#define DYADIC_RADIAL_HPP

#include "dyadic/grid_function.hpp"
#include "dyadic/scaled_real.hpp"
#include "dyadic/shell.hpp"

#include <cstdint>
#include <vector>

namespace dyadic {

double unit_ball_volume(int d);
double unit_sphere_area(int d);

/// Radial profile: `height` on [0,1], linear down to 0 on [1, 1+1/d], zero
/// beyond; `height` is chosen so the kernel integrates to 1 over R^d.
struct RadialKernel {
    int dim = 1;
    double height = 0.0;         // value on the unit ball
    double support_radius = 0.0; // 1 + 1/d
    double floor_constant = 0.0; // c0 = height * |B|: kernel >= c0/|B| on B

    double profile(double r) const;
    /// phi_t(u) = t^(-d) * profile(|u|/t) for a point at distance r = |u|.
    double dilated(double r, double t) const;
    /// Same value, exponent-safe for large d.
    ScaledReal dilated_scaled(double r, double t) const;
};

/// Solves the normalization from the exact shell integral
/// height * [V_d + S_{d-1} * ramp] = 1 (closed-form ramp integral).
RadialKernel kernel_normalize(int d);

/// Independent mass check: 1-D radial quadrature of the dilated kernel
/// (adaptive Simpson, piecewise across the kink). Should return 1.
double kernel_mass_quadrature(const RadialKernel& k, double t, double tol = 1e-9);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};
/// Monte Carlo mass oracle: n uniform samples in the support ball.
McEstimate kernel_mass_monte_carlo(const RadialKernel& k, double t, std::uint64_t n,
                                   std::uint64_t seed);

/// phi_t * f at the point x, by per-cell midpoint quadrature with adaptive
/// subdivision (default 4^d subsamples per cell, refined until successive
/// refinements agree to 1e-4 relative). Dense quadrature limits d to 3.
double convolve(const RadialKernel& k, double t, const GridFunction& f,
                const std::vector<double>& x);

std::vector<double> geometric_t_grid(double t_min, double t_max, int per_decade = 64);

/// max over the grid of |phi_t * f(x)|; a lower bound for the true sup over
/// t (grid discretization); monotone under grid refinement.
double maximal_radial(const RadialKernel& k, const GridFunction& f,
                      const std::vector<double>& x, const std::vector<double>& t_grid);

struct MaximalNormOptions {
    double t_max = 4.0;
    int per_decade = 32;
    double halo = -1.0;          // lattice covers (1+halo)-widened unit cube; default 4/d
    double lattice_spacing = -1.0; // default half a cell, 2^-(L+1)
};

/// ||M a||_L1 / ||a||_L1 per input function, M sampled over a lattice
/// covering the widened unit cube. OpenMP-parallel over lattice points.
std::vector<double> maximal_norm_experiment(const RadialKernel& k,
                                            const std::vector<GridFunction>& atoms,
                                            const MaximalNormOptions& opts = {});

/// phi_{t(x)} * g(x) with t(x) = |x| + 4, for a shell function g. Exact in
/// the exponent (ScaledReal); the cube integrals use midpoint quadrature for
/// d <= 3 and seeded Monte Carlo above.
ScaledReal linearized_T(const RadialKernel& k, const ShellFunction& g,
                        const std::vector<double>& x, std::uint64_t mc_seed = 2024);

struct RingSample {
    double radius = 0.0;
    double lhs_log2 = 0.0; // log2 of the operator value
    double rhs_log2 = 0.0; // log2 of the guaranteed bound c0/(2|B|) (|x|+4)^(-d)
    bool positive = false;
};

struct RingCheck {
    std::vector<RingSample> samples;
    double min_margin_log2 = 0.0; // min over samples of lhs_log2 - rhs_log2
    bool all_hold = false;
};

/// Samples x in the ring d <= |x| <= 2d and checks the pointwise lower bound
/// for T h1 against the kernel's own floor constant.
RingCheck ring_lower_bound_check(const RadialKernel& k, int n_samples, std::uint64_t seed);

} // namespace dyadic

#endif
