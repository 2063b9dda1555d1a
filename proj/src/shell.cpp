#include "dyadic/shell.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dyadic {

namespace {

void check_structure(const ShellFunction& g) {
    if (g.dim < 1) throw std::invalid_argument("shell function dimension must be >= 1");
    for (std::size_t i = 0; i + 1 < g.terms.size(); ++i)
        if (g.terms[i].scale >= g.terms[i + 1].scale)
            throw std::invalid_argument("shell scales must be strictly increasing");
}

} // namespace

ScaledReal ShellFunction::integral() const {
    ScaledReal total;
    for (const auto& t : terms)
        total += t.coeff * ScaledReal::pow2(static_cast<std::int64_t>(dim) * (t.scale + 1));
    return total;
}

LowerBoundExample lower_bound_h(int d) {
    if (d < 2) throw std::invalid_argument("the lower-bound example needs d >= 2");
    const auto dd = static_cast<std::int64_t>(d);
    const std::int64_t steps = 2 * static_cast<std::int64_t>(std::floor(std::log2(d)));

    LowerBoundExample out;
    out.big_a_log2 = steps;
    out.h.dim = d;
    out.h.terms = {{0, ScaledReal::pow2(-dd)},
                   {steps, -ScaledReal::pow2(-dd * (steps + 1))}};

    // h^s carries the L1-normalized coefficients 2^{-d(s+1)} and 2^{-d(s+2)},
    // so adjacent shells cancel exactly and the sum telescopes to h.
    out.shells.reserve(static_cast<std::size_t>(steps));
    for (std::int64_t s = 0; s < steps; ++s) {
        ShellFunction hs;
        hs.dim = d;
        hs.terms = {{s, ScaledReal::pow2(-dd * (s + 1))},
                    {s + 1, -ScaledReal::pow2(-dd * (s + 2))}};
        out.shells.push_back(std::move(hs));
    }
    return out;
}

double h1_of_shell_function(const ShellFunction& g) {
    check_structure(g);
    if (g.terms.empty()) return 0.0;

    const auto d = static_cast<std::int64_t>(g.dim);

    {
        // mean zero or the coarse corner averages never die out
        ScaledReal total_abs;
        for (const auto& t : g.terms)
            total_abs += t.coeff.abs() * ScaledReal::pow2(d * (t.scale + 1));
        const ScaledReal mean = g.integral();
        if (!mean.is_zero() &&
            !ScaledReal::abs_less(mean, total_abs * ScaledReal::scaled(0x1p-40, 0)))
            throw std::domain_error("shell function must have zero mean for a finite norm");
    }

    const std::int64_t s_min = g.terms.front().scale;
    const std::int64_t s_max = g.terms.back().scale;

    // Average of g over the dyadic cube of scale 2^l containing a point whose
    // sup-radius bracket is j (2^{j-1} < max_i |x_i| <= 2^j):
    //   * shells with scale >= max(l, j) contain the whole cube: plain coeff
    //   * for l >= j the cube is the corner cube at its scale, so shells with
    //     scale < l contribute coeff * 2^{d(scale - l)}
    //   * smaller shells vanish for l < j
    const auto average_at = [&](std::int64_t j, std::int64_t l) {
        ScaledReal acc;
        for (const auto& t : g.terms) {
            if (t.scale >= std::max(l, j)) {
                acc += t.coeff;
            } else if (l >= j && t.scale < l) {
                acc += t.coeff * ScaledReal::pow2(d * (t.scale - l));
            }
        }
        return acc;
    };

    // sup over scales of |average|; scales below j all give the value of g on
    // the bracket (l = j - 1 representative); scales above s_max + 1 decay
    // geometrically, so the enumeration stops there.
    const auto maximal_on_bracket = [&](std::int64_t j) {
        ScaledReal best = average_at(j, j - 1).abs();
        for (std::int64_t l = j; l <= s_max + 1; ++l) {
            const ScaledReal v = average_at(j, l).abs();
            if (ScaledReal::abs_less(best, v)) best = v;
        }
        return best;
    };

    ScaledReal total;
    // innermost region: all brackets j <= s_min behave identically; volume of
    // the full cube [-2^{s_min}, 2^{s_min}]^d
    total += maximal_on_bracket(s_min) * ScaledReal::pow2(d * (s_min + 1));
    // annuli between consecutive brackets up to the outermost shell; beyond
    // s_max the function and every average vanish (mean zero)
    for (std::int64_t j = s_min + 1; j <= s_max; ++j) {
        const ScaledReal ann_vol =
            ScaledReal::pow2(d * (j + 1)) - ScaledReal::pow2(d * j);
        total += maximal_on_bracket(j) * ann_vol;
    }
    return total.to_double();
}

double shell_pair_h1_closed_form(int d) {
    return 2.0 * (1.0 - std::ldexp(1.0, -d));
}

double lower_bound_h1_closed_form(int d) {
    // one unit per inter-shell bracket, one for the inner cube, one for the
    // outermost annulus, each damped by (1 - 2^-d)
    const double steps = 2.0 * std::floor(std::log2(d));
    return (steps + 1.0) * (1.0 - std::ldexp(1.0, -d));
}

} // namespace dyadic
