#include "dyadic/radial.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dyadic {

namespace {

constexpr double kQuadTol = 1e-4;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

// standard normal via Box-Muller; deterministic across platforms
double gaussian(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u == 0.0) u = uniform01(rng);
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
}

// uniform point in the ball of radius R around the origin
std::vector<double> uniform_in_ball(int d, double R, std::mt19937_64& rng) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    for (auto& c : x) {
        c = gaussian(rng);
        norm2 += c * c;
    }
    const double norm = std::sqrt(norm2);
    const double r = R * std::pow(uniform01(rng), 1.0 / d);
    for (auto& c : x) c *= r / norm;
    return x;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// composite Simpson on [a,b] with 2^k panels, doubled until tol
template <typename Fn>
double adaptive_simpson(Fn&& fn, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    int n = 8;
    auto eval = [&](int panels) {
        const double h = (b - a) / panels;
        double s = fn(a) + fn(b);
        for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * h);
        return s * h / 3.0;
    };
    double prev = eval(n);
    for (int round = 0; round < 14; ++round) {
        n *= 2;
        const double cur = eval(n);
        if (std::fabs(cur - prev) <= tol * std::max(std::fabs(cur), 1e-30)) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace

double unit_ball_volume(int d) {
    return std::exp(0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0));
}

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

double RadialKernel::profile(double r) const {
    if (r <= 1.0) return height;
    if (r >= support_radius) return 0.0;
    return height * (1.0 - dim * (r - 1.0));
}

double RadialKernel::dilated(double r, double t) const {
    return std::pow(t, -dim) * profile(r / t);
}

ScaledReal RadialKernel::dilated_scaled(double r, double t) const {
    const double p = profile(r / t);
    if (p == 0.0) return ScaledReal();
    const double e = -static_cast<double>(dim) * std::log2(t);
    const double ip = std::floor(e);
    return ScaledReal::scaled(p * std::exp2(e - ip), static_cast<std::int64_t>(ip));
}

RadialKernel kernel_normalize(int d) {
    if (d < 1) throw std::invalid_argument("kernel dimension must be >= 1");
    RadialKernel k;
    k.dim = d;
    k.support_radius = 1.0 + 1.0 / d;
    // ramp integral int_1^{1+1/d} (1 - d(r-1)) r^(d-1) dr, closed form
    const double b = k.support_radius;
    const double bd = std::pow(b, d);
    const double ramp = (1.0 + d) * (bd - 1.0) / d - d * (bd * b - 1.0) / (d + 1.0);
    const double vd = unit_ball_volume(d);
    k.height = 1.0 / (vd * (1.0 + d * ramp));
    k.floor_constant = k.height * vd; // = 1/(1 + d*ramp), dimension-free
    return k;
}

double kernel_mass_quadrature(const RadialKernel& k, double t, double tol) {
    const double area = unit_sphere_area(k.dim);
    auto inner = [&](double r) { return area * std::pow(r, k.dim - 1) * k.dilated(r, t); };
    // split at the kink r = t
    return adaptive_simpson(inner, 0.0, t, tol) +
           adaptive_simpson(inner, t, t * k.support_radius, tol);
}

McEstimate kernel_mass_monte_carlo(const RadialKernel& k, double t, std::uint64_t n,
                                   std::uint64_t seed) {
    const double R = t * k.support_radius;
    const double vol = unit_ball_volume(k.dim) * std::pow(R, k.dim);

    // fixed-size chunks, partials combined in chunk order: the estimate does
    // not depend on the thread count
    const std::uint64_t chunk = 1 << 14;
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0), sqsums(n_chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(c + 1));
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
        const std::uint64_t hi = std::min(n, lo + chunk);
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const auto x = uniform_in_ball(k.dim, R, rng);
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            const double val = k.dilated(std::sqrt(r2), t);
            s += val;
            s2 += val * val;
        }
        sums[static_cast<std::size_t>(c)] = s;
        sqsums[static_cast<std::size_t>(c)] = s2;
    }
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        s += sums[c];
        s2 += sqsums[c];
    }
    const double mean = s / static_cast<double>(n);
    const double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    McEstimate e;
    e.estimate = vol * mean;
    e.std_error = vol * std::sqrt(var / static_cast<double>(n));
    return e;
}

double convolve(const RadialKernel& k, double t, const GridFunction& f,
                const std::vector<double>& x) {
    if (f.dim() != k.dim) throw std::invalid_argument("kernel/function dimension mismatch");
    if (static_cast<int>(x.size()) != f.dim())
        throw std::invalid_argument("evaluation point dimension mismatch");
    if (f.dim() > 3) throw std::invalid_argument("dense convolution quadrature is limited to d <= 3");
    if (!(t > 0.0)) throw std::invalid_argument("dilation parameter must be positive");

    const int d = f.dim();
    const double reach = t * k.support_radius;
    const double cell_size = std::ldexp(1.0, -f.depth());

    int q0 = 4;
    if (reach < cell_size) {
        // kernel support is sub-cell: refine right away
        while (cell_size / q0 > 0.5 * t && q0 < 64) q0 *= 2;
    }

    double total = 0.0;
    f.for_each_nonzero([&](std::uint64_t lin, double value) {
        const CubeId cell = cube_from_linear(d, f.depth(), lin);
        // distance from x to the cell box
        double dist2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double lo = cell.index[static_cast<std::size_t>(i)] * cell_size;
            const double hi = lo + cell_size;
            const double gap = std::max({lo - x[static_cast<std::size_t>(i)],
                                         x[static_cast<std::size_t>(i)] - hi, 0.0});
            dist2 += gap * gap;
        }
        if (dist2 >= reach * reach) return;

        auto midpoint = [&](int q) {
            const double h = cell_size / q;
            const double sub_vol = std::pow(h, d);
            double acc = 0.0;
            std::vector<int> it(static_cast<std::size_t>(d), 0);
            std::vector<double> y(static_cast<std::size_t>(d));
            while (true) {
                double r2 = 0.0;
                for (int i = 0; i < d; ++i) {
                    y[static_cast<std::size_t>(i)] =
                        cell.index[static_cast<std::size_t>(i)] * cell_size +
                        (it[static_cast<std::size_t>(i)] + 0.5) * h;
                    const double diff = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
                    r2 += diff * diff;
                }
                acc += k.profile(std::sqrt(r2) / t);
                int i = d - 1;
                while (i >= 0) {
                    if (++it[static_cast<std::size_t>(i)] < q) break;
                    it[static_cast<std::size_t>(i)] = 0;
                    --i;
                }
                if (i < 0) break;
            }
            return acc * sub_vol * std::pow(t, -d);
        };

        int q = q0;
        double prev = midpoint(q);
        const double floor_scale = 1e-12 * k.height * std::pow(t, -d) * std::pow(cell_size, d);
        while (q < 64) {
            q *= 2;
            const double cur = midpoint(q);
            const bool converged = std::fabs(cur - prev) <= kQuadTol * std::fabs(cur) + floor_scale;
            prev = cur;
            if (converged) break;
        }
        total += value * prev;
    });
    return total;
}

std::vector<double> geometric_t_grid(double t_min, double t_max, int per_decade) {
    if (!(t_min > 0.0) || !(t_max >= t_min) || per_decade < 1)
        throw std::invalid_argument("bad t grid parameters");
    std::vector<double> grid;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double t = t_min; t <= t_max * (1.0 + 1e-12); t *= step) grid.push_back(t);
    return grid;
}

double maximal_radial(const RadialKernel& k, const GridFunction& f,
                      const std::vector<double>& x, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("empty dilation grid");
    double m = 0.0;
    for (double t : t_grid) m = std::max(m, std::fabs(convolve(k, t, f, x)));
    return m;
}

std::vector<double> maximal_norm_experiment(const RadialKernel& k,
                                            const std::vector<GridFunction>& atoms,
                                            const MaximalNormOptions& opts) {
    std::vector<double> ratios;
    ratios.reserve(atoms.size());
    for (const auto& f : atoms) {
        const int d = f.dim();
        if (d != k.dim) throw std::invalid_argument("kernel/atom dimension mismatch");
        const double halo = opts.halo > 0.0 ? opts.halo : 4.0 / d;
        const double spacing =
            opts.lattice_spacing > 0.0 ? opts.lattice_spacing : std::ldexp(1.0, -(f.depth() + 1));
        const double lo = -0.5 * halo;
        const double width = 1.0 + halo;
        const auto t_grid = geometric_t_grid(std::ldexp(1.0, -(f.depth() + 2)), opts.t_max,
                                             opts.per_decade);

        const std::int64_t per_axis = static_cast<std::int64_t>(std::ceil(width / spacing)) + 1;
        std::int64_t n_points = 1;
        for (int i = 0; i < d; ++i) n_points *= per_axis;

        std::vector<double> values(static_cast<std::size_t>(n_points), 0.0);
#pragma omp parallel for schedule(dynamic, 8)
        for (std::int64_t p = 0; p < n_points; ++p) {
            std::vector<double> x(static_cast<std::size_t>(d));
            std::int64_t rem = p;
            for (int i = d - 1; i >= 0; --i) {
                x[static_cast<std::size_t>(i)] = lo + static_cast<double>(rem % per_axis) * spacing;
                rem /= per_axis;
            }
            values[static_cast<std::size_t>(p)] = maximal_radial(k, f, x, t_grid);
        }
        double sum = 0.0;
        for (double v : values) sum += v;
        const double l1 = sum * std::pow(spacing, d);
        const double denom = f.lp_norm(1);
        ratios.push_back(denom > 0.0 ? l1 / denom : 0.0);
    }
    return ratios;
}

ScaledReal linearized_T(const RadialKernel& k, const ShellFunction& g,
                        const std::vector<double>& x, std::uint64_t mc_seed) {
    if (g.dim != k.dim) throw std::invalid_argument("kernel/shell dimension mismatch");
    if (static_cast<int>(x.size()) != g.dim)
        throw std::invalid_argument("evaluation point dimension mismatch");
    const int d = g.dim;
    double norm2 = 0.0;
    for (double c : x) norm2 += c * c;
    const double t = std::sqrt(norm2) + 4.0;

    // t^(-d) as an exact exponent split
    const double e = -static_cast<double>(d) * std::log2(t);
    const double ip = std::floor(e);
    const ScaledReal t_pow = ScaledReal::scaled(std::exp2(e - ip), static_cast<std::int64_t>(ip));

    ScaledReal total;
    for (const auto& term : g.terms) {
        const double half_side = std::ldexp(1.0, static_cast<int>(term.scale));
        // mean of profile(|x-y|/t) over the cube [-2^s, 2^s]^d
        double mean_profile = 0.0;
        if (d <= 3) {
            int q = 8;
            auto midpoint = [&](int qq) {
                const double h = 2.0 * half_side / qq;
                double acc = 0.0;
                std::vector<int> it(static_cast<std::size_t>(d), 0);
                while (true) {
                    double r2 = 0.0;
                    for (int i = 0; i < d; ++i) {
                        const double y = -half_side + (it[static_cast<std::size_t>(i)] + 0.5) * h;
                        const double diff = y - x[static_cast<std::size_t>(i)];
                        r2 += diff * diff;
                    }
                    acc += k.profile(std::sqrt(r2) / t);
                    int i = d - 1;
                    while (i >= 0) {
                        if (++it[static_cast<std::size_t>(i)] < qq) break;
                        it[static_cast<std::size_t>(i)] = 0;
                        --i;
                    }
                    if (i < 0) break;
                }
                return acc / std::pow(static_cast<double>(qq), d);
            };
            double prev = midpoint(q);
            while (q < 128) {
                q *= 2;
                const double cur = midpoint(q);
                const bool done = std::fabs(cur - prev) <= 1e-5 * std::fabs(cur) + 1e-14 * k.height;
                prev = cur;
                if (done) break;
            }
            mean_profile = prev;
        } else {
            // seeded Monte Carlo over the cube; profile values are O(height)
            std::mt19937_64 rng(mc_seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(term.scale + 7)));
            const std::uint64_t n = 1 << 16;
            double acc = 0.0;
            std::vector<double> y(static_cast<std::size_t>(d));
            for (std::uint64_t i = 0; i < n; ++i) {
                double r2 = 0.0;
                for (int c = 0; c < d; ++c) {
                    y[static_cast<std::size_t>(c)] = (2.0 * uniform01(rng) - 1.0) * half_side;
                    const double diff = y[static_cast<std::size_t>(c)] - x[static_cast<std::size_t>(c)];
                    r2 += diff * diff;
                }
                acc += k.profile(std::sqrt(r2) / t);
            }
            mean_profile = acc / static_cast<double>(n);
        }
        // cube volume = 2^{d(s+1)}
        const ScaledReal cube_vol = ScaledReal::pow2(static_cast<std::int64_t>(d) * (term.scale + 1));
        total += term.coeff * cube_vol * ScaledReal(mean_profile);
    }
    return total * t_pow;
}

RingCheck ring_lower_bound_check(const RadialKernel& k, int n_samples, std::uint64_t seed) {
    const int d = k.dim;
    ShellFunction h1;
    h1.dim = d;
    h1.terms = {{0, ScaledReal::pow2(-d)}};

    // rhs prefactor c0 / (2 |B|), exponent-safe
    const double vd = unit_ball_volume(d);
    const ScaledReal prefactor =
        ScaledReal(k.floor_constant) * ScaledReal(0.5) *
        ScaledReal::scaled(std::exp2(-std::log2(vd) + std::floor(std::log2(vd))),
                           -static_cast<std::int64_t>(std::floor(std::log2(vd))));

    std::mt19937_64 rng(seed);
    RingCheck out;
    out.all_hold = true;
    out.min_margin_log2 = 1e300;
    for (int s = 0; s < n_samples; ++s) {
        std::vector<double> x(static_cast<std::size_t>(d));
        double norm2 = 0.0;
        for (auto& c : x) {
            c = gaussian(rng);
            norm2 += c * c;
        }
        const double radius = d * (1.0 + uniform01(rng)); // uniform in [d, 2d]
        const double scale = radius / std::sqrt(norm2);
        for (auto& c : x) c *= scale;

        const ScaledReal lhs = linearized_T(k, h1, x, seed + static_cast<std::uint64_t>(s));
        const double te = -static_cast<double>(d) * std::log2(radius + 4.0);
        const ScaledReal rhs =
            prefactor * ScaledReal::scaled(std::exp2(te - std::floor(te)),
                                           static_cast<std::int64_t>(std::floor(te)));

        RingSample row;
        row.radius = radius;
        row.positive = lhs.sign() > 0;
        row.lhs_log2 = row.positive ? lhs.log2_abs() : -1e300;
        row.rhs_log2 = rhs.log2_abs();
        const double margin = row.lhs_log2 - row.rhs_log2;
        out.min_margin_log2 = std::min(out.min_margin_log2, margin);
        if (!row.positive || margin < 0.0) out.all_hold = false;
        out.samples.push_back(row);
    }
    return out;
}

} // namespace dyadic
