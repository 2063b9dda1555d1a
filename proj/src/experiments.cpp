#include "dyadic/experiments.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/hardy.hpp"
#include "dyadic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace dyadic {

Distribution parse_distribution(const std::string& name) {
    if (name == "uniform-cells") return Distribution::uniform_cells;
    if (name == "sparse-spikes") return Distribution::sparse_spikes;
    if (name == "haar-random") return Distribution::haar_random;
    throw parse_error("unknown distribution '" + name +
                      "' (expected uniform-cells|sparse-spikes|haar-random)");
}

std::string distribution_name(Distribution d) {
    switch (d) {
        case Distribution::uniform_cells: return "uniform-cells";
        case Distribution::sparse_spikes: return "sparse-spikes";
        case Distribution::haar_random: return "haar-random";
    }
    return "?";
}

GridFunction gen_random_meanzero(int d, int L, std::uint64_t seed, Distribution dist,
                                 Storage storage) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(L),
                        static_cast<std::uint64_t>(dist) + 1));
    GridFunction f(d, L, storage);
    const std::uint64_t n = f.cell_count();

    switch (dist) {
        case Distribution::uniform_cells: {
            for (std::uint64_t i = 0; i < n; ++i) f.set(i, rng.uniform(-1.0, 1.0));
            break;
        }
        case Distribution::sparse_spikes: {
            // +/- paired spikes keep the function sparse and exactly centered
            const std::uint64_t pairs = std::max<std::uint64_t>(1, n / 16);
            std::set<std::uint64_t> used;
            for (std::uint64_t p = 0; p < pairs; ++p) {
                std::uint64_t a = rng.below(n), b = rng.below(n);
                int guard = 0;
                while ((used.count(a) || used.count(b) || a == b) && guard++ < 64) {
                    a = rng.below(n);
                    b = rng.below(n);
                }
                if (used.count(a) || used.count(b) || a == b) continue;
                used.insert(a);
                used.insert(b);
                const double v = rng.uniform(0.5, 2.0) * std::ldexp(1.0, static_cast<int>(rng.below(7)) - 3);
                f.set(a, v);
                f.set(b, -v);
            }
            break;
        }
        case Distribution::haar_random: {
            // per-cube centered child offsets, added level by level
            std::vector<double> cells(n, 0.0);
            std::vector<double> offsets(std::size_t{1} << d);
            for (int lvl = 0; lvl < L; ++lvl) {
                const std::uint64_t cubes = std::uint64_t{1} << (d * lvl);
                for (std::uint64_t cube_lin = 0; cube_lin < cubes; ++cube_lin) {
                    double mean = 0.0;
                    for (auto& o : offsets) {
                        o = rng.uniform(-1.0, 1.0);
                        mean += o;
                    }
                    mean /= static_cast<double>(offsets.size());
                    const CubeId cube = cube_from_linear(d, lvl, cube_lin);
                    const auto kids = children(cube);
                    for (std::size_t k = 0; k < kids.size(); ++k) {
                        const CubePatch probe(kids[k], L);
                        const double delta = offsets[k] - mean;
                        for (std::uint64_t c = 0; c < probe.cell_count(); ++c)
                            cells[linear_index(probe.global_cell(c))] += delta;
                    }
                }
            }
            for (std::uint64_t i = 0; i < n; ++i)
                if (cells[i] != 0.0) f.set(i, cells[i]);
            break;
        }
    }

    const double mean = f.integral();
    if (mean != 0.0)
        for (std::uint64_t i = 0; i < n; ++i) f.set(i, f.value(i) - mean);
    return f;
}

int ExperimentConfig::depth_for(int d) const {
    const auto it = depth_per_dim.find(d);
    if (it != depth_per_dim.end()) return it->second;
    switch (d) {
        case 1: return 5;
        case 2: return 4;
        case 3: return 3;
        case 4: return 3;
        default: return 2;
    }
}

ScalingRow scaling_row(const GridFunction& f, int trial, Distribution dist, double c_bound) {
    ScalingRow row;
    row.d = f.dim();
    row.L = f.depth();
    row.trial = trial;
    row.dist = dist;

    const NormReport norms = h1_norms(f);
    row.h1_maximal = norms.h1_maximal;
    row.h1_square = norms.h1_square;
    row.ratio = norms.ratio;

    const DecompositionResult r = decompose(f, c_bound);
    row.lambda_sum = r.weight_sum;
    row.lambda_ratio = norms.h1_maximal > 0.0 ? r.weight_sum / norms.h1_maximal : 0.0;
    row.n_atoms = static_cast<int>(r.terms.size());
    row.n_corrections = static_cast<int>(r.correction_atoms.size());

    const double denom = std::max(f.lp_norm(1), 1e-300);
    row.reconstruction_error = reconstruct(r, f.storage()).plus(f, -1.0).lp_norm(1) / denom;

    int total = 0, passed = 0;
    auto take = [&](const WeightedAtom& t) {
        ++total;
        const AtomReport rep = validate_atom(t.atom);
        if (!rep.valid())
            throw validation_error("decompose emitted an invalid atom on cube " +
                                   t.atom.cube.to_string());
        ++passed;
        row.max_parent_avg = std::max(row.max_parent_avg, rep.worst_parent_avg);
        const AtomH1Check h1 = atom_h1_check(t.atom);
        row.max_atom_h1 = std::max(row.max_atom_h1, h1.h1_norm);
        row.max_atom_cprime = std::max(row.max_atom_cprime, h1.pointwise_constant);
    };
    for (const auto& t : r.terms) take(t);
    for (const auto& t : r.correction_atoms) take(t);
    row.pass_rate = total == 0 ? 1.0 : static_cast<double>(passed) / total;
    return row;
}

std::vector<ScalingRow> run_scaling_suite(const ExperimentConfig& cfg) {
    struct Task {
        int d, L, trial;
        Distribution dist;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int d : cfg.dims) {
        const int L = cfg.depth_for(d);
        for (int t = 0; t < cfg.trials; ++t) {
            const auto dist = static_cast<Distribution>(t % 3);
            tasks.push_back({d, L, t,
                             dist,
                             Rng::derive(cfg.seed, static_cast<std::uint64_t>(d),
                                         static_cast<std::uint64_t>(L),
                                         static_cast<std::uint64_t>(t))});
        }
    }

    std::vector<ScalingRow> rows(tasks.size());
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(tasks.size()); ++i) {
        const Task& task = tasks[static_cast<std::size_t>(i)];
        try {
            const Storage storage = task.d >= 5 ? Storage::sparse : Storage::dense;
            const GridFunction f =
                gen_random_meanzero(task.d, task.L, task.seed, task.dist, storage);
            try {
                rows[static_cast<std::size_t>(i)] =
                    scaling_row(f, task.trial, task.dist, cfg.c_bound);
            } catch (const validation_error& e) {
                throw scaling_failure(std::string(e.what()) + " [d=" + std::to_string(task.d) +
                                          " L=" + std::to_string(task.L) +
                                          " trial=" + std::to_string(task.trial) + " dist=" +
                                          distribution_name(task.dist) + "]",
                                      task.d, task.L, task.trial, task.dist, task.seed);
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
    out << "d,L,trial,distribution,h1_maximal,h1_square,ratio,lambda_sum,lambda_ratio,"
           "n_atoms,n_corrections,pass_rate,max_atom_h1,max_atom_cprime,max_parent_avg,"
           "reconstruction_error\r\n";
    for (const auto& r : rows) {
        out << r.d << ',' << r.L << ',' << r.trial << ',' << distribution_name(r.dist) << ','
            << format_double(r.h1_maximal) << ',' << format_double(r.h1_square) << ','
            << format_double(r.ratio) << ',' << format_double(r.lambda_sum) << ','
            << format_double(r.lambda_ratio) << ',' << r.n_atoms << ',' << r.n_corrections << ','
            << format_double(r.pass_rate) << ',' << format_double(r.max_atom_h1) << ','
            << format_double(r.max_atom_cprime) << ',' << format_double(r.max_parent_avg) << ','
            << format_double(r.reconstruction_error) << "\r\n";
    }
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

} // namespace

void write_scaling_aggregates(std::ostream& out, const std::vector<ScalingRow>& rows) {
    std::set<int> dims;
    for (const auto& r : rows) dims.insert(r.d);
    out << "d,n,lambda_ratio_q25,lambda_ratio_q50,lambda_ratio_q75,lambda_ratio_max,"
           "max_atom_h1,max_atom_cprime,min_pass_rate\r\n";
    for (int d : dims) {
        std::vector<double> ratios;
        double max_ratio = 0.0, max_h1 = 0.0, max_cp = 0.0, min_pass = 1.0;
        for (const auto& r : rows) {
            if (r.d != d) continue;
            ratios.push_back(r.lambda_ratio);
            max_ratio = std::max(max_ratio, r.lambda_ratio);
            max_h1 = std::max(max_h1, r.max_atom_h1);
            max_cp = std::max(max_cp, r.max_atom_cprime);
            min_pass = std::min(min_pass, r.pass_rate);
        }
        out << d << ',' << ratios.size() << ',' << format_double(quantile(ratios, 0.25)) << ','
            << format_double(quantile(ratios, 0.5)) << ',' << format_double(quantile(ratios, 0.75))
            << ',' << format_double(max_ratio) << ',' << format_double(max_h1) << ','
            << format_double(max_cp) << ',' << format_double(min_pass) << "\r\n";
    }
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("slope fit needs at least 3 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs varying x");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double resid = y[i] - my - fit.slope * (x[i] - mx);
        rss += resid * resid;
    }
    const double sigma2 = rss / (n - 2.0);
    fit.half_width_95 = 1.96 * std::sqrt(sigma2 / sxx);
    return fit;
}

} // namespace dyadic
