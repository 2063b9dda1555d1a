#ifndef DYADIC_EXPERIMENTS_HPP
#define DYADIC_EXPERIMENTS_HPP

#include "dyadic/decomposition.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/grid_function.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dyadic {

enum class Distribution { uniform_cells, sparse_spikes, haar_random };

Distribution parse_distribution(const std::string& name);
std::string distribution_name(Distribution d);

/// Reproducible mean-zero test instance; the empirical mean is subtracted as
/// the final step, so the integral is zero to machine precision.
GridFunction gen_random_meanzero(int d, int L, std::uint64_t seed, Distribution dist,
                                 Storage storage = Storage::dense);

struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::vector<int> dims = {1, 2, 3};
    std::map<int, int> depth_per_dim; // default by dim, see depth_for()
    int trials = 20;
    double c_bound = 8.0;
    double lambda_cap = 32.0; // abort-worthy ceiling on lambda_sum / h1_maximal
    std::string out_path;     // empty = stdout only

    int depth_for(int d) const;
};

struct ScalingRow {
    int d = 0;
    int L = 0;
    int trial = 0;
    Distribution dist = Distribution::uniform_cells;
    double h1_maximal = 0.0;
    double h1_square = 0.0;
    double ratio = 0.0;
    double lambda_sum = 0.0;
    double lambda_ratio = 0.0;
    int n_atoms = 0;
    int n_corrections = 0;
    double pass_rate = 0.0;
    double max_atom_h1 = 0.0;
    double max_atom_cprime = 0.0;
    double max_parent_avg = 0.0;
    double reconstruction_error = 0.0; // relative L1
};

/// Decompose-and-measure for one instance. Throws validation_error when an
/// emitted atom fails Definition-1 validation (a bug, not data; the caller
/// serializes the instance for triage).
ScalingRow scaling_row(const GridFunction& f, int trial, Distribution dist, double c_bound = 8.0);

/// validation_error plus the parameters to regenerate the offending instance.
class scaling_failure : public validation_error {
public:
    scaling_failure(const std::string& msg, int d, int L, int trial, Distribution dist,
                    std::uint64_t seed)
        : validation_error(msg), d(d), L(L), trial(trial), dist(dist), seed(seed) {}
    int d, L, trial;
    Distribution dist;
    std::uint64_t seed;
};

/// All trials for the config, trial-parallel but trial-order deterministic.
std::vector<ScalingRow> run_scaling_suite(const ExperimentConfig& cfg);

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows);
/// Per-dimension quantiles of lambda_ratio plus worst-case columns.
void write_scaling_aggregates(std::ostream& out, const std::vector<ScalingRow>& rows);

/// Ordinary least squares of y against x with the half-width of the 95%
/// confidence interval for the slope.
struct SlopeFit {
    double slope = 0.0;
    double half_width_95 = 0.0; // 1.96 * standard error
    bool no_increase() const { return slope - half_width_95 <= 0.0; }
};
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace dyadic

#endif
