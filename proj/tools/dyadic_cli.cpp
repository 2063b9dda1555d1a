// Command-line front end: norms, decompose, validate-atom, scaling,
// kernel-experiment, lower-bound, l2-check.
// Exit codes: 0 success, 1 validation failure, 2 malformed input.

#include "CLI11.hpp"

#include "dyadic/atoms.hpp"
#include "dyadic/decomposition.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/experiments.hpp"
#include "dyadic/hardy.hpp"
#include "dyadic/radial.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shell.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dyadic;

namespace {

std::vector<CubeId> parse_black_list(const std::string& text, int dim) {
    std::vector<CubeId> blacks;
    std::istringstream is(text);
    std::string piece;
    while (std::getline(is, piece, ';'))
        if (!piece.empty()) blacks.push_back(parse_cube(piece, dim));
    return blacks;
}

std::string black_list_string(const std::vector<CubeId>& blacks) {
    std::string out;
    for (std::size_t i = 0; i < blacks.size(); ++i) {
        if (i) out += ';';
        out += blacks[i].to_string();
    }
    return out;
}

struct AtomFile {
    GridFunction values;
    std::optional<CubeId> cube;
    std::vector<CubeId> blacks;
    double lambda = 0.0;
};

// Reads a grid-function file; when the leading "# atom ..." comment is
// present its cube/lambda/black fields come along.
AtomFile load_atom_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::string first;
    std::getline(in, first);
    in.seekg(0);

    AtomFile out{read_grid_function(in, path), std::nullopt, {}, 0.0};
    if (first.rfind("# atom", 0) == 0) {
        std::istringstream hs(first.substr(6));
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("cube=", 0) == 0) {
                out.cube = parse_cube(tok.substr(5), out.values.dim());
            } else if (tok.rfind("lambda=", 0) == 0) {
                out.lambda = std::stod(tok.substr(7));
            } else if (tok.rfind("black=", 0) == 0) {
                out.blacks = parse_black_list(tok.substr(6), out.values.dim());
            }
        }
    }
    return out;
}

void emit_atom_file(const std::string& path, const WeightedAtom& t) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    out << "# atom cube=" << t.atom.cube.to_string() << " lambda=" << format_double(t.weight)
        << " black=" << black_list_string(t.atom.black_cubes) << "\n";
    write_grid_function(out, t.atom.values.to_grid_function(Storage::sparse));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw parse_error("cannot open '" + path + "' for writing");
    return file;
}

int run(int argc, char** argv) {
    CLI::App app{"dimension-free atomic decomposition of dyadic martingale H1"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--threads", threads, "worker threads (default: machine parallelism)");

    // norms
    auto* cmd_norms = app.add_subcommand("norms", "print h1_maximal,h1_square,ratio for a function file");
    std::string norms_file;
    cmd_norms->add_option("file", norms_file)->required();

    // decompose
    auto* cmd_dec = app.add_subcommand("decompose", "atomic decomposition of a function file");
    std::string dec_file, dec_emit_dir;
    bool dec_csv = false;
    cmd_dec->add_option("file", dec_file)->required();
    cmd_dec->add_option("--emit-atoms", dec_emit_dir, "directory for atom files");
    cmd_dec->add_flag("--csv", dec_csv, "print the summary as a CSV row");

    // validate-atom
    auto* cmd_val = app.add_subcommand("validate-atom", "check Definition conditions; exit 0 iff valid");
    std::string val_file, val_cube, val_black;
    double val_cbound = 8.0;
    bool val_classical = false;
    cmd_val->add_option("file", val_file)->required();
    cmd_val->add_option("--cube", val_cube, "supporting cube level:i1,i2,...");
    cmd_val->add_option("--black", val_black, "black cubes, ';'-separated");
    cmd_val->add_option("--c-bound", val_cbound, "parent-average constant (default 8)");
    cmd_val->add_flag("--classical", val_classical, "drop the black-cube condition");

    // scaling
    auto* cmd_scal = app.add_subcommand("scaling", "randomized decomposition suite, CSV output");
    ExperimentConfig cfg;
    std::string scal_dims = "1,2,3", scal_out;
    cmd_scal->add_option("--dims", scal_dims, "dimensions, comma separated");
    cmd_scal->add_option("--trials", cfg.trials, "trials per dimension");
    cmd_scal->add_option("--out", scal_out, "CSV path (aggregates go to <out>_agg.csv)");

    // kernel-experiment
    auto* cmd_ker = app.add_subcommand("kernel-experiment", "radial maximal operator ratios per atom");
    int ker_d = 1;
    std::string ker_dir, ker_out;
    double ker_tmax = 4.0;
    cmd_ker->add_option("--d", ker_d, "dimension")->required();
    cmd_ker->add_option("--atoms", ker_dir, "directory of atom/function files")->required();
    cmd_ker->add_option("--tmax", ker_tmax, "largest dilation");
    cmd_ker->add_option("--out", ker_out, "CSV path");

    // lower-bound
    auto* cmd_low = app.add_subcommand("lower-bound", "two-scale example: exact norms and ring bound");
    std::string low_dims = "4,8,16,32,64", low_out;
    int low_ring_samples = 20;
    cmd_low->add_option("--dims", low_dims, "dimensions, comma separated");
    cmd_low->add_option("--ring-samples", low_ring_samples, "ring sample count per dimension");
    cmd_low->add_option("--out", low_out, "CSV path");

    // l2-check
    auto* cmd_l2 = app.add_subcommand("l2-check", "randomized averaging-operator L2 bound");
    std::string l2_dims = "1,2,3", l2_out;
    int l2_trials = 100;
    double l2_hyp = 8.0;
    cmd_l2->add_option("--dims", l2_dims, "dimensions, comma separated");
    cmd_l2->add_option("--trials", l2_trials, "instances per dimension");
    cmd_l2->add_option("--hyp-bound", l2_hyp, "hypothesis constant");
    cmd_l2->add_option("--out", l2_out, "CSV path");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    auto parse_dims = [](const std::string& text) {
        std::vector<int> dims;
        std::istringstream is(text);
        std::string piece;
        while (std::getline(is, piece, ','))
            if (!piece.empty()) dims.push_back(std::stoi(piece));
        if (dims.empty()) throw parse_error("empty dimension list");
        return dims;
    };

    if (cmd_norms->parsed()) {
        const auto f = load_grid_function(norms_file);
        const auto r = h1_norms(f);
        std::cout << "h1_maximal,h1_square,ratio\r\n"
                  << format_double(r.h1_maximal) << ',' << format_double(r.h1_square) << ','
                  << format_double(r.ratio) << "\r\n";
        return 0;
    }

    if (cmd_dec->parsed()) {
        const auto f = load_grid_function(dec_file);
        const auto r = decompose(f);
        const auto norms = h1_norms(f);

        bool all_valid = true;
        double max_parent_avg = 0.0;
        auto check = [&](const WeightedAtom& t) {
            const auto rep = validate_atom(t.atom);
            all_valid = all_valid && rep.valid();
            max_parent_avg = std::max(max_parent_avg, rep.worst_parent_avg);
        };
        for (const auto& t : r.terms) check(t);
        for (const auto& t : r.correction_atoms) check(t);

        if (!dec_emit_dir.empty()) {
            fs::create_directories(dec_emit_dir);
            int id = 0;
            char name[32];
            for (const auto& t : r.terms) {
                std::snprintf(name, sizeof name, "atom_%04d.txt", id++);
                emit_atom_file((fs::path(dec_emit_dir) / name).string(), t);
            }
            for (const auto& t : r.correction_atoms) {
                std::snprintf(name, sizeof name, "atom_%04d.txt", id++);
                emit_atom_file((fs::path(dec_emit_dir) / name).string(), t);
            }
        }

        if (dec_csv) {
            std::cout << "d,L,h1_maximal,lambda_sum,n_atoms,n_corrections,max_parent_avg\r\n"
                      << r.dim << ',' << r.depth << ',' << format_double(norms.h1_maximal) << ','
                      << format_double(r.weight_sum) << ',' << r.terms.size() << ','
                      << r.correction_atoms.size() << ',' << format_double(max_parent_avg)
                      << "\r\n";
        } else {
            std::cout << "d=" << r.dim << " L=" << r.depth
                      << " h1_maximal=" << format_double(norms.h1_maximal)
                      << " lambda_sum=" << format_double(r.weight_sum)
                      << " n_atoms=" << r.terms.size()
                      << " n_corrections=" << r.correction_atoms.size()
                      << " mean_offset=" << format_double(r.mean_offset)
                      << " atoms_valid=" << (all_valid ? "yes" : "no") << "\n";
        }
        return all_valid ? 0 : 1;
    }

    if (cmd_val->parsed()) {
        const AtomFile file = load_atom_file(val_file);
        CubeId cube = unit_cube(file.values.dim());
        if (!val_cube.empty()) {
            cube = parse_cube(val_cube, file.values.dim());
        } else if (file.cube) {
            cube = *file.cube;
        }
        std::vector<CubeId> blacks = file.blacks;
        if (!val_black.empty()) blacks = parse_black_list(val_black, file.values.dim());

        const Atom atom = Atom::from_grid(file.values, cube, blacks, val_cbound);
        const AtomReport rep = validate_atom(atom, val_classical);
        std::cout << "mean_ok=" << rep.mean_ok << "\nsupport_ok=" << rep.support_ok
                  << "\nl1_ok=" << rep.l1_ok << "\nlinf_ok=" << rep.linf_ok
                  << "\nexceptional_cover_ok=" << rep.exceptional_cover_ok
                  << "\nparent_avg_ok=" << rep.parent_avg_ok
                  << "\nconstancy_ok=" << rep.constancy_ok
                  << "\nworst_parent_avg=" << format_double(rep.worst_parent_avg)
                  << "\nh1_norm=" << format_double(rep.h1_norm)
                  << "\nvalid=" << rep.valid() << "\n";
        return rep.valid() ? 0 : 1;
    }

    if (cmd_scal->parsed()) {
        cfg.seed = seed;
        cfg.dims = parse_dims(scal_dims);
        cfg.out_path = scal_out;
        std::vector<ScalingRow> rows;
        try {
            rows = run_scaling_suite(cfg);
        } catch (const scaling_failure& e) {
            const std::string triage = "triage_d" + std::to_string(e.d) + "_L" +
                                       std::to_string(e.L) + "_t" + std::to_string(e.trial) +
                                       ".txt";
            const Storage storage = e.d >= 5 ? Storage::sparse : Storage::dense;
            save_grid_function(triage, gen_random_meanzero(e.d, e.L, e.seed, e.dist, storage));
            std::cerr << "error: " << e.what() << "\ninstance saved to " << triage << "\n";
            return 1;
        }
        std::ofstream file;
        write_scaling_csv(open_out(file, scal_out), rows);
        if (scal_out.empty()) {
            write_scaling_aggregates(std::cout, rows);
        } else {
            std::ofstream agg(scal_out.substr(0, scal_out.find_last_of('.')) + "_agg.csv");
            write_scaling_aggregates(agg, rows);
        }
        return 0;
    }

    if (cmd_ker->parsed()) {
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(ker_dir))
            if (entry.path().extension() == ".txt") names.push_back(entry.path().string());
        std::sort(names.begin(), names.end());
        if (names.empty()) throw parse_error("no .txt files in '" + ker_dir + "'");

        std::vector<GridFunction> atoms;
        for (const auto& n : names) {
            auto g = load_atom_file(n).values;
            if (g.dim() != ker_d)
                throw parse_error("'" + n + "' has d=" + std::to_string(g.dim()) +
                                  ", expected " + std::to_string(ker_d));
            atoms.push_back(std::move(g));
        }
        MaximalNormOptions opts;
        opts.t_max = ker_tmax;
        const auto ratios = maximal_norm_experiment(kernel_normalize(ker_d), atoms, opts);
        std::ofstream file;
        auto& out = open_out(file, ker_out);
        out << "d,atom,ratio\r\n";
        for (std::size_t i = 0; i < names.size(); ++i)
            out << ker_d << ',' << fs::path(names[i]).filename().string() << ','
                << format_double(ratios[i]) << "\r\n";
        return 0;
    }

    if (cmd_low->parsed()) {
        std::ofstream file;
        auto& out = open_out(file, low_out);
        out << "d,h1_of_h,h1_over_log2d,ring_bound_min_ratio\r\n";
        for (int d : parse_dims(low_dims)) {
            const auto ex = lower_bound_h(d);
            const double h1 = h1_of_shell_function(ex.h);
            const auto ring =
                ring_lower_bound_check(kernel_normalize(d), low_ring_samples, seed);
            out << d << ',' << format_double(h1) << ','
                << format_double(h1 / std::log2(static_cast<double>(d))) << ','
                << format_double(std::exp2(ring.min_margin_log2)) << "\r\n";
        }
        return 0;
    }

    if (cmd_l2->parsed()) {
        std::ofstream file;
        auto& out = open_out(file, l2_out);
        out << "d,L,trial,lhs,rhs,ratio,max_parent_avg,max_remainder_avg,hypotheses_ok\r\n";
        double a_measured = 0.0;
        for (int d : parse_dims(l2_dims)) {
            const int L = d >= 3 ? 3 : 4;
            for (int trial = 0; trial < l2_trials; ++trial) {
                Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(d), 0,
                                    static_cast<std::uint64_t>(trial)));
                auto f = GridFunction::make(d, L);
                for (std::uint64_t i = 0; i < f.cell_count(); ++i)
                    f.set(i, rng.uniform(-1.0, 1.0));
                ParentBlackPairs pairs;
                for (int lvl = 0; lvl + 1 <= L; ++lvl) {
                    if (rng.below(2)) continue;
                    const CubeId par =
                        cube_from_linear(d, lvl, rng.below(std::uint64_t{1} << (d * lvl)));
                    auto kids = children(par);
                    std::vector<CubeId> blacks;
                    for (const auto& k : kids)
                        if (rng.below(2)) blacks.push_back(k);
                    if (blacks.empty()) blacks.push_back(kids[0]);
                    pairs.emplace_back(par, std::move(blacks));
                }
                if (pairs.empty()) continue;
                const auto r = remark_l2_check(f, pairs, l2_hyp);
                out << d << ',' << L << ',' << trial << ',' << format_double(r.lhs) << ','
                    << format_double(r.rhs) << ',' << format_double(r.ratio) << ','
                    << format_double(r.max_parent_avg) << ','
                    << format_double(r.max_remainder_avg) << ',' << (r.hypotheses_ok ? 1 : 0)
                    << "\r\n";
                if (r.hypotheses_ok && r.ratio_defined) a_measured = std::max(a_measured, r.ratio);
            }
        }
        std::cerr << "A_measured=" << format_double(a_measured) << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
