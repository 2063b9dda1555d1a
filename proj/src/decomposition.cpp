#include "dyadic/decomposition.hpp"

#include "dyadic/errors.hpp"
#include "dyadic/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dyadic {

namespace {

constexpr double kMeanTol = 1e-10;
constexpr double kGuardTol = 1e-9;

// Maximal subcubes of `cube` (strictly below it) whose average satisfies
// `pred`; a cube that qualifies is taken and not descended into.
void select_maximal(const LevelSums& sums, const CubeId& cube, int depth,
                    const std::function<bool(double)>& pred, std::vector<CubeId>& out) {
    if (cube.level >= depth) return;
    for (const auto& child : children(cube)) {
        if (pred(sums.average(child))) {
            out.push_back(child);
        } else {
            select_maximal(sums, child, depth, pred, out);
        }
    }
}

void build_children(const LevelSums& sums, StoppingNode& node, int depth) {
    const int band = *node.band;
    if (band + 2 > 1020) return; // threshold beyond double range: nothing breaks through
    const double threshold = std::ldexp(1.0, band + 2);
    std::vector<CubeId> selected;
    select_maximal(sums, node.cube, depth,
                   [&](double avg) { return std::fabs(avg) >= threshold; }, selected);
    std::sort(selected.begin(), selected.end());
    node.children.reserve(selected.size());
    for (auto& c : selected) {
        StoppingNode child;
        child.band = std::ilogb(std::fabs(sums.average(c)));
        child.cube = std::move(c);
        build_children(sums, child, depth);
        node.children.push_back(std::move(child));
    }
}

void collect_pre_atoms(const GridFunction& f, const LevelSums& sums, const StoppingNode& node,
                       double root_maximal_l1, std::vector<PreAtom>& out) {
    const double node_avg = node.band ? sums.average(node.cube) : 0.0;

    CubePatch block = CubePatch::restrict_to(f, node.cube);
    if (node_avg != 0.0)
        for (std::uint64_t i = 0; i < block.cell_count(); ++i) block[i] -= node_avg;

    double weight;
    if (node.band) {
        weight = (std::ldexp(1.0, *node.band + 1) + std::ldexp(1.0, *node.band + 2)) *
                 node.cube.volume();
    } else {
        weight = root_maximal_l1;
    }

    std::vector<CubeId> child_cubes;
    child_cubes.reserve(node.children.size());
    for (const auto& ch : node.children) {
        const double child_avg = sums.average(ch.cube);
        const CubePatch probe(ch.cube, f.depth());
        const double fill = child_avg - node_avg;
        for (std::uint64_t k = 0; k < probe.cell_count(); ++k)
            block[block.local_index(probe.global_cell(k))] = fill;
        child_cubes.push_back(ch.cube);
        const int shift = node.band ? 1 : 0; // non-root sums 2^(band+1), root sums 2^band
        weight += std::ldexp(1.0, *ch.band + shift) * ch.cube.volume();
    }

    if (block.linf_norm() != 0.0) {
        PreAtom p;
        p.cube = node.cube;
        p.block = std::move(block);
        p.weight = weight;
        p.child_cubes = std::move(child_cubes);
        p.band = node.band;
        out.push_back(std::move(p));
    }

    for (const auto& ch : node.children)
        collect_pre_atoms(f, sums, ch, root_maximal_l1, out);
}

} // namespace

StoppingNode build_stopping_tree(const GridFunction& f) {
    const double linf = f.linf_norm();
    if (std::fabs(f.integral()) > kMeanTol * std::max(linf, 1e-300))
        throw std::invalid_argument("stopping tree requires a mean-zero function");

    const LevelSums sums(f);
    StoppingNode root;
    root.cube = unit_cube(f.dim());
    const double tau = 1e-12 * linf;
    std::vector<CubeId> selected;
    select_maximal(sums, root.cube, f.depth(),
                   [&](double avg) { return std::fabs(avg) > tau; }, selected);
    std::sort(selected.begin(), selected.end());
    for (auto& c : selected) {
        StoppingNode child;
        child.band = std::ilogb(std::fabs(sums.average(c)));
        child.cube = std::move(c);
        build_children(sums, child, f.depth());
        root.children.push_back(std::move(child));
    }
    return root;
}

std::vector<PreAtom> pre_atoms(const GridFunction& f, const StoppingNode& tree) {
    const LevelSums sums(f);
    // the root weight carries the maximal-norm term
    const double root_norm = maximal_function(f).lp_norm(1);
    std::vector<PreAtom> out;
    collect_pre_atoms(f, sums, tree, root_norm, out);
    return out;
}

Candidate normalize_and_check(const PreAtom& p) {
    if (!(p.weight > 0.0)) throw internal_error("pre-atom weight must be positive");
    Candidate c;
    c.cube = p.cube;
    c.values = p.block.scaled(1.0 / p.weight);
    c.child_cubes = p.child_cubes;

    // cells inside child cubes are exempt from the outside bound
    std::vector<bool> in_child(c.values.cell_count(), false);
    for (const auto& ch : p.child_cubes) {
        const CubePatch probe(ch, c.values.depth());
        double first = 0.0;
        for (std::uint64_t k = 0; k < probe.cell_count(); ++k) {
            const std::uint64_t local = c.values.local_index(probe.global_cell(k));
            in_child[local] = true;
            if (k == 0)
                first = c.values[local];
            else if (c.values[local] != first)
                throw internal_error("pre-atom is not constant on child cube " + ch.to_string());
        }
    }

    const double outside_bound = (1.0 + kGuardTol) / p.cube.volume();
    for (std::uint64_t i = 0; i < c.values.cell_count(); ++i)
        if (!in_child[i] && std::fabs(c.values[i]) > outside_bound)
            throw internal_error("pre-atom exceeds 1/|Q| outside its children");

    if (c.values.l1_norm() > 1.0 + kGuardTol)
        throw internal_error("pre-atom L1 norm exceeds 1");
    return c;
}

CorrectionOutput correction_pass(const Candidate& candidate, double weight, double c_bound) {
    CorrectionOutput out;
    CubePatch adjusted = candidate.values;

    // group child cubes by dyadic parent, then process big parents first
    std::map<CubeId, std::vector<CubeId>> by_parent;
    for (const auto& ch : candidate.child_cubes) by_parent[parent(ch)].push_back(ch);

    const double candidate_l1 = candidate.values.l1_norm();
    double correction_mass = 0.0;

    for (auto& [par, blacks] : by_parent) {
        std::sort(blacks.begin(), blacks.end());
        std::vector<double> constants(blacks.size());
        std::vector<CubePatch> probes;
        probes.reserve(blacks.size());
        for (std::size_t k = 0; k < blacks.size(); ++k) {
            probes.emplace_back(blacks[k], adjusted.depth());
            constants[k] = adjusted[adjusted.local_index(probes[k].global_cell(0))];
        }
        double mean = 0.0;
        for (double v : constants) mean += v;
        mean /= static_cast<double>(blacks.size());

        bool all_equal = true;
        for (double v : constants)
            if (v != constants[0]) { all_equal = false; break; }
        if (all_equal) continue;

        CubePatch diff(par, adjusted.depth());
        for (std::size_t k = 0; k < blacks.size(); ++k) {
            const double delta = constants[k] - mean;
            for (std::uint64_t cell = 0; cell < probes[k].cell_count(); ++cell) {
                const CubeId gcell = probes[k].global_cell(cell);
                adjusted[adjusted.local_index(gcell)] = mean;
                diff[diff.local_index(gcell)] = delta;
            }
        }
        const double mass = diff.l1_norm();
        if (mass == 0.0) continue;
        correction_mass += mass;

        WeightedAtom corr;
        corr.weight = weight * mass;
        corr.atom.cube = par;
        corr.atom.values = diff.scaled(1.0 / mass);
        corr.atom.black_cubes = blacks;
        corr.atom.c_bound = c_bound;
        out.corrections.push_back(std::move(corr));
    }

    if (correction_mass > 2.0 * candidate_l1 * (1.0 + kGuardTol))
        throw internal_error("correction mass exceeds twice the candidate mass");

    out.adjusted.cube = candidate.cube;
    out.adjusted.values = std::move(adjusted);
    out.adjusted.black_cubes = candidate.child_cubes;
    out.adjusted.c_bound = c_bound;
    return out;
}

DecompositionResult decompose(const GridFunction& f, double c_bound) {
    DecompositionResult result;
    result.dim = f.dim();
    result.depth = f.depth();

    const double mean = f.integral();
    GridFunction centered = f;
    if (mean != 0.0) {
        result.mean_offset = mean;
        centered = GridFunction(f.dim(), f.depth(), f.storage());
        for (std::uint64_t i = 0; i < f.cell_count(); ++i) centered.set(i, f.value(i) - mean);
    }

    result.tree = build_stopping_tree(centered);
    const auto blocks = pre_atoms(centered, result.tree);

    for (const auto& p : blocks) {
        const Candidate cand = normalize_and_check(p);
        const double cand_linf = cand.values.linf_norm();
        CorrectionOutput co = correction_pass(cand, p.weight, c_bound);

        for (auto& corr : co.corrections) {
            result.weight_sum += std::fabs(corr.weight);
            result.correction_atoms.push_back(std::move(corr));
        }

        // fully absorbed by corrections, possibly up to cancellation dust
        if (co.adjusted.values.linf_norm() <= 1e-14 * cand_linf) continue;

        double w = p.weight;
        const double l1 = co.adjusted.values.l1_norm();
        if (l1 > 1.0) { // reconstruction-preserving guard, see normalize_and_check
            co.adjusted.values = co.adjusted.values.scaled(1.0 / l1);
            w *= l1;
        }
        result.weight_sum += std::fabs(w);
        result.terms.push_back(WeightedAtom{w, std::move(co.adjusted)});
    }
    return result;
}

GridFunction reconstruct(const DecompositionResult& r, Storage storage) {
    if (r.dim == 0) throw std::invalid_argument("empty decomposition result");
    GridFunction acc(r.dim, r.depth, storage);
    for (const auto& t : r.terms) t.atom.values.accumulate_into(acc, t.weight);
    for (const auto& t : r.correction_atoms) t.atom.values.accumulate_into(acc, t.weight);
    if (r.mean_offset != 0.0)
        for (std::uint64_t i = 0; i < acc.cell_count(); ++i)
            acc.set(i, acc.value(i) + r.mean_offset);
    return acc;
}

} // namespace dyadic
