#include "dyadic/grid_function.hpp"

#include "dyadic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dyadic {

namespace {

// Kahan accumulator; the exact-sum guarantees in this module lean on it.
struct CompensatedSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

std::uint64_t checked_cell_count(int dim, int depth) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (depth < 0 || depth > kMaxLevel) throw std::invalid_argument("depth out of range");
    const long bits = static_cast<long>(dim) * depth;
    if (bits > 32)
        throw std::invalid_argument("2^(d*L) cells exceed exact representability (d*L > 32)");
    return std::uint64_t{1} << bits;
}

// Linear index of the level-n ancestor of a level-L cell, mixed radix with
// the last coordinate fastest.
std::uint64_t ancestor_linear(std::uint64_t cell, int dim, int depth, int n) {
    const int shift = depth - n;
    const std::uint64_t cell_mask = (depth == 0) ? 0 : ((std::uint64_t{1} << depth) - 1);
    std::uint64_t out = 0;
    for (int i = 0; i < dim; ++i) {
        const int pos = (dim - 1 - i) * depth;
        const std::uint64_t comp = (cell >> pos) & cell_mask;
        out |= (comp >> shift) << ((dim - 1 - i) * n);
    }
    return out;
}

// Visits the linear indices of all level-`depth` cells inside `c`, in
// lexicographic order (last coordinate fastest, contiguous inner runs).
template <typename Fn>
void for_each_cell_in(int dim, int depth, const CubeId& c, Fn&& fn) {
    const int shift = depth - c.level;
    const std::uint64_t side = std::uint64_t{1} << shift;
    std::vector<std::uint64_t> base(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) base[static_cast<std::size_t>(i)] = std::uint64_t{c.index[static_cast<std::size_t>(i)]} << shift;

    std::vector<std::uint64_t> off(static_cast<std::size_t>(dim), 0);
    while (true) {
        // linear index of (base + off) with off[dim-1] == 0, then inner run
        std::uint64_t lin = 0;
        for (int i = 0; i < dim; ++i) lin = (lin << depth) | (base[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)]);
        for (std::uint64_t k = 0; k < side; ++k) fn(lin + k);

        int i = dim - 2;
        while (i >= 0) {
            if (++off[static_cast<std::size_t>(i)] < side) break;
            off[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
}

} // namespace

GridFunction::GridFunction(int dim, int depth, Storage storage)
    : dim_(dim), depth_(depth), storage_(storage), cell_count_(checked_cell_count(dim, depth)),
      cell_volume_(std::ldexp(1.0, -dim * depth)) {
    if (storage_ == Storage::dense) {
        if (cell_count_ > (std::uint64_t{1} << 24))
            throw std::invalid_argument("dense storage refused above 2^24 cells; use sparse");
        dense_.assign(cell_count_, 0.0);
    }
}

GridFunction GridFunction::make(int dim, int depth) {
    const std::uint64_t n = checked_cell_count(dim, depth);
    return GridFunction(dim, depth, n <= kDenseCellLimit ? Storage::dense : Storage::sparse);
}

GridFunction GridFunction::from_values(int dim, int depth, const std::vector<double>& cells) {
    GridFunction f(dim, depth, Storage::dense);
    if (cells.size() != f.cell_count_)
        throw std::invalid_argument("cell value count mismatch");
    f.dense_ = cells;
    return f;
}

double GridFunction::value(std::uint64_t cell) const {
    if (cell >= cell_count_) throw std::invalid_argument("cell index out of range");
    if (storage_ == Storage::dense) return dense_[cell];
    const auto it = sparse_.find(cell);
    return it == sparse_.end() ? 0.0 : it->second;
}

double GridFunction::value(const CubeId& cell) const {
    if (cell.level != depth_) throw std::invalid_argument("not a finest-level cell");
    return value(linear_index(cell));
}

void GridFunction::set(std::uint64_t cell, double v) {
    if (cell >= cell_count_) throw std::invalid_argument("cell index out of range");
    if (storage_ == Storage::dense) {
        dense_[cell] = v;
    } else if (v == 0.0) {
        sparse_.erase(cell);
    } else {
        sparse_[cell] = v;
    }
}

void GridFunction::set(const CubeId& cell, double v) {
    if (cell.level != depth_) throw std::invalid_argument("not a finest-level cell");
    set(linear_index(cell), v);
}

void GridFunction::for_each_nonzero(const std::function<void(std::uint64_t, double)>& fn) const {
    if (storage_ == Storage::dense) {
        for (std::uint64_t i = 0; i < cell_count_; ++i)
            if (dense_[i] != 0.0) fn(i, dense_[i]);
    } else {
        for (const auto& [k, v] : sparse_) fn(k, v);
    }
}

GridFunction GridFunction::to_storage(Storage s) const {
    if (s == storage_) return *this;
    GridFunction out(dim_, depth_, s);
    for_each_nonzero([&](std::uint64_t i, double v) { out.set(i, v); });
    return out;
}

std::uint64_t GridFunction::nonzero_count() const {
    if (storage_ == Storage::sparse) return sparse_.size();
    std::uint64_t n = 0;
    for (double v : dense_)
        if (v != 0.0) ++n;
    return n;
}

double GridFunction::integral() const {
    CompensatedSum acc;
    for_each_nonzero([&](std::uint64_t, double v) { acc.add(v); });
    return acc.value() * cell_volume_;
}

double GridFunction::lp_norm(int p) const {
    if (p != 1 && p != 2) throw std::invalid_argument("lp_norm supports p in {1,2}");
    CompensatedSum acc;
    if (p == 1) {
        for_each_nonzero([&](std::uint64_t, double v) { acc.add(std::fabs(v)); });
        return acc.value() * cell_volume_;
    }
    for_each_nonzero([&](std::uint64_t, double v) { acc.add(v * v); });
    return std::sqrt(acc.value() * cell_volume_);
}

double GridFunction::linf_norm() const {
    double m = 0.0;
    for_each_nonzero([&](std::uint64_t, double v) { m = std::max(m, std::fabs(v)); });
    return m;
}

double GridFunction::average(const CubeId& c) const {
    if (c.dim() != dim_) throw std::invalid_argument("cube dimension mismatch");
    if (c.level > depth_) throw std::invalid_argument("cube finer than the grid depth");
    const std::uint64_t cells_in = std::uint64_t{1} << (dim_ * (depth_ - c.level));
    CompensatedSum acc;
    if (storage_ == Storage::sparse && sparse_.size() < cells_in) {
        const int shift = depth_ - c.level;
        const std::uint64_t cell_mask = (depth_ == 0) ? 0 : ((std::uint64_t{1} << depth_) - 1);
        for (const auto& [cell, v] : sparse_) {
            bool inside = true;
            for (int i = 0; i < dim_ && inside; ++i) {
                const std::uint64_t comp = (cell >> ((dim_ - 1 - i) * depth_)) & cell_mask;
                inside = (comp >> shift) == c.index[static_cast<std::size_t>(i)];
            }
            if (inside) acc.add(v);
        }
    } else {
        for_each_cell_in(dim_, depth_, c, [&](std::uint64_t lin) { acc.add(value(lin)); });
    }
    return acc.value() / static_cast<double>(cells_in);
}

GridFunction GridFunction::conditional_expectation(int n) const {
    if (n < 0 || n > depth_) throw std::invalid_argument("conditional expectation level out of range");
    GridFunction out(dim_, depth_, storage_);
    const std::uint64_t cells_per_cube = std::uint64_t{1} << (dim_ * (depth_ - n));
    if (storage_ == Storage::dense) {
        std::vector<double> sums(std::size_t{1} << (dim_ * n), 0.0);
        for (std::uint64_t i = 0; i < cell_count_; ++i)
            sums[ancestor_linear(i, dim_, depth_, n)] += dense_[i];
        for (std::uint64_t i = 0; i < cell_count_; ++i)
            out.dense_[i] = sums[ancestor_linear(i, dim_, depth_, n)] / static_cast<double>(cells_per_cube);
    } else {
        std::unordered_map<std::uint64_t, double> sums;
        for (const auto& [cell, v] : sparse_) sums[ancestor_linear(cell, dim_, depth_, n)] += v;
        for (const auto& [cube_lin, s] : sums) {
            const double avg = s / static_cast<double>(cells_per_cube);
            if (avg == 0.0) continue;
            for_each_cell_in(dim_, depth_, cube_from_linear(dim_, n, cube_lin),
                             [&](std::uint64_t lin) { out.sparse_[lin] = avg; });
        }
    }
    return out;
}

GridFunction GridFunction::scaled(double s) const {
    GridFunction out(dim_, depth_, storage_);
    for_each_nonzero([&](std::uint64_t i, double v) { out.set(i, v * s); });
    return out;
}

GridFunction GridFunction::plus(const GridFunction& other, double coeff) const {
    if (other.dim_ != dim_ || other.depth_ != depth_)
        throw std::invalid_argument("grid shape mismatch in plus()");
    GridFunction out = *this;
    other.for_each_nonzero([&](std::uint64_t i, double v) { out.set(i, out.value(i) + coeff * v); });
    return out;
}

double GridFunction::max_abs_difference(const GridFunction& other) const {
    if (other.dim_ != dim_ || other.depth_ != depth_)
        throw std::invalid_argument("grid shape mismatch");
    double m = 0.0;
    for (std::uint64_t i = 0; i < cell_count_; ++i)
        m = std::max(m, std::fabs(value(i) - other.value(i)));
    return m;
}

// -- LevelSums ----------------------------------------------------------------

LevelSums::LevelSums(const GridFunction& f)
    : dim_(f.dim()), depth_(f.depth()), dense_mode_(f.storage() == Storage::dense) {
    if (dense_mode_) {
        dense_levels_.resize(static_cast<std::size_t>(depth_) + 1);
        auto& finest = dense_levels_[static_cast<std::size_t>(depth_)];
        finest.assign(f.cell_count(), 0.0);
        for (std::uint64_t i = 0; i < f.cell_count(); ++i) finest[i] = f.value(i);
        for (int n = depth_ - 1; n >= 0; --n) {
            const auto& lower = dense_levels_[static_cast<std::size_t>(n) + 1];
            auto& cur = dense_levels_[static_cast<std::size_t>(n)];
            cur.assign(std::size_t{1} << (dim_ * n), 0.0);
            for (std::uint64_t i = 0; i < lower.size(); ++i)
                cur[ancestor_linear(i, dim_, n + 1, n)] += lower[i];
        }
    } else {
        sparse_levels_.resize(static_cast<std::size_t>(depth_) + 1);
        f.for_each_nonzero([&](std::uint64_t cell, double v) {
            for (int n = depth_; n >= 0; --n)
                sparse_levels_[static_cast<std::size_t>(n)][ancestor_linear(cell, dim_, depth_, n)] += v;
        });
    }
}

double LevelSums::sum(int level, std::uint64_t cube_lin) const {
    if (level < 0 || level > depth_) throw std::invalid_argument("level out of range");
    if (dense_mode_) return dense_levels_[static_cast<std::size_t>(level)][cube_lin];
    const auto& m = sparse_levels_[static_cast<std::size_t>(level)];
    const auto it = m.find(cube_lin);
    return it == m.end() ? 0.0 : it->second;
}

double LevelSums::average(int level, std::uint64_t cube_lin) const {
    return sum(level, cube_lin) / std::ldexp(1.0, dim_ * (depth_ - level));
}

const std::vector<double>& LevelSums::level_table(int level) const {
    if (!dense_mode_) throw std::logic_error("level_table requires dense mode");
    return dense_levels_[static_cast<std::size_t>(level)];
}

// -- text I/O -------------------------------------------------------------------

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        if (line[i] == '#') continue;
        return true;
    }
    return false;
}

} // namespace

GridFunction read_grid_function(std::istream& in, const std::string& path) {
    std::string line;
    int lineno = 0;
    if (!next_content_line(in, line, lineno))
        throw parse_error(path, lineno, "missing header line");

    int d = -1, L = -1;
    std::string storage_word;
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("d=", 0) == 0) {
                try { d = std::stoi(tok.substr(2)); } catch (...) { d = -1; }
            } else if (tok.rfind("L=", 0) == 0) {
                try { L = std::stoi(tok.substr(2)); } catch (...) { L = -1; }
            } else if (tok.rfind("storage=", 0) == 0) {
                storage_word = tok.substr(8);
            } else {
                throw parse_error(path, lineno, "unexpected header token '" + tok + "'");
            }
        }
    }
    if (d < 1) throw parse_error(path, lineno, "header must declare d=<positive int>");
    if (L < 0) throw parse_error(path, lineno, "header must declare L=<non-negative int>");
    if (storage_word != "dense" && storage_word != "sparse")
        throw parse_error(path, lineno, "header must declare storage=dense|sparse");

    GridFunction f = [&] {
        try {
            return GridFunction(d, L, storage_word == "dense" ? Storage::dense : Storage::sparse);
        } catch (const std::exception& e) {
            throw parse_error(path, lineno, e.what());
        }
    }();

    if (storage_word == "dense") {
        std::uint64_t need = f.cell_count(), got = 0;
        while (got < need && next_content_line(in, line, lineno)) {
            std::istringstream vs(line);
            std::string tok;
            while (vs >> tok) {
                if (got >= need)
                    throw parse_error(path, lineno, "more than 2^(dL) values");
                try {
                    std::size_t used = 0;
                    const double v = std::stod(tok, &used);
                    if (used != tok.size()) throw std::invalid_argument("trailing junk");
                    f.set(got++, v);
                } catch (const std::exception&) {
                    throw parse_error(path, lineno, "bad value '" + tok + "'");
                }
            }
        }
        if (got < need)
            throw parse_error(path, lineno,
                              "expected " + std::to_string(need) + " values, got " + std::to_string(got));
        if (next_content_line(in, line, lineno))
            throw parse_error(path, lineno, "trailing content after dense values");
    } else {
        const std::uint64_t bound = std::uint64_t{1} << L;
        while (next_content_line(in, line, lineno)) {
            std::istringstream vs(line);
            std::vector<std::uint32_t> idx(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                long long comp;
                if (!(vs >> comp))
                    throw parse_error(path, lineno, "expected " + std::to_string(d) + " indices and a value");
                if (comp < 0 || static_cast<std::uint64_t>(comp) >= bound)
                    throw parse_error(path, lineno, "index " + std::to_string(comp) + " out of range [0, 2^L)");
                idx[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(comp);
            }
            double v;
            if (!(vs >> v)) throw parse_error(path, lineno, "missing cell value");
            std::string extra;
            if (vs >> extra) throw parse_error(path, lineno, "trailing junk '" + extra + "'");
            const CubeId cell(L, idx);
            if (f.value(cell) != 0.0)
                throw parse_error(path, lineno, "duplicate cell " + cell.to_string());
            f.set(cell, v);
        }
    }
    return f;
}

GridFunction load_grid_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    return read_grid_function(in, path);
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
    out << "d=" << f.dim() << " L=" << f.depth()
        << " storage=" << (f.storage() == Storage::dense ? "dense" : "sparse") << "\n";
    if (f.storage() == Storage::dense) {
        for (std::uint64_t i = 0; i < f.cell_count(); ++i) {
            if (i) out << ' ';
            out << format_double(f.value(i));
        }
        out << "\n";
    } else {
        std::vector<std::uint64_t> cells;
        f.for_each_nonzero([&](std::uint64_t i, double) { cells.push_back(i); });
        std::sort(cells.begin(), cells.end());
        for (std::uint64_t lin : cells) {
            const CubeId c = cube_from_linear(f.dim(), f.depth(), lin);
            for (int i = 0; i < f.dim(); ++i) out << c.index[static_cast<std::size_t>(i)] << ' ';
            out << format_double(f.value(lin)) << "\n";
        }
    }
}

void save_grid_function(const std::string& path, const GridFunction& f) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    write_grid_function(out, f);
}

} // namespace dyadic
