#include "dyadic/cube.hpp"

#include "dyadic/errors.hpp"

#include <cmath>
#include <sstream>

namespace dyadic {

CubeId::CubeId(int lvl, std::vector<std::uint32_t> idx) : level(lvl), index(std::move(idx)) {
    if (level < 0 || level > kMaxLevel)
        throw std::invalid_argument("cube level out of range: " + std::to_string(level));
    if (index.empty())
        throw std::invalid_argument("cube needs at least one dimension");
    const std::uint64_t bound = std::uint64_t{1} << level;
    for (auto k : index)
        if (k >= bound)
            throw std::invalid_argument("cube index component " + std::to_string(k) +
                                        " out of range at level " + std::to_string(level));
}

double CubeId::volume() const { return std::ldexp(1.0, log2_volume()); }

bool CubeId::operator<(const CubeId& o) const {
    if (level != o.level) return level < o.level;
    return index < o.index;
}

std::string CubeId::to_string() const {
    std::ostringstream os;
    os << level << ':';
    for (int i = 0; i < dim(); ++i) {
        if (i) os << ',';
        os << index[i];
    }
    return os.str();
}

CubeId parent(const CubeId& c) {
    if (c.level < 1) throw std::invalid_argument("root has no parent");
    CubeId p;
    p.level = c.level - 1;
    p.index.resize(c.index.size());
    for (std::size_t i = 0; i < c.index.size(); ++i) p.index[i] = c.index[i] >> 1;
    return p;
}

std::vector<CubeId> children(const CubeId& c) {
    if (c.level >= kMaxLevel)
        throw std::invalid_argument("child level would exceed the supported maximum depth");
    const int d = c.dim();
    std::vector<CubeId> out;
    out.reserve(std::size_t{1} << d);
    const std::uint64_t count = std::uint64_t{1} << d;
    for (std::uint64_t sel = 0; sel < count; ++sel) {
        CubeId ch;
        ch.level = c.level + 1;
        ch.index.resize(d);
        // last coordinate fastest: bit 0 of sel drives the last coordinate
        for (int i = 0; i < d; ++i) {
            const std::uint32_t bit = (sel >> (d - 1 - i)) & 1u;
            ch.index[i] = (c.index[i] << 1) | bit;
        }
        out.push_back(std::move(ch));
    }
    return out;
}

bool contains(const CubeId& outer, const CubeId& inner) {
    if (outer.dim() != inner.dim()) return false;
    if (outer.level > inner.level) return false;
    const int shift = inner.level - outer.level;
    for (int i = 0; i < outer.dim(); ++i)
        if ((inner.index[i] >> shift) != outer.index[i]) return false;
    return true;
}

bool essentially_disjoint(const CubeId& a, const CubeId& b) {
    return !contains(a, b) && !contains(b, a);
}

CubeId ancestor_at(const CubeId& c, int lvl) {
    if (lvl < 0 || lvl > c.level)
        throw std::invalid_argument("ancestor level out of range");
    CubeId a;
    a.level = lvl;
    a.index.resize(c.index.size());
    const int shift = c.level - lvl;
    for (std::size_t i = 0; i < c.index.size(); ++i) a.index[i] = c.index[i] >> shift;
    return a;
}

std::uint64_t linear_index(const CubeId& c) {
    std::uint64_t lin = 0;
    for (int i = 0; i < c.dim(); ++i) lin = (lin << c.level) | c.index[i];
    return lin;
}

CubeId cube_from_linear(int dim, int level, std::uint64_t lin) {
    CubeId c;
    c.level = level;
    c.index.resize(dim);
    const std::uint64_t mask = (level == 0) ? 0 : ((std::uint64_t{1} << level) - 1);
    for (int i = dim - 1; i >= 0; --i) {
        c.index[i] = static_cast<std::uint32_t>(lin & mask);
        lin >>= level;
    }
    return c;
}

CubeId unit_cube(int dim) {
    return CubeId(0, std::vector<std::uint32_t>(static_cast<std::size_t>(dim), 0));
}

CubeId parse_cube(const std::string& text, int expected_dim) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw parse_error("cube must be '<level>:<i1>,<i2>,...', got '" + text + "'");
    int level = 0;
    try {
        level = std::stoi(text.substr(0, colon));
    } catch (const std::exception&) {
        throw parse_error("bad cube level in '" + text + "'");
    }
    std::vector<std::uint32_t> idx;
    std::istringstream is(text.substr(colon + 1));
    std::string piece;
    while (std::getline(is, piece, ',')) {
        try {
            const long long v = std::stoll(piece);
            if (v < 0) throw std::out_of_range("negative");
            idx.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
            throw parse_error("bad cube index component '" + piece + "' in '" + text + "'");
        }
    }
    if (expected_dim > 0 && static_cast<int>(idx.size()) != expected_dim)
        throw parse_error("cube '" + text + "' has " + std::to_string(idx.size()) +
                          " components, expected " + std::to_string(expected_dim));
    try {
        return CubeId(level, std::move(idx));
    } catch (const std::exception& e) {
        throw parse_error(std::string("invalid cube '") + text + "': " + e.what());
    }
}

} // namespace dyadic
