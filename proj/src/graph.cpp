#include "sphform/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sphform {

InterAgentGraph::InterAgentGraph(Eigen::MatrixXi adjacency)
    : adj_(std::move(adjacency))
{
    if (adj_.rows() != adj_.cols())
        throw std::invalid_argument("adjacency must be square");
    const int n = size();
    nbrs_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (adj_(i, i) != 0)
            throw std::invalid_argument("self-loop at vertex " + std::to_string(i + 1));
        for (int j = 0; j < n; ++j) {
            if (adj_(i, j) != adj_(j, i))
                throw std::invalid_argument("adjacency is not symmetric");
            if (adj_(i, j) != 0 && adj_(i, j) != 1)
                throw std::invalid_argument("adjacency entries must be 0 or 1");
            if (adj_(i, j))
                nbrs_[static_cast<std::size_t>(i)].push_back(j);
        }
    }
}

InterAgentGraph InterAgentGraph::from_edges(int n, const std::vector<Edge>& edges)
{
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (i == j)
            throw std::invalid_argument("self-loop at vertex " + std::to_string(i + 1));
        a(i, j) = a(j, i) = 1;
    }
    return InterAgentGraph(std::move(a));
}

InterAgentGraph InterAgentGraph::empty(int n)
{
    return InterAgentGraph(Eigen::MatrixXi::Zero(n, n));
}

InterAgentGraph InterAgentGraph::complete(int n)
{
    Eigen::MatrixXi a = Eigen::MatrixXi::Ones(n, n);
    a.diagonal().setZero();
    return InterAgentGraph(std::move(a));
}

std::vector<Edge> InterAgentGraph::edges() const
{
    std::vector<Edge> out;
    for (int i = 0; i < size(); ++i)
        for (int j : neighbors(i))
            if (j > i)
                out.emplace_back(i, j);
    return out;
}

int InterAgentGraph::edge_count() const
{
    return adj_.sum() / 2;
}

bool InterAgentGraph::connected() const
{
    const int n = size();
    if (n == 0)
        return false;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : neighbors(v))
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

bool is_automorphism(const InterAgentGraph& g, const Permutation& sigma)
{
    if (sigma.size() != g.size())
        throw std::invalid_argument("permutation and graph sizes differ");
    const Eigen::MatrixXi p = permutation_matrix(sigma);
    return g.adjacency() * p == p * g.adjacency();
}

bool satisfies_symmetry_assumption(const InterAgentGraph& g, const SymmetrySet& h)
{
    if (g.size() != h.solid.n_vertices || !g.connected())
        return false;
    return std::all_of(h.symmetries.begin(), h.symmetries.end(),
                       [&](const RotationalSymmetry& s) { return is_automorphism(g, s.perm); });
}

std::vector<EdgeOrbit> edge_orbits(const std::vector<Permutation>& generators, int n)
{
    auto id = [n](int i, int j) {
        if (i > j)
            std::swap(i, j);
        return i * n + j;
    };
    std::vector<int> parent(static_cast<std::size_t>(n * n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (const auto& g : generators)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const int a = find(id(i, j));
                const int b = find(id(g(i), g(j)));
                if (a != b)
                    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
            }

    std::map<int, EdgeOrbit> by_root;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto& orbit = by_root[find(id(i, j))];
            if (orbit.members.empty())
                orbit.representative = {i, j};
            orbit.members.emplace_back(i, j);
        }
    std::vector<EdgeOrbit> out;
    for (auto& [root, orbit] : by_root)
        out.push_back(std::move(orbit));
    std::sort(out.begin(), out.end(),
              [](const EdgeOrbit& a, const EdgeOrbit& b) { return a.representative < b.representative; });
    return out;
}

GraphEnumeration enumerate_symmetric_graphs(const std::vector<Permutation>& generators, int n)
{
    GraphEnumeration out;
    out.orbits = edge_orbits(generators, n);
    const std::size_t k = out.orbits.size();
    if (k > 24)
        throw std::length_error("too many edge orbits to enumerate: " + std::to_string(k));

    std::vector<std::pair<std::vector<Edge>, InterAgentGraph>> found;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        ++out.total_unions;
        std::vector<Edge> edges;
        for (std::size_t o = 0; o < k; ++o)
            if (mask & (1u << o))
                edges.insert(edges.end(), out.orbits[o].members.begin(), out.orbits[o].members.end());
        std::sort(edges.begin(), edges.end());
        auto g = InterAgentGraph::from_edges(n, edges);
        if (g.connected())
            found.emplace_back(std::move(edges), std::move(g));
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& f : found)
        out.graphs.push_back(std::move(f.second));
    return out;
}

namespace {

// Stable colour refinement on the disjoint union of a and b. Colours are
// shared, so equal colours in both halves are directly comparable.
bool refine(const InterAgentGraph& a, const InterAgentGraph& b, std::vector<int>& ca, std::vector<int>& cb)
{
    const int n = a.size();
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> sig_to_colour;
        std::vector<std::pair<int, std::vector<int>>> sig(static_cast<std::size_t>(2 * n));
        for (int side = 0; side < 2; ++side) {
            const auto& g = side ? b : a;
            const auto& c = side ? cb : ca;
            for (int v = 0; v < n; ++v) {
                std::vector<int> nb;
                for (int w : g.neighbors(v))
                    nb.push_back(c[static_cast<std::size_t>(w)]);
                std::sort(nb.begin(), nb.end());
                sig[static_cast<std::size_t>(side * n + v)] = {c[static_cast<std::size_t>(v)], std::move(nb)};
            }
        }
        for (const auto& s : sig)
            sig_to_colour.emplace(s, 0);
        int next = 0;
        for (auto& [s, c] : sig_to_colour)
            c = next++;

        std::vector<int> na(static_cast<std::size_t>(n));
        std::vector<int> nb(static_cast<std::size_t>(n));
        std::vector<int> count(static_cast<std::size_t>(next), 0);
        for (int v = 0; v < n; ++v) {
            na[static_cast<std::size_t>(v)] = sig_to_colour[sig[static_cast<std::size_t>(v)]];
            nb[static_cast<std::size_t>(v)] = sig_to_colour[sig[static_cast<std::size_t>(n + v)]];
            ++count[static_cast<std::size_t>(na[static_cast<std::size_t>(v)])];
            --count[static_cast<std::size_t>(nb[static_cast<std::size_t>(v)])];
        }
        if (std::any_of(count.begin(), count.end(), [](int x) { return x != 0; }))
            return false;

        auto classes = [](const std::vector<int>& c) {
            return std::set<int>(c.begin(), c.end()).size();
        };
        const bool stable = classes(na) == classes(ca);
        ca = std::move(na);
        cb = std::move(nb);
        if (stable)
            return true;
    }
}

bool search(const InterAgentGraph& a, const InterAgentGraph& b, std::vector<int> ca, std::vector<int> cb)
{
    if (!refine(a, b, ca, cb))
        return false;
    const int n = a.size();
    std::map<int, int> size_of;
    for (int c : ca)
        ++size_of[c];
    int target = -1;
    int best = n + 1;
    for (auto [c, sz] : size_of)
        if (sz > 1 && sz < best) {
            best = sz;
            target = c;
        }
    if (target < 0) {
        // discrete colouring defines the only candidate map
        std::vector<int> where(static_cast<std::size_t>(n));
        for (int w = 0; w < n; ++w)
            where[static_cast<std::size_t>(cb[static_cast<std::size_t>(w)])] = w;
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                if (a.adjacent(v, u) !=
                    b.adjacent(where[static_cast<std::size_t>(ca[static_cast<std::size_t>(v)])],
                               where[static_cast<std::size_t>(ca[static_cast<std::size_t>(u)])]))
                    return false;
        return true;
    }
    const int v = static_cast<int>(std::find(ca.begin(), ca.end(), target) - ca.begin());
    const int fresh = 2 * n + 1;
    for (int w = 0; w < n; ++w) {
        if (cb[static_cast<std::size_t>(w)] != target)
            continue;
        auto na = ca;
        auto nb = cb;
        na[static_cast<std::size_t>(v)] = fresh;
        nb[static_cast<std::size_t>(w)] = fresh;
        if (search(a, b, std::move(na), std::move(nb)))
            return true;
    }
    return false;
}

}  // namespace

bool are_isomorphic(const InterAgentGraph& a, const InterAgentGraph& b)
{
    if (a.size() != b.size() || a.edge_count() != b.edge_count())
        return false;
    const std::vector<int> zero(static_cast<std::size_t>(a.size()), 0);
    return search(a, b, zero, zero);
}

std::vector<std::vector<std::size_t>> isomorphism_classes(const std::vector<InterAgentGraph>& graphs)
{
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        bool placed = false;
        for (auto& c : classes)
            if (are_isomorphic(graphs[c.front()], graphs[i])) {
                c.push_back(i);
                placed = true;
                break;
            }
        if (!placed)
            classes.push_back({i});
    }
    return classes;
}

InterAgentGraph platonic_graph(const SchlafliSolid& s)
{
    const auto& v = s.vertices;
    double closest = -2.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            closest = std::max(closest, v[i].dot(v[j]));
    std::vector<Edge> edges;
    for (int i = 0; i < s.n_vertices; ++i)
        for (int j = i + 1; j < s.n_vertices; ++j)
            if (std::abs(v[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(j)]) - closest) < 1e-9)
                edges.emplace_back(i, j);
    return InterAgentGraph::from_edges(s.n_vertices, edges);
}

std::vector<std::array<int, 4>> inscribed_tetrahedra(const SchlafliSolid& s)
{
    const auto& v = s.vertices;
    const int n = s.n_vertices;
    auto ok = [&](int i, int j) {
        return std::abs(v[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(j)]) + 1.0 / 3.0) < 1e-6;
    };
    std::vector<std::array<int, 4>> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!ok(a, b))
                continue;
            for (int c = b + 1; c < n; ++c) {
                if (!ok(a, c) || !ok(b, c))
                    continue;
                for (int d = c + 1; d < n; ++d)
                    if (ok(a, d) && ok(b, d) && ok(c, d))
                        out.push_back({a, b, c, d});
            }
        }
    return out;
}

std::vector<std::array<int, 4>> tetrahedral_compound(const SchlafliSolid& s)
{
    const auto tets = inscribed_tetrahedra(s);
    const int n = s.n_vertices;
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    std::vector<std::array<int, 4>> chosen;
    // exact cover; the first uncovered vertex must lie in the next tetrahedron
    std::function<bool()> solve = [&]() -> bool {
        const auto it = std::find(covered.begin(), covered.end(), false);
        if (it == covered.end())
            return true;
        const int f = static_cast<int>(it - covered.begin());
        for (const auto& t : tets) {
            if (std::find(t.begin(), t.end(), f) == t.end())
                continue;
            if (std::any_of(t.begin(), t.end(), [&](int x) { return covered[static_cast<std::size_t>(x)]; }))
                continue;
            for (int x : t)
                covered[static_cast<std::size_t>(x)] = true;
            chosen.push_back(t);
            if (solve())
                return true;
            chosen.pop_back();
            for (int x : t)
                covered[static_cast<std::size_t>(x)] = false;
        }
        return false;
    };
    if (!solve())
        return {};
    return chosen;
}

InterAgentGraph compound_graph(const SchlafliSolid& s)
{
    std::vector<Edge> edges;
    for (const auto& t : tetrahedral_compound(s))
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                edges.emplace_back(t[static_cast<std::size_t>(a)], t[static_cast<std::size_t>(b)]);
    return InterAgentGraph::from_edges(s.n_vertices, edges);
}

InterAgentGraph antipodal_graph(const SchlafliSolid& s)
{
    std::vector<Edge> edges;
    const auto& v = s.vertices;
    for (int i = 0; i < s.n_vertices; ++i)
        for (int j = i + 1; j < s.n_vertices; ++j)
            if (v[static_cast<std::size_t>(i)].dot(v[static_cast<std::size_t>(j)]) < -1.0 + 1e-9)
                edges.emplace_back(i, j);
    return InterAgentGraph::from_edges(s.n_vertices, edges);
}

InterAgentGraph graph_union(const InterAgentGraph& a, const InterAgentGraph& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("graph sizes differ");
    return InterAgentGraph(a.adjacency().cwiseMax(b.adjacency()));
}

InterAgentGraph assumption3_graph(const SchlafliSolid& s)
{
    if (s.p == 3)
        return InterAgentGraph::complete(s.n_vertices);
    return graph_union(compound_graph(s), antipodal_graph(s));
}

}  // namespace sphform
