#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sphform/polyhedra.hpp"

namespace sphform {

using Edge = std::pair<int, int>;

/// Undirected simple graph on agents 0..n-1.
class InterAgentGraph {
public:
    InterAgentGraph() = default;
    /// Throws std::invalid_argument unless adjacency is square, symmetric,
    /// 0/1-valued and has a zero diagonal.
    explicit InterAgentGraph(Eigen::MatrixXi adjacency);
    static InterAgentGraph from_edges(int n, const std::vector<Edge>& edges);
    static InterAgentGraph empty(int n);
    static InterAgentGraph complete(int n);

    int size() const { return static_cast<int>(adj_.rows()); }
    const Eigen::MatrixXi& adjacency() const { return adj_; }
    bool adjacent(int i, int j) const { return adj_(i, j) != 0; }
    const std::vector<int>& neighbors(int i) const { return nbrs_[static_cast<std::size_t>(i)]; }
    /// Edges (i, j) with i < j in lexicographic order.
    std::vector<Edge> edges() const;
    int edge_count() const;
    bool connected() const;

    friend bool operator==(const InterAgentGraph& a, const InterAgentGraph& b) { return a.adj_ == b.adj_; }

private:
    Eigen::MatrixXi adj_;
    std::vector<std::vector<int>> nbrs_;
};

/// A P == P A.
bool is_automorphism(const InterAgentGraph& g, const Permutation& sigma);

/// Connected and every vertex rotation of the set is an automorphism.
bool satisfies_symmetry_assumption(const InterAgentGraph& g, const SymmetrySet& h);

struct EdgeOrbit {
    Edge representative;
    std::vector<Edge> members;
};

/// Orbits of unordered pairs under the group generated by `generators`.
std::vector<EdgeOrbit> edge_orbits(const std::vector<Permutation>& generators, int n);

struct GraphEnumeration {
    std::vector<EdgeOrbit> orbits;
    /// Nonempty orbit unions, connected or not.
    std::size_t total_unions = 0;
    /// Connected unions, sorted by edge list.
    std::vector<InterAgentGraph> graphs;
};

/// Every connected graph whose edge set is a union of edge orbits, compared as
/// labeled graphs. Throws std::length_error above 24 orbits.
GraphEnumeration enumerate_symmetric_graphs(const std::vector<Permutation>& generators, int n);

/// Backtracking isomorphism test with colour refinement.
bool are_isomorphic(const InterAgentGraph& a, const InterAgentGraph& b);

/// Partition of `graphs` into isomorphism classes; each class lists indices in
/// ascending order and classes are ordered by their first member.
std::vector<std::vector<std::size_t>> isomorphism_classes(const std::vector<InterAgentGraph>& graphs);

/// Edges of the solid itself: vertex pairs at the smallest angular distance.
InterAgentGraph platonic_graph(const SchlafliSolid& s);

/// Vertex quadruples whose pairwise inner products all equal -1/3 within 1e-6.
std::vector<std::array<int, 4>> inscribed_tetrahedra(const SchlafliSolid& s);

/// Lexicographically first partition of the vertices into inscribed tetrahedra.
/// Empty when none exists.
std::vector<std::array<int, 4>> tetrahedral_compound(const SchlafliSolid& s);

/// Disjoint complete graphs on the tetrahedral compound.
InterAgentGraph compound_graph(const SchlafliSolid& s);

/// Each vertex joined to its antipode.
InterAgentGraph antipodal_graph(const SchlafliSolid& s);

/// Default topology per solid: complete for triangular faces, otherwise the
/// tetrahedral compound joined by the antipodal matching.
InterAgentGraph assumption3_graph(const SchlafliSolid& s);

InterAgentGraph graph_union(const InterAgentGraph& a, const InterAgentGraph& b);

}  // namespace sphform
