#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sphform/geometry.hpp"

namespace sphform {

/// One reduced attitude per agent.
using FormationState = std::vector<Vec3>;

/// Regular polyhedron {p,q}: p-gon faces, q faces meeting at every vertex.
///
/// Vertices lie on the unit sphere and are labeled shell by shell: vertex 0,
/// then its q nearest neighbours in rotation order about vertex 0, then the
/// images of vertex 0 under rotation about those neighbours, then antipodes.
struct SchlafliSolid {
    int p = 0;
    int q = 0;
    int n_vertices = 0;
    int n_edges = 0;
    int n_faces = 0;
    FormationState vertices;

    std::string symbol() const;
};

/// Throws std::invalid_argument("not a Platonic solid ...") unless
/// p, q >= 3 and 1/p + 1/q > 1/2.
SchlafliSolid make_solid(int p, int q);

/// Parses "p,q" or "{p,q}".
SchlafliSolid parse_solid(std::string_view text);

/// All five solids in the order {3,3}, {3,4}, {4,3}, {3,5}, {5,3}.
std::vector<SchlafliSolid> platonic_solids();

/// Bijection on {0..n-1}. Printed and parsed 1-based in cycle notation.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return map_; }

    /// Apply *this first, then rhs. Matrices compose as P(a*b) == P(a) P(b).
    Permutation operator*(const Permutation& rhs) const;
    Permutation inverse() const;
    bool is_identity() const;
    /// Smallest k > 0 with this^k == identity.
    int order() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> map_;
};

/// Row i of the result is e_{sigma(i)}^T, so (P x)_i = x_{sigma(i)}.
Eigen::MatrixXi permutation_matrix(const Permutation& sigma);

/// Canonical cycle form such as "(1)(2,3,4)": cycles ordered by their smallest
/// element, each starting at it, fixed points included.
std::string cycle_notation(const Permutation& sigma);

/// Throws std::invalid_argument on malformed text, out-of-range or repeated indices.
Permutation parse_cycles(std::string_view text, int n);

/// Rotation that maps the vertex set onto itself, together with the induced
/// relabeling: rotation * v[i] == v[perm(i)].
struct RotationalSymmetry {
    Mat3 rotation = Mat3::Identity();
    Permutation perm;
    /// Vertex used as the rotation axis, or -1 for other axes.
    int vertex_index = -1;
};

struct SymmetrySet {
    SchlafliSolid solid;
    /// Rotation by 2 pi / q about each vertex, indexed by vertex.
    std::vector<RotationalSymmetry> symmetries;
    /// Closure of the vertex permutations under composition, sorted.
    std::vector<Permutation> group;
};

/// Throws std::runtime_error("symmetry match failed ...") if a rotated vertex
/// has no unique partner within 1e-6.
SymmetrySet derive_symmetries(const SchlafliSolid& s);

/// Every proper rotation preserving the vertex set (orders 12, 24, 60).
std::vector<RotationalSymmetry> full_rotation_group(const SchlafliSolid& s);

/// Smallest set containing the generators that is closed under composition.
std::vector<Permutation> close_group(const std::vector<Permutation>& generators);

/// Greedy bijective matching by increasing distance. result[i] is the index
/// in `to` assigned to from[i].
std::vector<int> greedy_match(const FormationState& from, const FormationState& to);

struct MembershipReport {
    bool member = false;
    bool nondegenerate = false;
    /// Largest |R(Gamma_i) Gamma_j - Gamma_sigma(j)| over all vertices i, j.
    double residual = 0.0;
};

/// Checks that rotating the state by 2 pi / q about any of its own attitudes
/// permutes it, and that not all attitudes coincide.
MembershipReport formation_membership(const FormationState& state, const SchlafliSolid& s,
                                      double tol = 1e-6);

}  // namespace sphform
